#include "gyro/polarimetry_csv.hpp"

#include <cstdio>
#include <optional>
#include <sstream>

namespace gyro::io {

namespace {

std::string field(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string field(const std::optional<double>& v) { return v ? field(*v) : std::string{}; }

void jones_columns(std::ostream& os, const JonesMatrix& j) {
  for (const Complex& z : {j.xx, j.yy, j.xy, j.yx}) os << ',' << field(std::abs(z));
  for (const Complex& z : {j.xx, j.yy, j.xy, j.yx}) os << ',' << field(std::arg(z));
}

}  // namespace

std::string export_polarimetry_csv(const PolarimetrySweep& p) {
  std::ostringstream os;
  os << "freq_hz,theta_f_rad,theta_f_unwrapped_rad,delta_f,theta_k_rad,delta_k,"
        "mag_txx,mag_tyy,mag_txy,mag_tyx,phase_txx_rad,phase_tyy_rad,phase_txy_rad,phase_tyx_rad,"
        "mag_rxx,mag_ryy,mag_rxy,mag_ryx,phase_rxx_rad,phase_ryy_rad,phase_rxy_rad,phase_ryx_rad,"
        "theta_k_unwrapped_rad\n";
  for (const auto& pt : p.points) {
    os << field(pt.frequency_hz) << ',' << field(pt.theta_f) << ',' << field(pt.theta_f_unwrapped)
       << ',' << field(pt.delta_f) << ',' << field(pt.theta_k) << ',' << field(pt.delta_k);
    jones_columns(os, pt.transmission);
    jones_columns(os, pt.reflection);
    os << ',' << field(pt.theta_k_unwrapped) << '\n';
  }
  return os.str();
}

}  // namespace gyro::io
