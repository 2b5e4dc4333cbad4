#include "gyro/resonator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "gyro/errors.hpp"

namespace gyro::design {

namespace {

constexpr double kPi = std::numbers::pi;

double width_ratio(const Substrate& sub, double trace_width) {
  sub.validate();
  if (!(trace_width > 0.0)) throw ValidationError("trace width must be > 0");
  const double ratio = trace_width / sub.height;
  if (!(ratio >= 1.0)) {
    std::ostringstream os;
    os << "outside validity range: W/H = " << ratio << " < 1";
    throw ValidationError(os.str());
  }
  return ratio;
}

}  // namespace

void Substrate::validate() const {
  if (!(eps_r >= 1.0)) throw ValidationError("substrate eps_r must be >= 1");
  if (!(height > 0.0)) throw ValidationError("substrate height must be > 0");
}

double RingGeometry::line_length() const { return (2.0 * kPi - alpha_fet) * r_mean; }

void RingGeometry::validate() const {
  if (!(r_mean > 0.0)) throw ValidationError("ring r_mean must be > 0");
  if (!(alpha_fet >= 0.0 && alpha_fet < 2.0 * kPi)) {
    throw ValidationError("ring gap angle must lie in [0, 2*pi)");
  }
  if (mode < 1) throw ValidationError("ring mode index must be >= 1");
}

double effective_permittivity(const Substrate& sub, double trace_width) {
  const double wh = width_ratio(sub, trace_width);
  return 0.5 * (sub.eps_r + 1.0) + 0.5 * (sub.eps_r - 1.0) / std::sqrt(1.0 + 12.0 / wh);
}

double microstrip_z0(const Substrate& sub, double trace_width) {
  const double wh = width_ratio(sub, trace_width);
  const double eps_e = effective_permittivity(sub, trace_width);
  return 120.0 * kPi /
         (std::sqrt(eps_e) * (wh + 1.393 + (2.0 / 3.0) * std::log(wh + 1.444)));
}

double guided_wavelength(double f_hz, const Substrate& sub, double trace_width) {
  if (!(f_hz > 0.0)) throw ValidationError("frequency must be > 0");
  return kSpeedOfLight / (f_hz * std::sqrt(effective_permittivity(sub, trace_width)));
}

RingGeometry ring_geometry_for(double f_target, const Substrate& sub, double trace_width,
                               double alpha_fet, double fet_phase, int mode) {
  if (mode < 1) throw ValidationError("ring mode index must be >= 1");
  if (!(alpha_fet >= 0.0 && alpha_fet < 2.0 * kPi)) {
    throw ValidationError("ring gap angle must lie in [0, 2*pi)");
  }
  const double lambda_g = guided_wavelength(f_target, sub, trace_width);
  const double beta = 2.0 * kPi / lambda_g;
  const double length = (2.0 * kPi * mode - fet_phase) / beta;
  if (!(length > 0.0)) {
    std::ostringstream os;
    os << "infeasible phase budget: 2*m*pi - fet_phase = " << 2.0 * kPi * mode - fet_phase;
    throw ValidationError(os.str());
  }
  return {length / (2.0 * kPi - alpha_fet), trace_width, alpha_fet, mode};
}

double resonance_frequency(const RingGeometry& g, const Substrate& sub, double fet_phase) {
  g.validate();
  const double beta = (2.0 * kPi * g.mode - fet_phase) / g.line_length();
  if (!(beta > 0.0)) throw ValidationError("infeasible phase budget");
  const double eps_e = effective_permittivity(sub, g.trace_width);
  return beta * kSpeedOfLight / (2.0 * kPi * std::sqrt(eps_e));
}

}  // namespace gyro::design
