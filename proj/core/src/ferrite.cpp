#include "gyro/ferrite.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <sstream>

#include "gyro/errors.hpp"

namespace gyro::ferrite {

void FerriteParams::validate() const {
  if (!(h0 >= 0.0)) throw ValidationError("ferrite h0 must be >= 0 Oe");
  if (!(m0_4pi >= 0.0)) throw ValidationError("ferrite 4*pi*M0 must be >= 0 G");
  if (!(alpha >= 0.0)) throw ValidationError("Gilbert damping must be >= 0");
  if (!(gamma > 0.0)) throw ValidationError("gyromagnetic ratio must be > 0");
}

Eigen::Matrix3cd PolderTensor::matrix() const {
  const std::complex<double> j{0.0, 1.0};
  Eigen::Matrix3cd t = Eigen::Matrix3cd::Zero();
  t(0, 0) = mu;
  t(0, 1) = -j * k;
  t(1, 0) = j * k;
  t(1, 1) = mu;
  t(2, 2) = 1.0;
  return t;
}

double larmor_frequency(const FerriteParams& p) { return p.gamma * p.h0; }

PolderTensor polder_tensor(const FerriteParams& p, double omega, double guard) {
  p.validate();
  const double w0 = larmor_frequency(p);
  const double wm = p.gamma * p.m0_4pi;
  const double band = guard * w0;
  if (std::abs(std::abs(omega) - w0) <= band) {
    std::ostringstream os;
    os << "on-resonance singularity: omega = " << omega << " rad/s is within " << band
       << " rad/s of omega_0 = " << w0 << " rad/s";
    throw NumericalError(os.str());
  }
  const double denom = w0 * w0 - omega * omega;
  return {1.0 + w0 * wm / denom, omega * wm / denom};
}

Vec3 llg_rhs(const Vec3& m, const Vec3& h, const FerriteParams& p) {
  const double norm = m.norm();
  if (!(norm > 0.0)) throw ValidationError("unmagnetized state: |m| = 0");
  const double g = p.gamma / (1.0 + p.alpha * p.alpha);
  const Vec3 mxh = m.cross(h);
  return g * mxh - (g * p.alpha / norm) * m.cross(mxh);
}

TorqueSplit split_torque(const Vec3& m, const Vec3& h) {
  const double hn = h.norm();
  if (hn == 0.0) return {Vec3::Zero(), Vec3::Zero()};
  const Vec3 axis = h / hn;
  const Vec3 m_long = axis * axis.dot(m);
  return {m_long.cross(h), (m - m_long).cross(h)};
}

std::vector<MagnetizationState> integrate_llg(const Vec3& m_init, const FieldHistory& h_of_t,
                                              const FerriteParams& p, double dt, double t_end,
                                              const IntegrateOptions& options) {
  p.validate();
  if (!(dt > 0.0)) throw ValidationError("integrate_llg: dt must be > 0");
  if (!(t_end >= dt)) throw ValidationError("integrate_llg: t_end must be >= dt");
  const double m0 = m_init.norm();
  if (!(m0 > 0.0)) throw ValidationError("unmagnetized state: |m| = 0");

  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  std::vector<MagnetizationState> traj;
  traj.reserve(steps + 1);
  traj.push_back({m_init, 0.0});

  Vec3 m = m_init;
  for (std::size_t i = 0; i < steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    const Vec3 k1 = llg_rhs(m, h_of_t(t), p);
    const Vec3 k2 = llg_rhs(m + 0.5 * dt * k1, h_of_t(t + 0.5 * dt), p);
    const Vec3 k3 = llg_rhs(m + 0.5 * dt * k2, h_of_t(t + 0.5 * dt), p);
    const Vec3 k4 = llg_rhs(m + dt * k3, h_of_t(t + dt), p);
    m += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

    const double drift = std::abs(m.norm() - m0) / m0;
    if (!(drift <= options.max_drift)) {
      std::ostringstream os;
      os << "step size too large: dt = " << dt << " s gave relative |m| drift " << drift
         << " at t = " << t + dt << " s";
      throw NumericalError(os.str());
    }
    if (options.renormalize) m *= m0 / m.norm();
    traj.push_back({m, static_cast<double>(i + 1) * dt});
  }
  return traj;
}

double precession_frequency(const std::vector<MagnetizationState>& trajectory) {
  std::vector<double> crossings;
  for (std::size_t i = 1; i < trajectory.size(); ++i) {
    const double a = trajectory[i - 1].m.x();
    const double b = trajectory[i].m.x();
    if ((a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0)) {
      const double ta = trajectory[i - 1].t;
      const double tb = trajectory[i].t;
      crossings.push_back(ta + (tb - ta) * a / (a - b));
    }
  }
  if (crossings.size() < 3) {
    throw ValidationError("trajectory too short: " + std::to_string(crossings.size()) +
                          " zero crossings of m_x, need 3");
  }
  const double spacing =
      (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
  return std::numbers::pi / spacing;
}

}  // namespace gyro::ferrite
