#pragma once

#include <Eigen/Core>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace gyro::ferrite {

using Vec3 = Eigen::Vector3d;

// Electron gyromagnetic ratio, 2*pi * 2.8 MHz/Oe, in rad/s/Oe.
inline constexpr double kGammaElectron = 2.0 * std::numbers::pi * 2.8e6;

// Gaussian-CGS state of a biased ferrite.
struct FerriteParams {
  double h0 = 0.0;       // internal dc bias, Oe
  double m0_4pi = 0.0;   // saturation magnetization 4*pi*M0, G
  double alpha = 0.0;    // Gilbert damping
  double gamma = kGammaElectron;

  // Throws ValidationError when any invariant is violated.
  void validate() const;
};

// Relative permeability tensor
//   [[ mu, -j k, 0 ],
//    [ j k,  mu, 0 ],
//    [ 0,    0,  1 ]]
struct PolderTensor {
  std::complex<double> mu{1.0};
  std::complex<double> k{0.0};

  Eigen::Matrix3cd matrix() const;
};

// omega_0 = gamma * H0.
double larmor_frequency(const FerriteParams& p);

// Lossless Polder tensor at angular frequency `omega`, with
//   mu = 1 + w0 wM / (w0^2 - w^2),  k = w wM / (w0^2 - w^2),  wM = gamma 4 pi M0.
// Throws NumericalError within `guard * omega_0` of the resonance pole.
PolderTensor polder_tensor(const FerriteParams& p, double omega, double guard = 1e-6);

// LLG right-hand side, rewritten in explicit Landau-Lifshitz form:
//   dM/dt = g'(M x H) - g' alpha/|M| M x (M x H),   g' = gamma / (1 + alpha^2).
// With gamma > 0 a moment tilted off +z precesses clockwise seen from +z.
Vec3 llg_rhs(const Vec3& m, const Vec3& h, const FerriteParams& p);

// m x h split by the part of m parallel to h and the part transverse to
// it. The longitudinal part never produces torque.
struct TorqueSplit {
  Vec3 longitudinal;
  Vec3 transverse;
};
TorqueSplit split_torque(const Vec3& m, const Vec3& h);

struct MagnetizationState {
  Vec3 m;    // G
  double t;  // s
};

using FieldHistory = std::function<Vec3(double t)>;

struct IntegrateOptions {
  bool renormalize = false;  // rescale |m| after each step; hides drift
  double max_drift = 0.01;   // relative |m| drift treated as instability
};

// Fixed-step RK4. Returns the initial state plus one state per step.
// Throws NumericalError("step size too large ...") once |m| drifts past
// `max_drift`.
std::vector<MagnetizationState> integrate_llg(const Vec3& m_init, const FieldHistory& h_of_t,
                                              const FerriteParams& p, double dt, double t_end,
                                              const IntegrateOptions& options = {});

// Angular frequency from the mean spacing of m_x zero crossings.
double precession_frequency(const std::vector<MagnetizationState>& trajectory);

}  // namespace gyro::ferrite
