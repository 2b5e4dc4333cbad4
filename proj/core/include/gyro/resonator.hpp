#pragma once

namespace gyro::design {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

struct Substrate {
  double eps_r = 1.0;   // relative permittivity
  double height = 0.0;  // m

  void validate() const;
};

// FR4 board used for the 5.7 GHz ring: eps_r = 4.4, 0.8 mm.
inline constexpr Substrate kFr4{4.4, 0.8e-3};

struct RingGeometry {
  double r_mean = 0.0;     // m
  double trace_width = 0.0;  // m
  double alpha_fet = 0.0;  // gap angle, rad
  int mode = 1;            // integer m in the 2*m*pi phase condition

  // Slotted line length (2*pi - alpha_fet) * r_mean.
  double line_length() const;
  void validate() const;
};

// Quasi-static microstrip effective permittivity, valid for W/H >= 1:
//   eps_e = (eps_r + 1)/2 + (eps_r - 1)/2 * (1 + 12 H/W)^(-1/2)
double effective_permittivity(const Substrate& sub, double trace_width);

// Z0 = 120 pi / (sqrt(eps_e) [W/H + 1.393 + 2/3 ln(W/H + 1.444)]), W/H >= 1.
double microstrip_z0(const Substrate& sub, double trace_width);

// Guided wavelength c / (f sqrt(eps_e)).
double guided_wavelength(double f_hz, const Substrate& sub, double trace_width);

// Sizes the ring so that beta * l + fet_phase = 2 m pi at `f_target`.
// `alpha_fet` is the geometric gap angle; `fet_phase` the electrical phase
// the loaded gap adds. Throws ValidationError("infeasible phase budget")
// when the required line length is not positive.
RingGeometry ring_geometry_for(double f_target, const Substrate& sub, double trace_width,
                               double alpha_fet, double fet_phase = 0.0, int mode = 1);

// Frequency at which `g` satisfies beta(f) * l + fet_phase = 2 m pi.
double resonance_frequency(const RingGeometry& g, const Substrate& sub, double fet_phase = 0.0);

}  // namespace gyro::design
