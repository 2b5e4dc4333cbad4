#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gyro/jones.hpp"
#include "gyro/smatrix.hpp"

namespace gyro {

// Linear (x, y) -> circular (RHCP, LHCP) basis, with the fixed 1/2
// normalization:
//   rr = [xx + yy + i(xy - yx)] / 2     rl = [xx - yy - i(xy + yx)] / 2
//   lr = [xx - yy + i(xy + yx)] / 2     ll = [xx + yy - i(xy - yx)] / 2
CircularJones lin_to_circ(const JonesMatrix& j);
// Exact inverse of lin_to_circ.
JonesMatrix circ_to_lin(const CircularJones& c);

// (|rr| - |ll|) / (|rr| + |ll|): +1 RHCP, -1 LHCP, 0 linear.
// Throws UndefinedPolarization when both co-circular terms vanish.
double ellipticity(const CircularJones& c);

// How the rotation angle is read off the co-circular ratio ll/rr.
enum class RotationReading {
  PhaseDifference,  // arg(ll/rr) / 2, signed, in (-pi/2, pi/2]
  MagnitudeRatio,   // atan(|ll|/|rr|) / 2, unsigned; for comparison only
};

// Polarization rotation (Faraday for transmission blocks, Kerr for
// reflection blocks). Throws UndefinedPolarization when rr == 0.
double rotation_angle(const CircularJones& c,
                      RotationReading reading = RotationReading::PhaseDifference);

enum class Incidence { Port1, Port2 };

struct PolarimetryPoint {
  double frequency_hz = 0.0;
  // Empty where the quantity is undefined at this frequency (a gap).
  std::optional<double> theta_f;
  std::optional<double> theta_f_unwrapped;
  std::optional<double> delta_f;
  std::optional<double> theta_k;
  std::optional<double> theta_k_unwrapped;
  std::optional<double> delta_k;
  JonesMatrix transmission;  // block toward the far port, (x, y) order
  JonesMatrix reflection;    // block at the incidence port
};

struct PolarimetrySweep {
  Incidence incidence = Incidence::Port1;
  std::vector<PolarimetryPoint> points;

  std::size_t size() const noexcept { return points.size(); }
  std::vector<double> frequencies() const;
};

struct AnalyzeOptions {
  RotationReading reading = RotationReading::PhaseDifference;
  unsigned threads = 1;
};

// Polarimetry at one frequency; gaps are left empty, never thrown.
PolarimetryPoint analyze_point(const FloquetSMatrix& s, Incidence incidence,
                               RotationReading reading = RotationReading::PhaseDifference);

PolarimetrySweep analyze_sweep(const FloquetSweep& sweep, Incidence incidence,
                               const AnalyzeOptions& options = {});

// Continuity-unwrapped copy of a rotation trace. Rotations are only
// defined modulo pi, so jumps larger than pi/2 are folded back. Gaps stay
// gaps and do not reset the running offset.
std::vector<std::optional<double>> unwrap_rotation(
    const std::vector<std::optional<double>>& principal);

// Mean co-polarized transmission magnitude (|xx| + |yy|) / 2.
double copol_magnitude(const JonesMatrix& t);

// Frequency of minimum co-polarized transmission, refined by a parabola
// through the dB values of the minimum and its neighbours. Throws
// AnalysisVerdict("no resonance found") when the minimum is on the edge of
// the band or the curve is flat; ValidationError for fewer than 3 points.
double find_resonance(const PolarimetrySweep& p);

}  // namespace gyro
