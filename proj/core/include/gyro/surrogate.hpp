#pragma once

#include <Eigen/Core>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gyro/optimize.hpp"
#include "gyro/polarimetry.hpp"
#include "gyro/smatrix.hpp"

namespace gyro {

// Uniform grid of `points` frequencies from f_start to f_stop inclusive.
std::vector<double> linear_grid(double f_start, double f_stop, std::size_t points);

// Default analysis band: 4-7 GHz, 801 points.
std::vector<double> default_grid();

// Behavioral model of a transistor-loaded ring. The ring carries two
// counter-rotating modes; the unilateral element suppresses one of them.
//
//   t_R(f) = il_bg - g L(f)              L(f) = 1 / (1 + 2 i q (f - f0) / f0)
//   t_L(f) = il_bg - (1 - u) g L(f)
//
// Reflection follows the complement r_p = refl_bg (1 - t_p).
struct SurrogateParams {
  double f0 = 5.7e9;      // ring resonance, Hz
  double q_loaded = 30.0;
  double u = 0.0;         // unilaterality: 0 reciprocal ring, 1 one-way
  double g = 1.0;         // resonant coupling amplitude
  double il_bg = 0.9;     // background co-pol transmission
  double refl_bg = 0.3;   // background reflection

  void validate() const;
};

// Unit-cell S-matrix at one frequency. Transmission and reflection blocks
// are the same lab-frame Jones matrices for both incidence directions, so
// u = 0 gives S = S^T exactly and u > 0 gives t_xy = -t_yx.
FloquetSMatrix synth_ring_point(const SurrogateParams& p, double f_hz);
FloquetSweep synth_ring_response(const SurrogateParams& p, const std::vector<double>& freqs);

// Single-mode two-port circuit applied identically to both polarizations.
SBlock2Port expand_two_port(const Eigen::Matrix2cd& s);

// Per-frequency star product of the EM block with the circuit block.
// Grids must agree to 1e-9 relative; no interpolation is done.
FloquetSweep cosim(const FloquetSweep& em, const FloquetSweep& circuit);

struct PassivityReport {
  bool passive = true;
  double max_singular_value = 0.0;
  double at_frequency_hz = 0.0;
};

// Largest singular value over the sweep; the active surrogate may exceed 1.
PassivityReport passivity_report(const FloquetSweep& sweep);

struct ParameterBounds {
  double lower = 0.0;
  double upper = 0.0;
};

struct KpiWeights {
  double resonance = 100.0;  // ((f_res - f_target) / f_target)^2
  double rotation = 1.0;     // (theta_F - pi/2)^2, folded modulo pi
  double copol = 1.0;        // |t_copol(f_res)|^2
};

struct OptimizationGoal {
  double f_target = 5.7e9;
  KpiWeights weights;
  Incidence incidence = Incidence::Port1;
  ParameterBounds f0{4.5e9, 6.9e9};
  ParameterBounds q_loaded{5.0, 100.0};
  ParameterBounds u{0.0, 1.0};
  ParameterBounds g{0.0, 2.0};

  void validate() const;
};

// Figures of merit read at the located resonance. The S-matrix at f_res is
// linearly interpolated between the bracketing samples.
struct KpiReport {
  double f_res = 0.0;
  std::optional<double> theta_f;
  std::optional<double> delta_f;
  std::optional<double> theta_k;
  std::optional<double> delta_k;
  double copol = 0.0;       // mean of |t_xx|, |t_yy|
  double copol_max = 0.0;   // max of |t_xx|, |t_yy|
  // Phase of the forward cross-pol term t21_yx minus that of its
  // time-reversed partner t12_xy, wrapped to (-pi, pi].
  double crosspol_phase_difference = 0.0;
  // max |t21 - t12| over the two co-pol entries.
  double copol_direction_mismatch = 0.0;
};

// Throws AnalysisVerdict when no resonance lies inside the band.
KpiReport evaluate_kpis(const FloquetSweep& sweep, Incidence incidence = Incidence::Port1);

// Distance of a rotation from pi/2 modulo pi, in (-pi/2, pi/2].
double rotation_error(double theta);

// Weighted KPI cost; +infinity when no resonance is found.
double kpi_cost(const FloquetSweep& sweep, const OptimizationGoal& goal);

// Optimization variables (f0, q_loaded, u, g) mapped to the unit box
// defined by the goal's bounds. il_bg and refl_bg stay fixed at `base`.
class SurrogateDesign {
 public:
  static constexpr int kDimension = 4;

  SurrogateDesign(SurrogateParams base, const OptimizationGoal& goal);

  Eigen::VectorXd encode(const SurrogateParams& p) const;
  // Clamps x to [0, 1] before mapping back.
  SurrogateParams decode(const Eigen::VectorXd& x) const;
  static std::vector<std::string> names() { return {"f0", "q_loaded", "u", "g"}; }

 private:
  SurrogateParams base_;
  std::vector<ParameterBounds> bounds_;
};

// Anything that turns a design vector into a FloquetSweep can be optimized:
// the surrogate below, or output from an external field solver.
using ForwardModel = std::function<FloquetSweep(const Eigen::VectorXd&)>;
using opt::Objective;

ForwardModel surrogate_model(const SurrogateDesign& design, std::vector<double> grid);
Objective kpi_objective(ForwardModel model, OptimizationGoal goal);

// Mean squared Frobenius distance between two sweeps on the same grid.
double calibration_cost(const FloquetSweep& model, const FloquetSweep& data);
Objective calibration_objective(ForwardModel model, FloquetSweep data);

}  // namespace gyro
