#include "gyro/surrogate.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gyro/errors.hpp"

namespace gyro {

namespace {
constexpr double kPi = std::numbers::pi;

void check_range(double v, double lo, double hi, const char* name) {
  if (!(v >= lo && v <= hi)) {
    std::ostringstream os;
    os << name << " = " << v << " outside [" << lo << ", " << hi << "]";
    throw ValidationError(os.str());
  }
}

double wrap_phase(double phase) {
  phase = std::remainder(phase, 2.0 * kPi);
  return phase <= -kPi ? phase + 2.0 * kPi : phase;
}
}  // namespace

std::vector<double> linear_grid(double f_start, double f_stop, std::size_t points) {
  if (points == 0) throw ValidationError("grid needs at least one point");
  if (points > 1 && !(f_stop > f_start)) throw ValidationError("grid stop must exceed start");
  std::vector<double> f(points);
  if (points == 1) {
    f[0] = f_start;
    return f;
  }
  const double step = (f_stop - f_start) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) f[i] = f_start + step * static_cast<double>(i);
  f.back() = f_stop;
  return f;
}

std::vector<double> default_grid() { return linear_grid(4e9, 7e9, 801); }

void SurrogateParams::validate() const {
  if (!(f0 > 0.0)) throw ValidationError("surrogate f0 must be > 0");
  if (!(q_loaded > 0.0)) throw ValidationError("surrogate q_loaded must be > 0");
  check_range(u, 0.0, 1.0, "surrogate u");
  if (!(g >= 0.0)) throw ValidationError("surrogate g must be >= 0");
  if (!(il_bg > 0.0 && il_bg <= 1.0)) throw ValidationError("surrogate il_bg must be in (0, 1]");
  if (!(refl_bg >= 0.0 && refl_bg < 1.0)) throw ValidationError("surrogate refl_bg must be in [0, 1)");
  if (il_bg * il_bg + refl_bg * refl_bg > 1.0 + 1e-12) {
    throw ValidationError("surrogate needs il_bg^2 + refl_bg^2 <= 1");
  }
}

FloquetSMatrix synth_ring_point(const SurrogateParams& p, double f_hz) {
  const Complex lorentz = 1.0 / Complex(1.0, 2.0 * p.q_loaded * (f_hz - p.f0) / p.f0);
  const Complex t_r = p.il_bg - p.g * lorentz;
  const Complex t_l = p.il_bg - (1.0 - p.u) * p.g * lorentz;

  const JonesMatrix t = circ_to_lin({t_r, 0.0, 0.0, t_l});
  const JonesMatrix r =
      circ_to_lin({p.refl_bg * (1.0 - t_r), 0.0, 0.0, p.refl_bg * (1.0 - t_l)});
  return reassemble({r, r, t, t});
}

FloquetSweep synth_ring_response(const SurrogateParams& p, const std::vector<double>& freqs) {
  p.validate();
  std::vector<FloquetSMatrix> m;
  m.reserve(freqs.size());
  for (double f : freqs) m.push_back(synth_ring_point(p, f));
  return FloquetSweep(freqs, std::move(m), "surrogate");
}

SBlock2Port expand_two_port(const Eigen::Matrix2cd& s) {
  FloquetSMatrix::Matrix m = FloquetSMatrix::Matrix::Zero();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      m(2 * i, 2 * j) = s(i, j);
      m(2 * i + 1, 2 * j + 1) = s(i, j);
    }
  }
  return SBlock2Port(m);
}

FloquetSweep cosim(const FloquetSweep& em, const FloquetSweep& circuit) {
  const auto& fe = em.frequencies();
  const auto& fc = circuit.frequencies();
  const std::size_t n = std::min(fe.size(), fc.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(fe[i] - fc[i]) > 1e-9 * std::max(std::abs(fe[i]), 1.0)) {
      std::ostringstream os;
      os << "frequency grids differ at index " << i << ": " << fe[i] << " Hz vs " << fc[i]
         << " Hz";
      throw ValidationError(os.str());
    }
  }
  if (fe.size() != fc.size()) {
    throw ValidationError("frequency grids differ: " + std::to_string(fe.size()) + " vs " +
                          std::to_string(fc.size()) + " points");
  }
  std::vector<FloquetSMatrix> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(cascade(em.at(i), circuit.at(i), fe[i]));
  return FloquetSweep(fe, std::move(out), "cosim");
}

PassivityReport passivity_report(const FloquetSweep& sweep) {
  PassivityReport report;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const Eigen::JacobiSVD<FloquetSMatrix::Matrix> svd(sweep.at(i).matrix());
    const double smax = svd.singularValues()(0);
    if (smax > report.max_singular_value) {
      report.max_singular_value = smax;
      report.at_frequency_hz = sweep.frequencies()[i];
    }
  }
  report.passive = report.max_singular_value <= 1.0 + 1e-12;
  return report;
}

void OptimizationGoal::validate() const {
  if (!(f_target > 0.0)) throw ValidationError("goal f_target must be > 0");
  const auto& w = weights;
  if (!(w.resonance >= 0.0 && w.rotation >= 0.0 && w.copol >= 0.0)) {
    throw ValidationError("KPI weights must be >= 0");
  }
  if (!(w.resonance + w.rotation + w.copol > 0.0)) {
    throw ValidationError("at least one KPI weight must be > 0");
  }
  for (const auto* b : {&f0, &q_loaded, &u, &g}) {
    if (!(b->upper > b->lower)) throw ValidationError("goal bounds must satisfy lower < upper");
  }
  if (!(f0.lower > 0.0) || !(q_loaded.lower > 0.0)) {
    throw ValidationError("f0 and q_loaded bounds must be positive");
  }
  if (u.lower < 0.0 || u.upper > 1.0) throw ValidationError("u bounds must lie in [0, 1]");
  if (g.lower < 0.0) throw ValidationError("g bounds must be >= 0");
}

KpiReport evaluate_kpis(const FloquetSweep& sweep, Incidence incidence) {
  KpiReport k;
  k.f_res = find_resonance(analyze_sweep(sweep, incidence));
  const FloquetSMatrix s = sweep.interpolate(k.f_res);
  const PolarimetryPoint pt = analyze_point(s, incidence);
  k.theta_f = pt.theta_f;
  k.delta_f = pt.delta_f;
  k.theta_k = pt.theta_k;
  k.delta_k = pt.delta_k;
  k.copol = copol_magnitude(pt.transmission);
  k.copol_max = std::max(std::abs(pt.transmission.xx), std::abs(pt.transmission.yy));

  const BlockDecomposition b = decompose_blocks(s);
  k.crosspol_phase_difference = wrap_phase(std::arg(b.t21.yx) - std::arg(b.t12.xy));
  k.copol_direction_mismatch =
      std::max(std::abs(b.t21.xx - b.t12.xx), std::abs(b.t21.yy - b.t12.yy));
  return k;
}

double rotation_error(double theta) {
  double d = std::remainder(theta - kPi / 2, kPi);
  if (d <= -kPi / 2) d += kPi;
  return d;
}

double kpi_cost(const FloquetSweep& sweep, const OptimizationGoal& goal) {
  KpiReport k;
  try {
    k = evaluate_kpis(sweep, goal.incidence);
  } catch (const AnalysisVerdict&) {
    return std::numeric_limits<double>::infinity();
  }
  const auto& w = goal.weights;
  const double df = (k.f_res - goal.f_target) / goal.f_target;
  // An undefined rotation is as far from the target as a zero rotation.
  const double rot = k.theta_f ? rotation_error(*k.theta_f) : kPi / 2;
  return w.resonance * df * df + w.rotation * rot * rot + w.copol * k.copol * k.copol;
}

SurrogateDesign::SurrogateDesign(SurrogateParams base, const OptimizationGoal& goal)
    : base_(base), bounds_{goal.f0, goal.q_loaded, goal.u, goal.g} {
  goal.validate();
}

Eigen::VectorXd SurrogateDesign::encode(const SurrogateParams& p) const {
  const double v[kDimension] = {p.f0, p.q_loaded, p.u, p.g};
  Eigen::VectorXd x(kDimension);
  for (int i = 0; i < kDimension; ++i) {
    x(i) = (v[i] - bounds_[i].lower) / (bounds_[i].upper - bounds_[i].lower);
  }
  return x;
}

SurrogateParams SurrogateDesign::decode(const Eigen::VectorXd& x) const {
  if (x.size() != kDimension) throw ValidationError("surrogate design vector must have 4 entries");
  double v[kDimension];
  for (int i = 0; i < kDimension; ++i) {
    const double t = std::clamp(x(i), 0.0, 1.0);
    v[i] = bounds_[i].lower + t * (bounds_[i].upper - bounds_[i].lower);
  }
  SurrogateParams p = base_;
  p.f0 = v[0];
  p.q_loaded = v[1];
  p.u = v[2];
  p.g = v[3];
  return p;
}

ForwardModel surrogate_model(const SurrogateDesign& design, std::vector<double> grid) {
  return [design, grid = std::move(grid)](const Eigen::VectorXd& x) {
    return synth_ring_response(design.decode(x), grid);
  };
}

Objective kpi_objective(ForwardModel model, OptimizationGoal goal) {
  goal.validate();
  return [model = std::move(model), goal](const Eigen::VectorXd& x) {
    return kpi_cost(model(x), goal);
  };
}

double calibration_cost(const FloquetSweep& model, const FloquetSweep& data) {
  if (model.size() != data.size()) throw ValidationError("calibration sweeps differ in length");
  double sum = 0.0;
  for (std::size_t i = 0; i < model.size(); ++i) {
    sum += (model.at(i).matrix() - data.at(i).matrix()).squaredNorm();
  }
  return sum / static_cast<double>(model.size());
}

Objective calibration_objective(ForwardModel model, FloquetSweep data) {
  return [model = std::move(model), data = std::move(data)](const Eigen::VectorXd& x) {
    return calibration_cost(model(x), data);
  };
}

}  // namespace gyro
