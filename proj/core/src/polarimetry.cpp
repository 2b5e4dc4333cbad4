#include "gyro/polarimetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gyro/errors.hpp"
#include "gyro/parallel.hpp"

namespace gyro {

namespace {
constexpr Complex kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;
}  // namespace

CircularJones lin_to_circ(const JonesMatrix& j) {
  const Complex sum = j.xx + j.yy;
  const Complex diff = j.xx - j.yy;
  const Complex anti = j.xy - j.yx;
  const Complex sym = j.xy + j.yx;
  return {0.5 * (sum + kI * anti), 0.5 * (diff - kI * sym), 0.5 * (diff + kI * sym),
          0.5 * (sum - kI * anti)};
}

JonesMatrix circ_to_lin(const CircularJones& c) {
  const Complex sum = c.rr + c.ll;             // xx + yy
  const Complex diff = c.rl + c.lr;            // xx - yy
  const Complex anti = -kI * (c.rr - c.ll);    // xy - yx
  const Complex sym = -kI * (c.lr - c.rl);     // xy + yx
  return {0.5 * (sum + diff), 0.5 * (sym + anti), 0.5 * (sym - anti), 0.5 * (sum - diff)};
}

double ellipticity(const CircularJones& c) {
  const double r = std::abs(c.rr);
  const double l = std::abs(c.ll);
  if (!(r + l > 0.0)) throw UndefinedPolarization("polarization undefined: |t_rr| + |t_ll| = 0");
  return (r - l) / (r + l);
}

double rotation_angle(const CircularJones& c, RotationReading reading) {
  if (c.rr == Complex{}) throw UndefinedPolarization("rotation undefined: t_rr = 0");
  if (reading == RotationReading::MagnitudeRatio) {
    return 0.5 * std::atan(std::abs(c.ll) / std::abs(c.rr));
  }
  double phase = std::arg(c.ll / c.rr);
  if (phase <= -kPi) phase = kPi;  // keep the half-open interval (-pi, pi]
  return 0.5 * phase;
}

std::vector<double> PolarimetrySweep::frequencies() const {
  std::vector<double> f;
  f.reserve(points.size());
  for (const auto& p : points) f.push_back(p.frequency_hz);
  return f;
}

namespace {

template <typename Fn>
std::optional<double> try_eval(Fn&& fn) {
  try {
    return fn();
  } catch (const UndefinedPolarization&) {
    return std::nullopt;
  }
}

}  // namespace

PolarimetryPoint analyze_point(const FloquetSMatrix& s, Incidence incidence,
                               RotationReading reading) {
  const BlockDecomposition blocks = decompose_blocks(s);
  PolarimetryPoint p;
  p.transmission = incidence == Incidence::Port1 ? blocks.t21 : blocks.t12;
  p.reflection = incidence == Incidence::Port1 ? blocks.r1 : blocks.r2;

  const CircularJones t = lin_to_circ(p.transmission);
  const CircularJones r = lin_to_circ(p.reflection);
  p.theta_f = try_eval([&] { return rotation_angle(t, reading); });
  p.delta_f = try_eval([&] { return ellipticity(t); });
  p.theta_k = try_eval([&] { return rotation_angle(r, reading); });
  p.delta_k = try_eval([&] { return ellipticity(r); });
  return p;
}

std::vector<std::optional<double>> unwrap_rotation(
    const std::vector<std::optional<double>>& principal) {
  std::vector<std::optional<double>> out(principal.size());
  std::optional<double> previous;
  double offset = 0.0;
  for (std::size_t i = 0; i < principal.size(); ++i) {
    if (!principal[i]) continue;
    double value = *principal[i] + offset;
    if (previous) {
      while (value - *previous > kPi / 2) {
        value -= kPi;
        offset -= kPi;
      }
      while (value - *previous < -kPi / 2) {
        value += kPi;
        offset += kPi;
      }
    }
    out[i] = value;
    previous = value;
  }
  return out;
}

PolarimetrySweep analyze_sweep(const FloquetSweep& sweep, Incidence incidence,
                               const AnalyzeOptions& options) {
  PolarimetrySweep result;
  result.incidence = incidence;
  result.points.resize(sweep.size());
  parallel_for(sweep.size(), options.threads, [&](std::size_t i) {
    result.points[i] = analyze_point(sweep.at(i), incidence, options.reading);
    result.points[i].frequency_hz = sweep.frequencies()[i];
  });

  std::vector<std::optional<double>> faraday, kerr;
  faraday.reserve(sweep.size());
  kerr.reserve(sweep.size());
  for (const auto& p : result.points) {
    faraday.push_back(p.theta_f);
    kerr.push_back(p.theta_k);
  }
  const auto faraday_unwrapped = unwrap_rotation(faraday);
  const auto kerr_unwrapped = unwrap_rotation(kerr);
  for (std::size_t i = 0; i < result.points.size(); ++i) {
    result.points[i].theta_f_unwrapped = faraday_unwrapped[i];
    result.points[i].theta_k_unwrapped = kerr_unwrapped[i];
  }
  return result;
}

double copol_magnitude(const JonesMatrix& t) {
  return 0.5 * (std::abs(t.xx) + std::abs(t.yy));
}

double find_resonance(const PolarimetrySweep& p) {
  const std::size_t n = p.size();
  if (n < 3) throw ValidationError("find_resonance needs at least 3 frequency points");

  std::vector<double> mag(n);
  for (std::size_t i = 0; i < n; ++i) mag[i] = copol_magnitude(p.points[i].transmission);

  const auto it = std::min_element(mag.begin(), mag.end());
  const auto k = static_cast<std::size_t>(it - mag.begin());
  const double edge = std::min(mag.front(), mag.back());
  if (k == 0 || k == n - 1 || !(*it < edge * (1.0 - 1e-9))) {
    throw AnalysisVerdict("no resonance found");
  }

  // Parabola through three (f, dB) points; a floor keeps exact nulls finite.
  const auto db = [](double v) { return 20.0 * std::log10(std::max(v, 1e-15)); };
  const double x0 = p.points[k - 1].frequency_hz, x1 = p.points[k].frequency_hz,
               x2 = p.points[k + 1].frequency_hz;
  const double y0 = db(mag[k - 1]), y1 = db(mag[k]), y2 = db(mag[k + 1]);
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double curvature = (d12 - d01) / (x2 - x0);
  if (!(curvature > 0.0) || !std::isfinite(curvature)) return x1;
  // Newton form y = y0 + d01 (x - x0) + curvature (x - x0)(x - x1).
  const double vertex = 0.5 * (x0 + x1) - d01 / (2.0 * curvature);
  return std::clamp(vertex, x0, x2);
}

}  // namespace gyro
