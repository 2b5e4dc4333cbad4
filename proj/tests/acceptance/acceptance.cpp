// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include <Eigen/Dense>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "gyro/errors.hpp"
#include "gyro/ferrite.hpp"
#include "gyro/optimize.hpp"
#include "gyro/polarimetry.hpp"
#include "gyro/resonator.hpp"
#include "gyro/smatrix.hpp"
#include "gyro/surrogate.hpp"
#include "gyro/touchstone.hpp"

using namespace gyro;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = 180.0 / kPi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void report(int id, const char* title, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = Clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double dt = seconds_since(t0);
  if (!o.pass) ++failures;
  std::printf("%s criterion %d: %s (%.3f s)%s\n", o.pass ? "PASS" : "FAIL", id, title, dt,
              o.detail.str().c_str());
  std::fflush(stdout);
}

std::mt19937_64 rng(7);

Complex random_complex() {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  return {u(rng), u(rng)};
}

FloquetSMatrix random_passive() {
  Eigen::Matrix4cd m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m(i, j) = random_complex();
  return FloquetSMatrix(m * (0.95 / Eigen::JacobiSVD<Eigen::Matrix4cd>(m).singularValues()(0)));
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

// Independent interconnect solve: eight outgoing waves, two networks, one
// shared interface.
Eigen::Matrix4cd interconnect(const Eigen::Matrix4cd& a, const Eigen::Matrix4cd& b) {
  using M8 = Eigen::Matrix<Complex, 8, 8>;
  using R8 = Eigen::Matrix<Complex, 8, 4>;
  M8 m = M8::Identity();
  m.block<2, 2>(0, 4) = -a.block<2, 2>(0, 2);
  m.block<2, 2>(2, 4) = -a.block<2, 2>(2, 2);
  m.block<2, 2>(4, 2) = -b.block<2, 2>(0, 0);
  m.block<2, 2>(6, 2) = -b.block<2, 2>(2, 0);
  R8 rhs = R8::Zero();
  rhs.block<2, 2>(0, 0) = a.block<2, 2>(0, 0);
  rhs.block<2, 2>(2, 0) = a.block<2, 2>(2, 0);
  rhs.block<2, 2>(4, 2) = b.block<2, 2>(0, 2);
  rhs.block<2, 2>(6, 2) = b.block<2, 2>(2, 2);
  const R8 x = m.fullPivLu().solve(rhs);
  Eigen::Matrix4cd s;
  s.topRows<2>() = x.middleRows<2>(0);
  s.bottomRows<2>() = x.middleRows<2>(6);
  return s;
}

// Shared by criteria 2-4 and 9.
struct Optimized {
  SurrogateParams params;
  opt::OptimizeResult result;
  FloquetSweep sweep;
  KpiReport kpis;
  double seconds;
};

Optimized run_optimization() {
  SurrogateParams start;
  start.f0 = 5.0e9;
  start.q_loaded = 10.0;
  start.u = 0.3;
  start.g = 0.45;
  const OptimizationGoal goal;
  const SurrogateDesign design(start, goal);
  const auto grid = default_grid();
  const auto t0 = Clock::now();
  auto result = opt::quasi_newton_minimize(
      kpi_objective(surrogate_model(design, grid), goal), design.encode(start),
      opt::Box{Eigen::VectorXd::Zero(SurrogateDesign::kDimension),
               Eigen::VectorXd::Ones(SurrogateDesign::kDimension)});
  const double secs = seconds_since(t0);
  const SurrogateParams best = design.decode(result.x);
  FloquetSweep sweep = synth_ring_response(best, grid);
  const KpiReport k = evaluate_kpis(sweep, goal.incidence);
  return {best, std::move(result), std::move(sweep), k, secs};
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

}  // namespace

int main() {
  std::printf("acceptance suite: 9 criteria\n");

  report(1, "reciprocal baseline at 5.69 GHz", [](Outcome& o) {
    const auto t0 = Clock::now();
    SurrogateParams p;
    p.u = 0.0;
    p.f0 = 5.69e9;
    const auto grid = default_grid();
    const auto sweep = synth_ring_response(p, grid);
    double defect = 0.0;
    for (const auto& m : sweep.matrices()) defect = std::max(defect, reciprocity_defect(m));
    const auto a = analyze_sweep(sweep, Incidence::Port1);
    double theta = 0.0;
    for (const auto& pt : a.points) {
      theta = std::max({theta, std::abs(pt.theta_f.value()), std::abs(pt.theta_k.value())});
    }
    const double f_res = find_resonance(a);
    const double secs = seconds_since(t0);
    o.detail << " points=" << grid.size() << " max_defect=" << defect << " max|theta|=" << theta
             << " f_res=" << f_res;
    o.check(defect < 1e-12, "defect < 1e-12");
    o.check(theta < 1e-9, "theta_F, theta_K < 1e-9 rad");
    o.check(std::abs(f_res - 5.69e9) <= grid[1] - grid[0], "f_res within one grid step");
    o.check(secs < 1.0, "runtime < 1 s");
  });

  Optimized best{{}, {}, FloquetSweep({1.0}, {FloquetSMatrix()}), {}, 0.0};
  bool have_best = false;
  report(2, "optimizer reaches ~90 deg Faraday rotation at 5.7 GHz", [&](Outcome& o) {
    best = run_optimization();
    have_best = true;
    const auto& k = best.kpis;
    const double theta_deg = std::abs(k.theta_f.value()) * kDeg;
    o.detail << " iterations=" << best.result.iterations << " reason=\"" << best.result.reason
             << "\" f_res=" << k.f_res << " |theta_F|=" << theta_deg << " deg copol_max=" << k.copol_max
             << " opt_time=" << best.seconds << " s";
    o.check(theta_deg >= 85.0, "|theta_F| >= 85 deg");
    o.check(k.copol_max < 0.05, "co-pol < 0.05");
    o.check(std::abs(k.f_res / 5.7e9 - 1.0) <= 0.005, "f_res = 5.7 GHz +/- 0.5%");
    o.check(best.result.iterations <= 200, "<= 200 iterations");
    o.check(best.seconds < 30.0, "< 30 s");
  });

  report(3, "linear polarization at resonance", [&](Outcome& o) {
    o.check(have_best, "criterion 2 produced a design");
    if (!have_best) return;
    const double delta = best.kpis.delta_f.value();
    o.detail << " delta_F(f_res)=" << delta;
    o.check(std::abs(delta) < 0.05, "|delta_F| < 0.05");
  });

  report(4, "time-reversal signature of the cross-pol pair", [&](Outcome& o) {
    o.check(have_best, "criterion 2 produced a design");
    if (!have_best) return;
    const double dphi = best.kpis.crosspol_phase_difference;
    o.detail << " cross-pol phase difference=" << dphi * kDeg << " deg"
             << " co-pol direction mismatch=" << best.kpis.copol_direction_mismatch;
    o.check(std::abs(std::abs(dphi) - kPi) < 1e-3, "|dphi| = pi within 1e-3 rad");
    o.check(best.kpis.copol_direction_mismatch < 1e-10, "co-pol direction-identical within 1e-10");
  });

  report(5, "ferrite physics", [](Outcome& o) {
    using namespace gyro::ferrite;
    const FerriteParams p{1000.0, 0.0, 0.0, kGammaElectron};
    const double w0 = larmor_frequency(p);
    const double period = 2 * kPi / w0;
    const Vec3 m0(std::sin(0.5), 0.0, std::cos(0.5));
    const auto traj = integrate_llg(m0, [](double) { return Vec3(0, 0, 1000); }, p, period / 200,
                                    1e4 * period / 200);
    const double f_meas = precession_frequency(traj) / (2 * kPi);
    double drift = 0.0;
    for (const auto& s : traj) drift = std::max(drift, std::abs(s.m.norm() - 1.0));
    const auto identity = polder_tensor({1000.0, 0.0, 0.0, kGammaElectron}, 2 * kPi * 4e9).matrix();

    // Property sweep: orthogonality, Hermitian tensor, omega parity.
    double ortho = 0.0;
    bool hermitian = true, parity = true;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 100; ++i) {
      const Vec3 m(u(rng), u(rng), u(rng)), h(u(rng), u(rng), u(rng));
      const FerriteParams pd{1.0, 0.0, 0.5 * (1 + u(rng)), kGammaElectron};
      const Vec3 d = llg_rhs(m, h, pd);
      ortho = std::max(ortho, std::abs(m.dot(d)) / (m.norm() * d.norm()));
      const FerriteParams yig{1000.0, 1750.0, 0.0, kGammaElectron};
      const double w = 2 * kPi * (0.1e9 + 5e9 * (1 + u(rng)));
      if (std::abs(std::abs(w) / larmor_frequency(yig) - 1.0) < 1e-4) continue;
      const auto t = polder_tensor(yig, w), tm = polder_tensor(yig, -w);
      hermitian = hermitian && t.matrix().isApprox(t.matrix().adjoint(), 0.0);
      parity = parity && t.mu == tm.mu && t.k == -tm.k;
    }
    o.detail << " f_precession=" << f_meas << " Hz (err " << std::abs(f_meas / 2.8e9 - 1.0)
             << ") |m| drift=" << drift << " over " << traj.size() - 1 << " steps";
    o.check(std::abs(f_meas / 2.8e9 - 1.0) < 1e-3, "precession at 2.8 GHz within 0.1%");
    o.check(drift < 1e-6, "|m| drift < 1e-6 over 1e4 steps");
    o.check(traj.size() - 1 == 10000, "1e4 RK4 steps");
    o.check(identity == Eigen::Matrix3cd::Identity(), "Polder identity at omega_M = 0");
    o.check(ortho < 1e-12, "llg_rhs orthogonal to m");
    o.check(hermitian, "Polder Hermitian");
    o.check(parity, "Polder omega parity");
  });

  report(6, "cascade equals interconnect solve", [](Outcome& o) {
    const auto t0 = Clock::now();
    double err = 0.0, assoc = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto a = random_passive(), b = random_passive(), c = random_passive();
      err = std::max(err, max_abs(cascade(a, b).matrix() - interconnect(a.matrix(), b.matrix())));
      assoc = std::max(assoc, max_abs(cascade(cascade(a, b), c).matrix() - cascade(a, cascade(b, c)).matrix()));
    }
    const double secs = seconds_since(t0);
    o.detail << " pairs=1000 max_err=" << err << " max_assoc_err=" << assoc;
    o.check(err < 1e-10, "star product vs oracle < 1e-10");
    o.check(assoc < 1e-9, "associativity < 1e-9");
    o.check(secs < 5.0, "runtime < 5 s");
  });

  report(7, "microstrip design equations", [](Outcome& o) {
    using namespace gyro::design;
    const double h = 1e-3;
    const double e1 = effective_permittivity({4.4, h}, h);
    const double e2 = effective_permittivity({4.4, h}, 2 * h);
    const double z = microstrip_z0({1.0, h}, h);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Substrate s{1.0 + 11.0 * u(rng), 0.1e-3 + 3e-3 * u(rng)};
      const double w = s.height * (1.0 + 9.0 * u(rng));
      const double f = 0.5e9 + 30e9 * u(rng);
      const int m = 1 + static_cast<int>(3.999 * u(rng));
      const double phase = -1.0 + (2 * kPi * m - 0.1 + 1.0) * u(rng);
      const auto g = ring_geometry_for(f, s, w, 1.5 * u(rng), phase, m);
      worst = std::max(worst, std::abs(resonance_frequency(g, s, phase) / f - 1.0));
    }
    o.detail << " eps_e(4.4,1)=" << e1 << " eps_e(4.4,2)=" << e2 << " Z0(1,1)=" << z
             << " round-trip max rel err=" << worst;
    o.check(std::abs(e1 - 3.1715) < 5e-5, "eps_e(4.4, W/H=1) = 3.1715");
    o.check(std::abs(e2 - 3.3425) < 5e-5, "eps_e(4.4, W/H=2) = 3.3425");
    o.check(std::abs(z - 126.1) < 0.05, "Z0(1, W/H=1) = 126.1");
    o.check(worst < 1e-9, "round trip < 1e-9 over 1000 inputs");
  });

  report(8, "basis-change property suite", [](Outcome& o) {
    const Complex i1{0.0, 1.0};
    Eigen::Matrix2cd p;
    p << 1.0, 1.0, i1, -i1;
    p /= std::sqrt(2.0);
    double lin = 0.0, conj = 0.0, rot = 0.0;
    for (int n = 0; n < 100; ++n) {
      const JonesMatrix a{random_complex(), random_complex(), random_complex(), random_complex()};
      const JonesMatrix b{random_complex(), random_complex(), random_complex(), random_complex()};
      const Complex alpha = random_complex(), beta = random_complex();
      const auto l = lin_to_circ(alpha * a + beta * b);
      const auto ca = lin_to_circ(a), cb = lin_to_circ(b);
      lin = std::max({lin, std::abs(l.rr - alpha * ca.rr - beta * cb.rr),
                      std::abs(l.rl - alpha * ca.rl - beta * cb.rl),
                      std::abs(l.lr - alpha * ca.lr - beta * cb.lr),
                      std::abs(l.ll - alpha * ca.ll - beta * cb.ll)});

      Eigen::Matrix2cd m;
      m << a.xx, a.xy, a.yx, a.yy;
      const Eigen::Matrix2cd c = p.adjoint() * m * p;
      conj = std::max({conj, std::abs(c(0, 0) - ca.rr), std::abs(c(0, 1) - ca.rl),
                       std::abs(c(1, 0) - ca.lr), std::abs(c(1, 1) - ca.ll)});

      const double phi = -kPi / 2 + kPi * (n + 0.5) / 100.0;
      const auto r = lin_to_circ(JonesMatrix::rotation(phi));
      rot = std::max({rot, std::abs(r.rl), std::abs(r.lr), std::abs(r.rr - std::exp(-i1 * phi)),
                      std::abs(r.ll - std::exp(i1 * phi)), std::abs(rotation_angle(r) - phi)});
    }
    o.detail << " linearity=" << lin << " conjugation=" << conj << " rotation=" << rot;
    o.check(lin < 1e-12, "linearity");
    o.check(conj < 1e-12, "conjugation consistency");
    o.check(rot < 1e-12, "rotation eigenstructure");
  });

  report(9, "Touchstone round trip and CLI analyze from files", [&](Outcome& o) {
    using namespace gyro::io;
    double worst = 0.0;
    for (int ports = 1; ports <= 4; ++ports) {
      Network n;
      n.n_ports = ports;
      for (int k = 0; k < 5; ++k) {
        n.frequencies.push_back(2e9 + 1.37e8 * k);
        Eigen::MatrixXcd m(ports, ports);
        for (int i = 0; i < ports; ++i)
          for (int j = 0; j < ports; ++j) m(i, j) = random_complex();
        n.data.push_back(m);
      }
      for (auto unit : {FrequencyUnit::Hz, FrequencyUnit::MHz, FrequencyUnit::GHz}) {
        for (auto fmt : {DataFormat::RI, DataFormat::MA, DataFormat::DB}) {
          const auto back = parse_touchstone(write_touchstone(n, {fmt, unit, 17}), ports);
          for (int k = 0; k < 5; ++k) {
            worst = std::max(worst, max_abs(back.data[k] - n.data[k]));
            worst = std::max(worst, std::abs(back.frequencies[k] / n.frequencies[k] - 1.0));
          }
        }
      }
    }
    o.detail << " round-trip max err=" << worst;
    o.check(worst < 1e-12, "round trip < 1e-12");

    o.check(have_best, "criterion 2 produced a design");
    if (!have_best) return;
    const std::filesystem::path dir(GYRO_TEST_TMP);
    std::filesystem::create_directories(dir);
    const auto s4p = (dir / "acceptance_optimized.s4p").string();
    const auto out = (dir / "acceptance_analyze.txt").string();
    write_touchstone_file(s4p, to_network(best.sweep));
    const std::string cmd = std::string("\"") + GYRO_CLI_PATH + "\" analyze \"" + s4p + "\" > \"" + out + "\"";
    const int rc = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto kv = parse_key_values(ss.str());
    o.check(rc == 0, "gyro analyze exit status 0");
    if (rc != 0 || !kv.count("theta_f_deg")) return;
    const double f_res = std::stod(kv.at("resonance_hz"));
    const double theta = std::stod(kv.at("theta_f_deg"));
    const double delta = std::stod(kv.at("delta_f"));
    const double copol = std::stod(kv.at("copol_max"));
    const double dphi = std::stod(kv.at("crosspol_phase_diff_rad"));
    o.detail << " cli: f_res=" << f_res << " theta_F=" << theta << " deg delta_F=" << delta
             << " copol_max=" << copol;
    o.check(std::abs(f_res - best.kpis.f_res) < 1e-6 * f_res, "CLI f_res matches");
    o.check(std::abs(theta - best.kpis.theta_f.value() * kDeg) < 1e-6, "CLI theta_F matches");
    o.check(std::abs(delta - best.kpis.delta_f.value()) < 1e-6, "CLI delta_F matches");
    o.check(std::abs(copol - best.kpis.copol_max) < 1e-6, "CLI co-pol matches");
    o.check(std::abs(dphi - best.kpis.crosspol_phase_difference) < 1e-6, "CLI cross-pol phase matches");
    o.check(std::abs(theta) >= 85.0 && copol < 0.05 && std::abs(f_res / 5.7e9 - 1.0) <= 0.005,
            "file-only numbers satisfy criterion 2");
  });

  std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
