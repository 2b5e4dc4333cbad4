#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <numbers>
#include <ostream>
#include <thread>

#include "config.hpp"
#include "gyro/errors.hpp"
#include "gyro/ferrite.hpp"
#include "gyro/parallel.hpp"
#include "gyro/polarimetry.hpp"
#include "gyro/polarimetry_csv.hpp"
#include "gyro/resonator.hpp"
#include "gyro/surrogate.hpp"
#include "gyro/touchstone.hpp"

namespace gyro::cli {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write " + path);
  f << text;
}

std::string opt_value(const std::optional<double>& v, double scale = 1.0) {
  if (!v) return "undefined";
  std::ostringstream os;
  os << std::setprecision(12) << *v * scale;
  return os.str();
}

io::DataFormat parse_format(const std::string& s) {
  if (s == "RI" || s == "ri") return io::DataFormat::RI;
  if (s == "MA" || s == "ma") return io::DataFormat::MA;
  if (s == "DB" || s == "db") return io::DataFormat::DB;
  throw ValidationError("format must be RI, MA or DB");
}

void print_kpis(std::ostream& out, const KpiReport& k) {
  out << "resonance_hz=" << k.f_res << "\n"
      << "theta_f_rad=" << opt_value(k.theta_f) << "\n"
      << "theta_f_deg=" << opt_value(k.theta_f, kRadToDeg) << "\n"
      << "delta_f=" << opt_value(k.delta_f) << "\n"
      << "theta_k_deg=" << opt_value(k.theta_k, kRadToDeg) << "\n"
      << "delta_k=" << opt_value(k.delta_k) << "\n"
      << "copol_mag=" << k.copol << "\n"
      << "copol_max=" << k.copol_max << "\n"
      << "crosspol_phase_diff_rad=" << k.crosspol_phase_difference << "\n"
      << "crosspol_phase_diff_deg=" << k.crosspol_phase_difference * kRadToDeg << "\n";
}

nlohmann::json params_json(const SurrogateParams& p) {
  return {{"f0_hz", p.f0}, {"q_loaded", p.q_loaded}, {"u", p.u},
          {"g", p.g},      {"il_bg", p.il_bg},       {"refl_bg", p.refl_bg}};
}

nlohmann::json optional_json(const std::optional<double>& v, double scale = 1.0) {
  return v ? nlohmann::json(*v * scale) : nlohmann::json(nullptr);
}

// --- analyze -------------------------------------------------------------

struct AnalyzeArgs {
  std::string input;
  std::string port_map;
  int direction = 1;
  std::string output;
  std::string reading = "phase";
};

int do_analyze(const AnalyzeArgs& a, std::ostream& out) {
  const io::Network net = io::read_touchstone_file(a.input);
  const io::PortMap map = a.port_map.empty() ? io::kIdentityPortMap : io::parse_port_map(a.port_map);
  const FloquetSweep sweep = io::map_ports_to_floquet(net, map);
  const Incidence inc = a.direction == 2 ? Incidence::Port2 : Incidence::Port1;

  AnalyzeOptions opts;
  opts.threads = worker_threads();
  opts.reading = a.reading == "magnitude" ? RotationReading::MagnitudeRatio
                                          : RotationReading::PhaseDifference;
  const PolarimetrySweep p = analyze_sweep(sweep, inc, opts);
  if (!a.output.empty()) write_text(a.output, io::export_polarimetry_csv(p));

  double defect = 0.0;
  for (const auto& m : sweep.matrices()) defect = std::max(defect, reciprocity_defect(m));
  std::size_t gaps = 0;
  for (const auto& pt : p.points) gaps += (!pt.theta_f || !pt.delta_f) ? 1 : 0;

  out << std::setprecision(12);
  out << "points=" << sweep.size() << "\n"
      << "direction=" << a.direction << "\n"
      << "reciprocity_defect_max=" << defect << "\n"
      << "faraday_gaps=" << gaps << "\n";
  KpiReport k;
  try {
    k = evaluate_kpis(sweep, inc);
  } catch (const AnalysisVerdict& e) {
    out << "resonance=none\n";
    return kVerdict;
  }
  print_kpis(out, k);
  return kSuccess;
}

// --- check-reciprocity ---------------------------------------------------

int do_check_reciprocity(const std::vector<std::string>& inputs, double tol, std::ostream& out) {
  struct Result {
    double defect = 0.0;
    double at = 0.0;
  };
  std::vector<Result> results(inputs.size());
  parallel_for(inputs.size(), worker_threads(), [&](std::size_t i) {
    const io::Network net = io::read_touchstone_file(inputs[i]);
    for (std::size_t k = 0; k < net.data.size(); ++k) {
      const double d = reciprocity_defect(net.data[k]);
      if (d > results[i].defect) results[i] = {d, net.frequencies[k]};
    }
  });
  bool all_reciprocal = true;
  out << std::setprecision(6);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const bool ok = results[i].defect <= tol;
    all_reciprocal = all_reciprocal && ok;
    out << inputs[i] << ": " << (ok ? "reciprocal" : "nonreciprocal")
        << " (max |S - S^T| = " << results[i].defect;
    if (!ok) out << " at " << results[i].at << " Hz";
    out << ")\n";
  }
  return all_reciprocal ? kSuccess : kVerdict;
}

// --- design --------------------------------------------------------------

struct DesignArgs {
  double f_target = 5.7e9;
  double eps_r = design::kFr4.eps_r;
  double height = design::kFr4.height;
  double trace_width = 1.6e-3;
  double alpha_fet = 0.0;
  double fet_phase = 0.0;
  int mode = 1;
};

int do_design(const DesignArgs& a, std::ostream& out) {
  const design::Substrate sub{a.eps_r, a.height};
  const double eps_e = design::effective_permittivity(sub, a.trace_width);
  const double z0 = design::microstrip_z0(sub, a.trace_width);
  const design::RingGeometry ring =
      design::ring_geometry_for(a.f_target, sub, a.trace_width, a.alpha_fet, a.fet_phase, a.mode);
  out << std::setprecision(10) << "eps_eff=" << eps_e << "\n"
      << "z0_ohm=" << z0 << "\n"
      << "lambda_g_m=" << design::guided_wavelength(a.f_target, sub, a.trace_width) << "\n"
      << "line_length_m=" << ring.line_length() << "\n"
      << "r_mean_m=" << ring.r_mean << "\n"
      << "gap_angle_deg=" << ring.alpha_fet * kRadToDeg << "\n"
      << "mode=" << ring.mode << "\n"
      << "resonance_check_hz=" << design::resonance_frequency(ring, sub, a.fet_phase) << "\n";
  return kSuccess;
}

// --- synth ---------------------------------------------------------------

struct SynthArgs {
  SurrogateParams params;
  GridConfig grid;
  std::string output;
  std::string format = "RI";
  int precision = 12;
};

int do_synth(SynthArgs a, std::ostream& out) {
  const FloquetSweep sweep = synth_ring_response(a.params, a.grid.frequencies());
  io::Network net = io::to_network(sweep);
  io::write_touchstone_file(a.output, net, {parse_format(a.format), io::FrequencyUnit::GHz, a.precision});
  const PassivityReport pr = passivity_report(sweep);
  out << std::setprecision(10) << "wrote=" << a.output << "\n"
      << "points=" << sweep.size() << "\n"
      << "passive=" << (pr.passive ? "yes" : "no") << "\n"
      << "max_singular_value=" << pr.max_singular_value << "\n";
  return kSuccess;
}

// --- ferrite -------------------------------------------------------------

struct FerriteArgs {
  ferrite::FerriteParams params{1000.0, 0.0, 0.0, ferrite::kGammaElectron};
  double freq = 0.0;  // Hz, tensor only
  double tilt_deg = 30.0;
  double m_mag = 1.0;
  double dt = 0.0;        // 0: T_larmor / 200
  double periods = 50.0;  // used when t_end == 0
  double t_end = 0.0;
  std::string output;
};

int do_ferrite_tensor(const FerriteArgs& a, std::ostream& out) {
  const double omega = 2.0 * std::numbers::pi * a.freq;
  const ferrite::PolderTensor t = ferrite::polder_tensor(a.params, omega);
  const double w0 = ferrite::larmor_frequency(a.params);
  out << std::setprecision(10) << "omega0_rad_s=" << w0 << "\n"
      << "f0_hz=" << w0 / (2.0 * std::numbers::pi) << "\n"
      << "mu=" << t.mu.real() << "\n"
      << "k=" << t.k.real() << "\n";
  const Eigen::Matrix3cd m = t.matrix();
  for (int r = 0; r < 3; ++r) {
    out << "row" << r << "=";
    for (int c = 0; c < 3; ++c) out << (c ? " " : "") << m(r, c);
    out << "\n";
  }
  return kSuccess;
}

int do_ferrite_llg(const FerriteArgs& a, std::ostream& out) {
  a.params.validate();
  const double w0 = ferrite::larmor_frequency(a.params);
  if (!(w0 > 0.0)) throw ValidationError("llg needs h0 > 0 to define a Larmor period");
  const double period = 2.0 * std::numbers::pi / w0;
  const double dt = a.dt > 0.0 ? a.dt : period / 200.0;
  const double t_end = a.t_end > 0.0 ? a.t_end : a.periods * period;
  const double tilt = a.tilt_deg / kRadToDeg;
  const ferrite::Vec3 m0(a.m_mag * std::sin(tilt), 0.0, a.m_mag * std::cos(tilt));
  const ferrite::Vec3 h(0.0, 0.0, a.params.h0);
  const auto traj = ferrite::integrate_llg(m0, [&](double) { return h; }, a.params, dt, t_end);

  if (!a.output.empty()) {
    std::ostringstream os;
    os << std::setprecision(12) << "t_s,mx,my,mz\n";
    for (const auto& s : traj) os << s.t << ',' << s.m.x() << ',' << s.m.y() << ',' << s.m.z() << '\n';
    write_text(a.output, os.str());
  }
  const double drift = std::abs(traj.back().m.norm() - m0.norm()) / m0.norm();
  out << std::setprecision(10) << "steps=" << traj.size() - 1 << "\n"
      << "dt_s=" << dt << "\n"
      << "larmor_hz=" << w0 / (2.0 * std::numbers::pi) << "\n"
      << "m_drift_rel=" << drift << "\n";
  try {
    const double w = ferrite::precession_frequency(traj);
    out << "precession_hz=" << w / (2.0 * std::numbers::pi) << "\n";
  } catch (const ValidationError&) {
    out << "precession_hz=undefined\n";
  }
  return kSuccess;
}

// --- cosim ---------------------------------------------------------------

int do_cosim(const std::string& em_path, const std::string& circuit_path, const std::string& port_map,
             const std::string& output, std::ostream& out) {
  const io::PortMap map = port_map.empty() ? io::kIdentityPortMap : io::parse_port_map(port_map);
  const FloquetSweep em = io::map_ports_to_floquet(io::read_touchstone_file(em_path), map);
  const FloquetSweep circuit = io::circuit_blocks(io::read_touchstone_file(circuit_path));
  const FloquetSweep result = cosim(em, circuit);
  io::write_touchstone_file(output, io::to_network(result));
  double defect = 0.0;
  for (const auto& m : result.matrices()) defect = std::max(defect, reciprocity_defect(m));
  out << std::setprecision(10) << "wrote=" << output << "\n"
      << "points=" << result.size() << "\n"
      << "reciprocity_defect_max=" << defect << "\n";
  return kSuccess;
}

// --- optimize ------------------------------------------------------------

int do_optimize(const std::string& config_path, const std::string& report_path,
                const std::string& log_path, const std::string& sweep_path, std::ostream& out) {
  const RunConfig cfg = load_run_config(config_path);
  const SurrogateDesign design(cfg.surrogate, cfg.goal);
  const std::vector<double> grid = cfg.grid.frequencies();
  const Objective objective = kpi_objective(surrogate_model(design, grid), cfg.goal);

  std::ostringstream log;
  log << std::setprecision(12) << "iteration,cost,gradient_norm";
  for (const auto& n : SurrogateDesign::names()) log << ',' << n;
  log << '\n';

  opt::QuasiNewtonOptions qn = cfg.optimizer;
  qn.threads = worker_threads();
  qn.on_iteration = [&](const opt::IterationLog& it) {
    const SurrogateParams p = design.decode(it.x);
    log << it.iteration << ',' << it.cost << ',' << it.gradient_norm << ',' << p.f0 << ','
        << p.q_loaded << ',' << p.u << ',' << p.g << '\n';
  };
  const opt::Box box{Eigen::VectorXd::Zero(SurrogateDesign::kDimension),
                     Eigen::VectorXd::Ones(SurrogateDesign::kDimension)};
  const opt::OptimizeResult r = opt::quasi_newton_minimize(objective, design.encode(cfg.surrogate), box, qn);
  const SurrogateParams best = design.decode(r.x);
  const FloquetSweep sweep = synth_ring_response(best, grid);

  nlohmann::json report;
  report["converged"] = r.converged;
  report["reason"] = r.reason;
  report["iterations"] = r.iterations;
  report["cost"] = r.cost;
  report["start"] = params_json(cfg.surrogate);
  report["optimized"] = params_json(best);
  try {
    const KpiReport k = evaluate_kpis(sweep, cfg.goal.incidence);
    report["kpis"] = {{"f_res_hz", k.f_res},
                      {"theta_f_deg", optional_json(k.theta_f, kRadToDeg)},
                      {"delta_f", optional_json(k.delta_f)},
                      {"theta_k_deg", optional_json(k.theta_k, kRadToDeg)},
                      {"delta_k", optional_json(k.delta_k)},
                      {"copol", k.copol},
                      {"copol_max", k.copol_max},
                      {"crosspol_phase_diff_rad", k.crosspol_phase_difference}};
  } catch (const AnalysisVerdict&) {
    report["kpis"] = nullptr;
  }
  const PassivityReport pr = passivity_report(sweep);
  report["passivity"] = {{"passive", pr.passive},
                         {"max_singular_value", pr.max_singular_value},
                         {"at_frequency_hz", pr.at_frequency_hz}};

  write_text(report_path, report.dump(2) + "\n");
  if (!log_path.empty()) write_text(log_path, log.str());
  if (!sweep_path.empty()) io::write_touchstone_file(sweep_path, io::to_network(sweep));

  out << std::setprecision(10) << "converged=" << (r.converged ? "yes" : "no") << "\n"
      << "iterations=" << r.iterations << "\n"
      << "cost=" << r.cost << "\n"
      << "f0_hz=" << best.f0 << "\nq_loaded=" << best.q_loaded << "\nu=" << best.u
      << "\ng=" << best.g << "\n";
  if (report["kpis"].is_object()) {
    out << "theta_f_deg=" << report["kpis"]["theta_f_deg"] << "\n";
  }
  return kSuccess;
}

}  // namespace

unsigned worker_threads() {
  if (const char* env = std::getenv("GYRO_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Design and analysis toolkit for magnet-free nonreciprocal metasurfaces"};
  app.name(args.empty() ? "gyro" : args.front());
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand("analyze", "Faraday/Kerr polarimetry of a 4-port Floquet sweep");
  analyze->add_option("input", analyze_args.input, "Touchstone .s4p file")->required();
  analyze->add_option("--port-map", analyze_args.port_map, "Floquet port:mode per physical port, e.g. 1:TE,1:TM,2:TE,2:TM");
  analyze->add_option("--direction", analyze_args.direction, "Incidence port")->check(CLI::IsMember({1, 2}));
  analyze->add_option("-o,--output", analyze_args.output, "Polarimetry CSV output");
  analyze->add_option("--reading", analyze_args.reading, "Rotation reading")->check(CLI::IsMember({"phase", "magnitude"}));

  std::vector<std::string> recip_inputs;
  double recip_tol = 1e-9;
  auto* recip = app.add_subcommand("check-reciprocity", "Test S = S^T on Touchstone files");
  recip->add_option("inputs", recip_inputs, "Touchstone .sNp files")->required();
  recip->add_option("--tol", recip_tol, "Max |S - S^T| still called reciprocal");

  DesignArgs design_args;
  auto* design_cmd = app.add_subcommand("design", "Initial ring dimensions from the microstrip equations");
  design_cmd->add_option("--f-target", design_args.f_target, "Target resonance, Hz")->required();
  design_cmd->add_option("--eps-r", design_args.eps_r, "Substrate relative permittivity")->required();
  design_cmd->add_option("--height", design_args.height, "Substrate height, m")->required();
  design_cmd->add_option("--trace-width", design_args.trace_width, "Trace width, m")->required();
  design_cmd->add_option("--alpha-fet", design_args.alpha_fet, "Gap angle, rad");
  design_cmd->add_option("--fet-phase", design_args.fet_phase, "Electrical phase of the loaded gap, rad");
  design_cmd->add_option("--mode", design_args.mode, "Mode index m");

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Write a surrogate ring response as .s4p");
  synth->add_option("--f0", synth_args.params.f0, "Ring resonance, Hz")->required();
  synth->add_option("--q", synth_args.params.q_loaded, "Loaded Q")->required();
  synth->add_option("--u", synth_args.params.u, "Unilaterality in [0, 1]")->required();
  synth->add_option("--g", synth_args.params.g, "Resonant coupling amplitude")->required();
  synth->add_option("--il-bg", synth_args.params.il_bg, "Background co-pol transmission");
  synth->add_option("--refl-bg", synth_args.params.refl_bg, "Background reflection");
  synth->add_option("--f-start", synth_args.grid.f_start, "Grid start, Hz");
  synth->add_option("--f-stop", synth_args.grid.f_stop, "Grid stop, Hz");
  synth->add_option("--points", synth_args.grid.points, "Grid points");
  synth->add_option("--format", synth_args.format, "RI, MA or DB");
  synth->add_option("--precision", synth_args.precision, "Significant digits");
  synth->add_option("-o,--output", synth_args.output, "Output .s4p")->required();

  FerriteArgs ferrite_args;
  auto* ferrite_cmd = app.add_subcommand("ferrite", "Ferrite reference physics");
  ferrite_cmd->require_subcommand(1);
  const auto ferrite_flags = [&](CLI::App* c) {
    c->add_option("--h0", ferrite_args.params.h0, "Internal bias field, Oe");
    c->add_option("--m0-4pi", ferrite_args.params.m0_4pi, "Saturation magnetization 4*pi*M0, G");
    c->add_option("--alpha", ferrite_args.params.alpha, "Gilbert damping");
    c->add_option("--gamma", ferrite_args.params.gamma, "Gyromagnetic ratio, rad/s/Oe");
  };
  auto* tensor = ferrite_cmd->add_subcommand("tensor", "Polder permeability tensor");
  ferrite_flags(tensor);
  tensor->add_option("--freq", ferrite_args.freq, "Frequency, Hz")->required();
  auto* llg = ferrite_cmd->add_subcommand("llg", "Integrate the LLG equation in a static bias");
  ferrite_flags(llg);
  llg->add_option("--tilt-deg", ferrite_args.tilt_deg, "Initial tilt of m from the bias axis");
  llg->add_option("--m", ferrite_args.m_mag, "|m|, G");
  llg->add_option("--dt", ferrite_args.dt, "Step, s (default T/200)");
  llg->add_option("--periods", ferrite_args.periods, "Duration in Larmor periods");
  llg->add_option("--t-end", ferrite_args.t_end, "Duration, s (overrides --periods)");
  llg->add_option("-o,--output", ferrite_args.output, "Trajectory CSV");

  std::string em_path, circuit_path, cosim_map, cosim_out;
  auto* cosim_cmd = app.add_subcommand("cosim", "Cascade an EM Floquet block with a circuit block");
  cosim_cmd->add_option("em", em_path, "EM model .s4p")->required();
  cosim_cmd->add_option("circuit", circuit_path, "Circuit .s2p or .s4p")->required();
  cosim_cmd->add_option("--port-map", cosim_map, "Port map for the EM file");
  cosim_cmd->add_option("-o,--output", cosim_out, "Output .s4p")->required();

  std::string config_path, report_path, log_path, sweep_path;
  auto* optimize = app.add_subcommand("optimize", "Quasi-Newton design optimization");
  optimize->add_option("--config", config_path, "Run configuration JSON")->required();
  optimize->add_option("-o,--output", report_path, "Report JSON")->required();
  optimize->add_option("--log", log_path, "Per-iteration CSV log");
  optimize->add_option("--sweep", sweep_path, "Write the optimized sweep as .s4p");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  try {
    if (analyze->parsed()) return do_analyze(analyze_args, out);
    if (recip->parsed()) return do_check_reciprocity(recip_inputs, recip_tol, out);
    if (design_cmd->parsed()) return do_design(design_args, out);
    if (synth->parsed()) return do_synth(synth_args, out);
    if (tensor->parsed()) return do_ferrite_tensor(ferrite_args, out);
    if (llg->parsed()) return do_ferrite_llg(ferrite_args, out);
    if (cosim_cmd->parsed()) return do_cosim(em_path, circuit_path, cosim_map, cosim_out, out);
    if (optimize->parsed()) return do_optimize(config_path, report_path, log_path, sweep_path, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const AnalysisVerdict& e) {
    err << "verdict: " << e.what() << "\n";
    return kVerdict;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kUsage;
}

}  // namespace gyro::cli
