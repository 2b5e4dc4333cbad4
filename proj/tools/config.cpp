#include "config.hpp"

#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>

#include "gyro/errors.hpp"

namespace gyro::cli {

namespace {

using nlohmann::json;

void only_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ValidationError("config: '" + where + "' must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ValidationError("config: unknown key '" + where + "." + key + "'");
  }
}

void read(const json& j, const char* key, double& out, const std::string& where) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_number()) {
    throw ValidationError("config: '" + where + "." + key + "' must be a number");
  }
  out = j.at(key).get<double>();
}

void read_bounds(const json& j, const char* key, ParameterBounds& out) {
  if (!j.contains(key)) return;
  const json& b = j.at(key);
  if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number()) {
    throw ValidationError(std::string("config: 'goal.bounds.") + key + "' must be [lower, upper]");
  }
  out = {b[0].get<double>(), b[1].get<double>()};
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  only_keys(root, "root",
            {"grid", "surrogate", "goal", "optimizer", "substrate", "ferrite", "port_map"});

  RunConfig cfg;
  if (root.contains("grid")) {
    const json& g = root["grid"];
    only_keys(g, "grid", {"f_start_hz", "f_stop_hz", "points"});
    read(g, "f_start_hz", cfg.grid.f_start, "grid");
    read(g, "f_stop_hz", cfg.grid.f_stop, "grid");
    if (g.contains("points")) {
      if (!g["points"].is_number_unsigned()) throw ValidationError("config: 'grid.points' must be a positive integer");
      cfg.grid.points = g["points"].get<std::size_t>();
    }
    if (cfg.grid.points < 3) throw ValidationError("config: 'grid.points' must be >= 3");
    cfg.grid.frequencies();  // validates start/stop
  }

  if (root.contains("surrogate")) {
    const json& s = root["surrogate"];
    only_keys(s, "surrogate", {"f0_hz", "q_loaded", "u", "g", "il_bg", "refl_bg"});
    read(s, "f0_hz", cfg.surrogate.f0, "surrogate");
    read(s, "q_loaded", cfg.surrogate.q_loaded, "surrogate");
    read(s, "u", cfg.surrogate.u, "surrogate");
    read(s, "g", cfg.surrogate.g, "surrogate");
    read(s, "il_bg", cfg.surrogate.il_bg, "surrogate");
    read(s, "refl_bg", cfg.surrogate.refl_bg, "surrogate");
  }
  cfg.surrogate.validate();

  if (root.contains("goal")) {
    const json& g = root["goal"];
    only_keys(g, "goal", {"f_target_hz", "incidence", "weights", "bounds"});
    read(g, "f_target_hz", cfg.goal.f_target, "goal");
    if (g.contains("incidence")) {
      const json& inc = g["incidence"];
      if (inc == 1) cfg.goal.incidence = Incidence::Port1;
      else if (inc == 2) cfg.goal.incidence = Incidence::Port2;
      else throw ValidationError("config: 'goal.incidence' must be 1 or 2");
    }
    if (g.contains("weights")) {
      const json& w = g["weights"];
      only_keys(w, "goal.weights", {"resonance", "rotation", "copol"});
      read(w, "resonance", cfg.goal.weights.resonance, "goal.weights");
      read(w, "rotation", cfg.goal.weights.rotation, "goal.weights");
      read(w, "copol", cfg.goal.weights.copol, "goal.weights");
    }
    if (g.contains("bounds")) {
      const json& b = g["bounds"];
      only_keys(b, "goal.bounds", {"f0_hz", "q_loaded", "u", "g"});
      read_bounds(b, "f0_hz", cfg.goal.f0);
      read_bounds(b, "q_loaded", cfg.goal.q_loaded);
      read_bounds(b, "u", cfg.goal.u);
      read_bounds(b, "g", cfg.goal.g);
    }
  }
  cfg.goal.validate();

  if (root.contains("optimizer")) {
    const json& o = root["optimizer"];
    only_keys(o, "optimizer", {"max_iter", "gtol", "ftol", "fd_step"});
    if (o.contains("max_iter")) {
      if (!o["max_iter"].is_number_integer() || o["max_iter"].get<int>() < 1) {
        throw ValidationError("config: 'optimizer.max_iter' must be a positive integer");
      }
      cfg.optimizer.max_iter = o["max_iter"].get<int>();
    }
    read(o, "gtol", cfg.optimizer.gtol, "optimizer");
    read(o, "ftol", cfg.optimizer.ftol, "optimizer");
    read(o, "fd_step", cfg.optimizer.fd_step, "optimizer");
    if (!(cfg.optimizer.gtol >= 0.0 && cfg.optimizer.ftol >= 0.0 && cfg.optimizer.fd_step > 0.0)) {
      throw ValidationError("config: optimizer tolerances must be >= 0 and fd_step > 0");
    }
  }

  if (root.contains("substrate")) {
    const json& s = root["substrate"];
    only_keys(s, "substrate", {"eps_r", "height_m"});
    read(s, "eps_r", cfg.substrate.eps_r, "substrate");
    read(s, "height_m", cfg.substrate.height, "substrate");
  }
  cfg.substrate.validate();

  if (root.contains("ferrite")) {
    const json& f = root["ferrite"];
    only_keys(f, "ferrite", {"h0_oe", "m0_4pi_g", "alpha", "gamma"});
    read(f, "h0_oe", cfg.ferrite.h0, "ferrite");
    read(f, "m0_4pi_g", cfg.ferrite.m0_4pi, "ferrite");
    read(f, "alpha", cfg.ferrite.alpha, "ferrite");
    read(f, "gamma", cfg.ferrite.gamma, "ferrite");
  }
  cfg.ferrite.validate();

  if (root.contains("port_map")) {
    if (!root["port_map"].is_string()) throw ValidationError("config: 'port_map' must be a string");
    cfg.port_map = io::parse_port_map(root["port_map"].get<std::string>());
  }

  const auto& b = cfg.goal;
  const auto within = [](double v, const ParameterBounds& pb) { return v >= pb.lower && v <= pb.upper; };
  if (!within(cfg.surrogate.f0, b.f0) || !within(cfg.surrogate.q_loaded, b.q_loaded) ||
      !within(cfg.surrogate.u, b.u) || !within(cfg.surrogate.g, b.g)) {
    throw ValidationError("config: surrogate start point lies outside goal.bounds");
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace gyro::cli
