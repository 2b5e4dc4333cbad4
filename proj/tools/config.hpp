#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gyro/ferrite.hpp"
#include "gyro/optimize.hpp"
#include "gyro/resonator.hpp"
#include "gyro/surrogate.hpp"
#include "gyro/touchstone.hpp"

namespace gyro::cli {

struct GridConfig {
  double f_start = 4e9;
  double f_stop = 7e9;
  std::size_t points = 801;

  std::vector<double> frequencies() const { return linear_grid(f_start, f_stop, points); }
};

// JSON run configuration. Every group is optional and falls back to the
// defaults of the corresponding library type; every group that is present
// is validated against that type's invariants on load.
struct RunConfig {
  GridConfig grid;
  SurrogateParams surrogate;
  OptimizationGoal goal;
  opt::QuasiNewtonOptions optimizer;
  design::Substrate substrate = design::kFr4;
  ferrite::FerriteParams ferrite;
  io::PortMap port_map = io::kIdentityPortMap;
};

// Throws ValidationError on malformed JSON, unknown keys or bad values.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace gyro::cli
