#pragma once

#include <Eigen/Core>
#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gyro/smatrix.hpp"

namespace gyro::io {

enum class DataFormat { RI, MA, DB };
enum class FrequencyUnit { Hz, kHz, MHz, GHz };

double unit_scale(FrequencyUnit unit);

// n-port frequency-domain S-data. Values are stored as linear complex
// numbers whatever format the source file used; `format`, `unit` and
// `reference_impedance` only record how it was (or will be) written.
struct Network {
  int n_ports = 0;
  std::vector<double> frequencies;      // Hz, strictly increasing
  std::vector<Eigen::MatrixXcd> data;   // n_ports x n_ports per frequency
  DataFormat format = DataFormat::RI;
  FrequencyUnit unit = FrequencyUnit::GHz;
  double reference_impedance = 50.0;

  void validate() const;
};

// Touchstone v1 text. `n_ports` normally comes from the .sNp extension;
// when absent, 1- and 2-port data are recognised from the first data line.
// Throws ParseError carrying the offending line number.
Network parse_touchstone(std::string_view text, std::optional<int> n_ports = std::nullopt);

struct WriteOptions {
  DataFormat format = DataFormat::RI;
  FrequencyUnit unit = FrequencyUnit::GHz;
  int precision = 12;  // significant digits per numeric field
};

std::string write_touchstone(const Network& n, const WriteOptions& options = {});

// Port count from a ".sNp" extension, if it has one.
std::optional<int> ports_from_extension(const std::filesystem::path& path);
Network read_touchstone_file(const std::filesystem::path& path);
void write_touchstone_file(const std::filesystem::path& path, const Network& n,
                           const WriteOptions& options = {});

struct FloquetPort {
  int port = 1;  // Floquet port 1 or 2
  FloquetMode mode = FloquetMode::TE;
  friend bool operator==(const FloquetPort&, const FloquetPort&) = default;
};

// Floquet (port, mode) of each physical port, in physical port order.
using PortMap = std::array<FloquetPort, 4>;

inline constexpr PortMap kIdentityPortMap{{{1, FloquetMode::TE},
                                           {1, FloquetMode::TM},
                                           {2, FloquetMode::TE},
                                           {2, FloquetMode::TM}}};

// Parses "1:TE,1:TM,2:TE,2:TM" (physical ports 1..4 in order).
PortMap parse_port_map(std::string_view text);

// Re-indexes 4-port data into the Floquet ordering. Throws
// ValidationError when the map is not a bijection or n_ports != 4.
FloquetSweep map_ports_to_floquet(const Network& n, const PortMap& map = kIdentityPortMap);

// 4-port network already in Floquet order.
Network to_network(const FloquetSweep& sweep);

// Circuit side of a co-simulation: 4-port data is taken in Floquet order,
// 2-port data is applied to both polarizations.
FloquetSweep circuit_blocks(const Network& n);

}  // namespace gyro::io
