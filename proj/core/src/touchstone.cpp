#include "gyro/touchstone.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gyro/errors.hpp"
#include "gyro/surrogate.hpp"

namespace gyro::io {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
// dB floor written for exact zeros; 10^(-6000/20) = 1e-300.
constexpr double kDbFloor = -6000.0;

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

double to_double(std::string_view token, std::size_t line) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw ParseError(line, "invalid number '" + std::string(token) + "'");
  }
  return v;
}

Complex to_complex(double a, double b, DataFormat format) {
  switch (format) {
    case DataFormat::RI:
      return {a, b};
    case DataFormat::MA:
      return std::polar(a, b * kDeg);
    case DataFormat::DB:
      return std::polar(std::pow(10.0, a / 20.0), b * kDeg);
  }
  return {};
}

struct OptionLine {
  FrequencyUnit unit = FrequencyUnit::GHz;
  DataFormat format = DataFormat::MA;
  double z0 = 50.0;
};

OptionLine parse_option_line(std::string_view body, std::size_t line) {
  OptionLine opt;
  const auto tokens = split_ws(body);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string t = upper(tokens[i]);
    if (t == "HZ") opt.unit = FrequencyUnit::Hz;
    else if (t == "KHZ") opt.unit = FrequencyUnit::kHz;
    else if (t == "MHZ") opt.unit = FrequencyUnit::MHz;
    else if (t == "GHZ") opt.unit = FrequencyUnit::GHz;
    else if (t == "RI") opt.format = DataFormat::RI;
    else if (t == "MA") opt.format = DataFormat::MA;
    else if (t == "DB") opt.format = DataFormat::DB;
    else if (t == "S") continue;
    else if (t == "Y" || t == "Z" || t == "H" || t == "G") {
      throw ParseError(line, "malformed option line: only S parameters are supported");
    } else if (t == "R") {
      if (i + 1 >= tokens.size()) throw ParseError(line, "malformed option line: R needs a value");
      opt.z0 = to_double(tokens[++i], line);
      if (!(opt.z0 > 0.0)) throw ParseError(line, "malformed option line: R must be > 0");
    } else {
      throw ParseError(line, "malformed option line: unknown token '" + std::string(tokens[i]) + "'");
    }
  }
  return opt;
}

// Lines a single frequency point occupies and the value count on each.
std::vector<std::size_t> point_layout(int n) {
  if (n <= 2) return {static_cast<std::size_t>(1 + 2 * n * n)};
  std::vector<std::size_t> layout;
  for (int row = 0; row < n; ++row) {
    for (int done = 0; done < n; done += 4) {
      const auto pairs = static_cast<std::size_t>(std::min(4, n - done));
      layout.push_back(2 * pairs + (layout.empty() ? 1 : 0));
    }
  }
  return layout;
}

const char* unit_name(FrequencyUnit u) {
  switch (u) {
    case FrequencyUnit::Hz: return "HZ";
    case FrequencyUnit::kHz: return "KHZ";
    case FrequencyUnit::MHz: return "MHZ";
    case FrequencyUnit::GHz: return "GHZ";
  }
  return "GHZ";
}

const char* format_name(DataFormat f) {
  switch (f) {
    case DataFormat::RI: return "RI";
    case DataFormat::MA: return "MA";
    case DataFormat::DB: return "DB";
  }
  return "RI";
}

}  // namespace

double unit_scale(FrequencyUnit unit) {
  switch (unit) {
    case FrequencyUnit::Hz: return 1.0;
    case FrequencyUnit::kHz: return 1e3;
    case FrequencyUnit::MHz: return 1e6;
    case FrequencyUnit::GHz: return 1e9;
  }
  return 1.0;
}

void Network::validate() const {
  if (n_ports < 1 || n_ports > 4) {
    throw ValidationError("unsupported port count " + std::to_string(n_ports) + " (1-4 supported)");
  }
  if (frequencies.size() != data.size()) throw ValidationError("network frequency/data length mismatch");
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].rows() != n_ports || data[i].cols() != n_ports) {
      throw ValidationError("network data at index " + std::to_string(i) + " is not " +
                            std::to_string(n_ports) + "x" + std::to_string(n_ports));
    }
    if (i > 0 && !(frequencies[i] > frequencies[i - 1])) {
      throw ValidationError("network frequencies must be strictly increasing");
    }
  }
}

Network parse_touchstone(std::string_view text, std::optional<int> n_ports) {
  if (n_ports && (*n_ports < 1 || *n_ports > 4)) {
    throw ValidationError("unsupported port count " + std::to_string(*n_ports));
  }
  Network net;
  OptionLine opt;
  bool seen_option = false;

  std::vector<std::size_t> layout;
  std::vector<double> pending;   // values of the point being assembled
  std::size_t pending_line = 0;  // line where that point started
  std::size_t layout_pos = 0;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (const auto bang = line.find('!'); bang != std::string_view::npos) line = line.substr(0, bang);
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;

    if (tokens.front().front() == '#') {
      if (!seen_option) {
        opt = parse_option_line(line.substr(line.find('#') + 1), line_no);
        seen_option = true;
      }
      continue;
    }
    if (tokens.front().front() == '[') {
      throw ParseError(line_no, "Touchstone v2 keywords are not supported");
    }

    if (!net.n_ports) {
      if (n_ports) {
        net.n_ports = *n_ports;
      } else if (tokens.size() == 3) {
        net.n_ports = 1;
      } else if (tokens.size() == 9) {
        net.n_ports = 2;
      } else {
        throw ParseError(line_no, "cannot infer port count from " + std::to_string(tokens.size()) +
                                      " values; give the port count explicitly");
      }
      layout = point_layout(net.n_ports);
    }

    const std::size_t expected = layout[layout_pos];
    if (tokens.size() != expected) {
      throw ParseError(line_no, "ragged data row: expected " + std::to_string(expected) +
                                    " values, found " + std::to_string(tokens.size()));
    }
    if (layout_pos == 0) pending_line = line_no;
    for (auto t : tokens) pending.push_back(to_double(t, line_no));
    if (++layout_pos < layout.size()) continue;

    // One complete frequency point.
    const int n = net.n_ports;
    const double f = pending[0] * unit_scale(opt.unit);
    if (!net.frequencies.empty() && !(f > net.frequencies.back())) {
      throw ParseError(pending_line, "non-monotone frequencies");
    }
    Eigen::MatrixXcd s(n, n);
    for (int k = 0; k < n * n; ++k) {
      const Complex v = to_complex(pending[1 + 2 * k], pending[2 + 2 * k], opt.format);
      // 2-port data is column-major (S11 S21 S12 S22); larger networks are row-major.
      if (n == 2) s(k % 2, k / 2) = v;
      else s(k / n, k % n) = v;
    }
    net.frequencies.push_back(f);
    net.data.push_back(std::move(s));
    pending.clear();
    layout_pos = 0;
  }

  if (layout_pos != 0) {
    throw ParseError(pending_line, "ragged data row: frequency point is incomplete at end of file");
  }
  if (net.frequencies.empty()) throw ParseError(0, "no data lines found");
  net.format = opt.format;
  net.unit = opt.unit;
  net.reference_impedance = opt.z0;
  return net;
}

std::string write_touchstone(const Network& n, const WriteOptions& options) {
  n.validate();
  if (options.precision < 1 || options.precision > 17) {
    throw ValidationError("precision must be 1-17 significant digits");
  }
  std::ostringstream os;
  char buf[64];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.*g", options.precision, v);
    return std::string(buf);
  };
  os << "! " << n.n_ports << "-port S-parameters\n";
  os << "# " << unit_name(options.unit) << " S " << format_name(options.format) << " R "
     << num(n.reference_impedance) << "\n";

  const auto pair = [&](Complex v) {
    double a = v.real(), b = v.imag();
    if (options.format == DataFormat::MA) {
      a = std::abs(v);
      b = std::arg(v) / kDeg;
    } else if (options.format == DataFormat::DB) {
      const double mag = std::abs(v);
      a = mag > 0.0 ? std::max(20.0 * std::log10(mag), kDbFloor) : kDbFloor;
      b = std::arg(v) / kDeg;
    }
    return num(a) + " " + num(b);
  };

  const int np = n.n_ports;
  for (std::size_t i = 0; i < n.frequencies.size(); ++i) {
    const auto& s = n.data[i];
    os << num(n.frequencies[i] / unit_scale(options.unit));
    if (np <= 2) {
      for (int k = 0; k < np * np; ++k) {
        os << ' ' << pair(np == 2 ? s(k % 2, k / 2) : s(0, 0));
      }
      os << '\n';
      continue;
    }
    bool first_line = true;
    for (int row = 0; row < np; ++row) {
      for (int col = 0; col < np; ++col) {
        if (col % 4 == 0 && !first_line) os << "\n ";
        first_line = false;
        os << ' ' << pair(s(row, col));
      }
    }
    os << '\n';
  }
  return os.str();
}

std::optional<int> ports_from_extension(const std::filesystem::path& path) {
  const std::string ext = upper(path.extension().string());
  if (ext.size() == 4 && ext[1] == 'S' && ext[3] == 'P' && std::isdigit(static_cast<unsigned char>(ext[2]))) {
    return ext[2] - '0';
  }
  return std::nullopt;
}

Network read_touchstone_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_touchstone(ss.str(), ports_from_extension(path));
}

void write_touchstone_file(const std::filesystem::path& path, const Network& n,
                           const WriteOptions& options) {
  const std::string text = write_touchstone(n, options);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << text;
}

PortMap parse_port_map(std::string_view text) {
  PortMap map{};
  std::size_t count = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    std::string item = upper(text.substr(pos, comma - pos));
    std::erase_if(item, [](unsigned char c) { return std::isspace(c); });
    pos = comma + 1;
    const auto colon = item.find(':');
    if (count >= 4 || colon == std::string::npos) {
      throw ValidationError("port map must list 4 entries like 1:TE,1:TM,2:TE,2:TM");
    }
    const std::string port = item.substr(0, colon);
    const std::string mode = item.substr(colon + 1);
    FloquetPort fp;
    if (port == "1") fp.port = 1;
    else if (port == "2") fp.port = 2;
    else throw ValidationError("port map: Floquet port must be 1 or 2, got '" + port + "'");
    if (mode == "TE") fp.mode = FloquetMode::TE;
    else if (mode == "TM") fp.mode = FloquetMode::TM;
    else throw ValidationError("port map: mode must be TE or TM, got '" + mode + "'");
    map[count++] = fp;
  }
  if (count != 4) throw ValidationError("port map must list exactly 4 entries");
  return map;
}

FloquetSweep map_ports_to_floquet(const Network& n, const PortMap& map) {
  n.validate();
  if (n.n_ports != 4) {
    throw ValidationError("Floquet mapping needs 4-port data, got " + std::to_string(n.n_ports));
  }
  std::array<int, 4> target{};
  std::array<bool, 4> used{};
  for (int i = 0; i < 4; ++i) {
    if (map[i].port != 1 && map[i].port != 2) throw ValidationError("port map: Floquet port must be 1 or 2");
    target[i] = floquet_index(map[i].port, map[i].mode);
    if (used[target[i]]) throw ValidationError("port map is not a bijection");
    used[target[i]] = true;
  }
  std::vector<FloquetSMatrix> out;
  out.reserve(n.data.size());
  for (const auto& s : n.data) {
    FloquetSMatrix::Matrix m;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) m(target[i], target[j]) = s(i, j);
    }
    out.emplace_back(m);
  }
  return FloquetSweep(n.frequencies, std::move(out), "touchstone");
}

Network to_network(const FloquetSweep& sweep) {
  Network n;
  n.n_ports = 4;
  n.frequencies = sweep.frequencies();
  n.data.reserve(sweep.size());
  for (const auto& m : sweep.matrices()) n.data.emplace_back(m.matrix());
  return n;
}

FloquetSweep circuit_blocks(const Network& n) {
  n.validate();
  if (n.n_ports == 4) return map_ports_to_floquet(n);
  if (n.n_ports != 2) {
    throw ValidationError("circuit block needs 2- or 4-port data, got " + std::to_string(n.n_ports));
  }
  std::vector<FloquetSMatrix> out;
  out.reserve(n.data.size());
  for (const auto& s : n.data) out.push_back(expand_two_port(s));
  return FloquetSweep(n.frequencies, std::move(out), "circuit");
}

}  // namespace gyro::io
