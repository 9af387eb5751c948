#include "trapcool/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "trapcool/errors.hpp"

namespace trapcool {

namespace {

double* double_field(ScenarioConfig& c, const std::string& key) {
  SystemParams& p = c.params;
  if (key == "chi") return &p.chi;
  if (key == "kappa") return &p.kappa;
  if (key == "gamma_h") return &p.gamma_h;
  if (key == "eta") return &p.eta;
  if (key == "nu") return &p.nu;
  if (key == "g") return &p.g;
  if (key == "phi") return &p.phi;
  if (key == "n0") return &p.n0;
  if (key == "epsilon") return &p.epsilon;
  if (key == "beta_mag") return &p.beta_mag;
  if (key == "lamb_dicke") return &p.lamb_dicke;
  if (key == "delta_internal") return &p.delta_internal;
  if (key == "tail_tolerance") return &c.tail_tolerance;
  if (key == "dt") return &c.dt;
  if (key == "t_final") return &c.t_final;
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw Error(ErrorKind::config, "key '" + key + "': cannot parse '" + text + "' as a number");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(v)) throw Error(ErrorKind::config, "key '" + key + "': value must be finite");
  }
  return v;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "chi",      "kappa",      "gamma_h",        "eta",     "nu",             "g",
      "phi",      "n0",         "epsilon",        "beta_mag", "lamb_dicke",    "delta_internal",
      "n_trunc",  "tail_tolerance", "dt",         "t_final", "n_traj",         "seed"};
  return keys;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw Error(ErrorKind::config, "format must be csv or json, got '" + s + "'");
}

void set_config_value(ScenarioConfig& c, const std::string& key, const std::string& value) {
  if (double* f = double_field(c, key)) {
    *f = parse_number<double>(key, value);
  } else if (key == "n_trunc") {
    c.n_trunc = parse_number<int>(key, value);
  } else if (key == "n_traj") {
    c.n_traj = parse_number<int>(key, value);
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, value);
  } else {
    throw Error(ErrorKind::config, "unknown key '" + key + "'");
  }
}

double get_config_number(const ScenarioConfig& c, const std::string& key) {
  auto& mut = const_cast<ScenarioConfig&>(c);
  if (const double* f = double_field(mut, key)) return *f;
  if (key == "n_trunc") return c.n_trunc;
  if (key == "n_traj") return c.n_traj;
  if (key == "seed") return static_cast<double>(c.seed);
  throw Error(ErrorKind::unsweepable_key, "unknown key '" + key + "'");
}

ScenarioConfig parse_config(std::istream& in, const std::string& source) {
  ScenarioConfig c;
  std::string line;
  int line_no = 0;
  std::vector<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::config, where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    for (const auto& s : seen) {
      if (s == key) throw Error(ErrorKind::config, where + "duplicate key '" + key + "'");
    }
    seen.push_back(key);
    try {
      set_config_value(c, key, value);
    } catch (const Error& e) {
      throw Error(ErrorKind::config, where + e.what());
    }
  }
  return c;
}

ScenarioConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config, "cannot open config file '" + path + "'");
  return parse_config(in, path);
}

std::string serialize_config(const ScenarioConfig& c) {
  std::string out;
  for (const auto& key : config_keys()) {
    out += key;
    out += " = ";
    if (key == "n_trunc") {
      out += std::to_string(c.n_trunc);
    } else if (key == "n_traj") {
      out += std::to_string(c.n_traj);
    } else if (key == "seed") {
      out += std::to_string(c.seed);
    } else {
      out += format_double(get_config_number(c, key));
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> ScenarioConfig::validate() const {
  std::vector<std::string> warnings = params.validate();
  if (n_trunc < 1) throw Error(ErrorKind::config, "n_trunc: must be >= 1");
  if (!(tail_tolerance > 0.0 && tail_tolerance < 1.0)) {
    throw Error(ErrorKind::config, "tail_tolerance: must lie in (0, 1)");
  }
  if (!(dt > 0.0)) throw Error(ErrorKind::config, "dt: must be > 0");
  if (!(t_final >= 0.0)) throw Error(ErrorKind::config, "t_final: must be >= 0");
  if (n_traj < 1) throw Error(ErrorKind::config, "n_traj: must be >= 1");
  return warnings;
}

}  // namespace trapcool
