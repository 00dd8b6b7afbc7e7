// Copyright 2026 The clde Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "clde/config_io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace clde {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  if (out.size() == 1 && out[0].empty()) out.clear();
  return out;
}

// Shortest text that parses back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

double to_double(const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) throw ContractError("expected a number");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE) {
    throw ContractError("'" + t + "' is not a number");
  }
  return v;
}

long long to_integer(const std::string& s) {
  const std::string t = trim(s);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ContractError("'" + t + "' is not an integer");
  }
  return v;
}

std::size_t to_size(const std::string& s) {
  const long long v = to_integer(s);
  if (v < 0) throw ContractError("expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

std::uint64_t to_u64(const std::string& s) {
  const std::string t = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ContractError("'" + t + "' is not an unsigned integer");
  }
  return v;
}

std::vector<double> to_doubles(const std::string& s) {
  std::vector<double> out;
  for (const std::string& item : split_list(s)) out.push_back(to_double(item));
  return out;
}

Vector to_vector(const std::string& s, Eigen::Index expected) {
  const std::vector<double> v = to_doubles(s);
  if (static_cast<Eigen::Index>(v.size()) != expected) {
    throw ContractError("expected " + std::to_string(expected) + " values");
  }
  return Eigen::Map<const Vector>(v.data(), expected);
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

std::string join(const Vector& v) {
  return join(std::vector<double>(v.data(), v.data() + v.size()));
}

Matrix to_gamma(const std::string& s) {
  const std::vector<double> v = to_doubles(s);
  if (v.size() == 1) return v[0] * Matrix::Identity(4, 4);
  if (v.size() == 4) {
    return Eigen::Map<const Vector>(v.data(), 4).asDiagonal();
  }
  if (v.size() == 16) {
    Matrix m(4, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) m(i, j) = v[static_cast<std::size_t>(4 * i + j)];
    }
    return m;
  }
  throw ContractError("gamma takes 1 (scalar), 4 (diagonal) or 16 values");
}

std::string render_gamma(const Matrix& g) {
  const bool diagonal = g.isDiagonal(0.0);
  if (diagonal && (g.diagonal().array() == g(0, 0)).all()) return fmt(g(0, 0));
  if (diagonal) return join(Vector(g.diagonal()));
  std::vector<double> v;
  for (int i = 0; i < g.rows(); ++i) {
    for (int j = 0; j < g.cols(); ++j) v.push_back(g(i, j));
  }
  return join(v);
}

struct KeySpec {
  ConfigKey key;
  std::function<void(SimConfig&, const std::string&)> set;
  std::function<std::string(const SimConfig&)> get;
};

const std::vector<KeySpec>& registry() {
  static const std::vector<KeySpec> specs = {
      {{"plant", "p1", "inertia constant p1"},
       [](SimConfig& c, const std::string& v) { c.plant.p1 = to_double(v); },
       [](const SimConfig& c) { return fmt(c.plant.p1); }},
      {{"plant", "p2", "inertia constant p2"},
       [](SimConfig& c, const std::string& v) { c.plant.p2 = to_double(v); },
       [](const SimConfig& c) { return fmt(c.plant.p2); }},
      {{"plant", "p3", "inertia constant p3"},
       [](SimConfig& c, const std::string& v) { c.plant.p3 = to_double(v); },
       [](const SimConfig& c) { return fmt(c.plant.p3); }},
      {{"plant", "theta", "true friction parameters (4 values)"},
       [](SimConfig& c, const std::string& v) {
         c.plant.theta_true = to_vector(v, 4);
       },
       [](const SimConfig& c) { return join(c.plant.theta_true); }},
      {{"plant", "reference_amplitudes", "joint reference amplitudes, rad"},
       [](SimConfig& c, const std::string& v) {
         c.controller.amplitudes = to_doubles(v);
       },
       [](const SimConfig& c) { return join(c.controller.amplitudes); }},
      {{"plant", "reference_frequencies", "reference frequencies, rad/s"},
       [](SimConfig& c, const std::string& v) {
         c.controller.frequencies = to_doubles(v);
       },
       [](const SimConfig& c) { return join(c.controller.frequencies); }},
      {{"plant", "kp", "tracking controller position gain"},
       [](SimConfig& c, const std::string& v) { c.controller.kp = to_double(v); },
       [](const SimConfig& c) { return fmt(c.controller.kp); }},
      {{"plant", "kd", "tracking controller velocity gain"},
       [](SimConfig& c, const std::string& v) { c.controller.kd = to_double(v); },
       [](const SimConfig& c) { return fmt(c.controller.kd); }},
      {{"plant", "compensation_theta",
        "friction parameters used by the controller (empty = true values)"},
       [](SimConfig& c, const std::string& v) {
         c.controller_theta =
             split_list(v).empty() ? Vector() : to_vector(v, 4);
       },
       [](const SimConfig& c) { return join(c.controller_theta); }},
      {{"observer", "k1", "observer gain k1"},
       [](SimConfig& c, const std::string& v) { c.observer.k1 = to_double(v); },
       [](const SimConfig& c) { return fmt(c.observer.k1); }},
      {{"observer", "alpha1", "observer gain alpha1"},
       [](SimConfig& c, const std::string& v) {
         c.observer.alpha1 = to_double(v);
       },
       [](const SimConfig& c) { return fmt(c.observer.alpha1); }},
      {{"observer", "gamma1", "parameter feedforward weight in [0, 1]"},
       [](SimConfig& c, const std::string& v) {
         c.observer.gamma1 = to_double(v);
       },
       [](const SimConfig& c) { return fmt(c.observer.gamma1); }},
      {{"estimator", "k", "concurrent-learning gain k"},
       [](SimConfig& c, const std::string& v) { c.estimator.k = to_double(v); },
       [](const SimConfig& c) { return fmt(c.estimator.k); }},
      {{"estimator", "gamma",
        "adaptation gain: 1 value (scalar), 4 (diagonal) or 16 (row-major)"},
       [](SimConfig& c, const std::string& v) { c.estimator.gamma = to_gamma(v); },
       [](const SimConfig& c) { return render_gamma(c.estimator.gamma); }},
      {{"estimator", "theta_bound", "parameter norm bound (divergence at 10x)"},
       [](SimConfig& c, const std::string& v) {
         c.estimator.theta_bound = to_double(v);
       },
       [](const SimConfig& c) { return fmt(c.estimator.theta_bound); }},
      {{"estimator", "theta_hat0", "initial parameter estimate (4 values)"},
       [](SimConfig& c, const std::string& v) { c.theta_hat0 = to_vector(v, 4); },
       [](const SimConfig& c) { return join(c.theta_hat0); }},
      {{"purge", "capacity", "history stack size M"},
       [](SimConfig& c, const std::string& v) { c.purge.capacity = to_size(v); },
       [](const SimConfig& c) { return std::to_string(c.purge.capacity); }},
      {{"purge", "xi", "purge threshold fraction in (0, 1]"},
       [](SimConfig& c, const std::string& v) { c.purge.xi = to_double(v); },
       [](const SimConfig& c) { return fmt(c.purge.xi); }},
      {{"purge", "dwell", "minimum time between purges, s"},
       [](SimConfig& c, const std::string& v) { c.purge.dwell = to_double(v); },
       [](const SimConfig& c) { return fmt(c.purge.dwell); }},
      {{"purge", "record_period", "time between recorded data points, s"},
       [](SimConfig& c, const std::string& v) {
         c.purge.record_period = to_double(v);
       },
       [](const SimConfig& c) { return fmt(c.purge.record_period); }},
      {{"sim", "method", "dynamic-observer or numerical-differentiation"},
       [](SimConfig& c, const std::string& v) { c.method = parse_method(trim(v)); },
       [](const SimConfig& c) { return to_string(c.method); }},
      {{"sim", "dt", "integration step, s"},
       [](SimConfig& c, const std::string& v) { c.dt = to_double(v); },
       [](const SimConfig& c) { return fmt(c.dt); }},
      {{"sim", "duration", "simulated time, s"},
       [](SimConfig& c, const std::string& v) { c.duration = to_double(v); },
       [](const SimConfig& c) { return fmt(c.duration); }},
      {{"sim", "noise_variance", "measurement noise variance"},
       [](SimConfig& c, const std::string& v) { c.noise_variance = to_double(v); },
       [](const SimConfig& c) { return fmt(c.noise_variance); }},
      {{"sim", "seed", "random seed"},
       [](SimConfig& c, const std::string& v) { c.seed = to_u64(v); },
       [](const SimConfig& c) { return std::to_string(c.seed); }},
      {{"sim", "log_period", "time between logged rows, s"},
       [](SimConfig& c, const std::string& v) { c.log_period = to_double(v); },
       [](const SimConfig& c) { return fmt(c.log_period); }},
      {{"sim", "steady_state_window", "final window for the RMS metric, s"},
       [](SimConfig& c, const std::string& v) {
         c.steady_state_window = to_double(v);
       },
       [](const SimConfig& c) { return fmt(c.steady_state_window); }},
      {{"sim", "x0", "initial state (4 values)"},
       [](SimConfig& c, const std::string& v) { c.x0 = to_vector(v, 4); },
       [](const SimConfig& c) { return join(c.x0); }},
      {{"baseline", "window", "polynomial fit window W, samples"},
       [](SimConfig& c, const std::string& v) { c.baseline.window = to_size(v); },
       [](const SimConfig& c) { return std::to_string(c.baseline.window); }},
      {{"baseline", "order", "polynomial order d"},
       [](SimConfig& c, const std::string& v) {
         c.baseline.order = static_cast<int>(to_integer(v));
       },
       [](const SimConfig& c) { return std::to_string(c.baseline.order); }},
      {{"baseline", "smoothing", "moving-average width w, samples"},
       [](SimConfig& c, const std::string& v) {
         c.baseline.smoothing = to_size(v);
       },
       [](const SimConfig& c) { return std::to_string(c.baseline.smoothing); }},
      {{"sweep", "k", "k values tried by compare"},
       [](SimConfig& c, const std::string& v) { c.sweep.k = to_doubles(v); },
       [](const SimConfig& c) { return join(c.sweep.k); }},
      {{"sweep", "windows", "baseline windows tried by compare"},
       [](SimConfig& c, const std::string& v) {
         c.sweep.windows.clear();
         for (const std::string& s : split_list(v)) {
           c.sweep.windows.push_back(to_size(s));
         }
       },
       [](const SimConfig& c) { return join(c.sweep.windows); }},
      {{"sweep", "orders", "baseline orders tried by compare"},
       [](SimConfig& c, const std::string& v) {
         c.sweep.orders.clear();
         for (const std::string& s : split_list(v)) {
           c.sweep.orders.push_back(static_cast<int>(to_integer(s)));
         }
       },
       [](const SimConfig& c) { return join(c.sweep.orders); }},
      {{"sweep", "xi", "purge thresholds tried by compare"},
       [](SimConfig& c, const std::string& v) { c.sweep.xi = to_doubles(v); },
       [](const SimConfig& c) { return join(c.sweep.xi); }},
      {{"sweep", "variances", "noise variances compared"},
       [](SimConfig& c, const std::string& v) {
         c.sweep.variances = to_doubles(v);
       },
       [](const SimConfig& c) { return join(c.sweep.variances); }},
      {{"sweep", "trials", "seeds per setting"},
       [](SimConfig& c, const std::string& v) {
         c.sweep.trials = static_cast<int>(to_integer(v));
       },
       [](const SimConfig& c) { return std::to_string(c.sweep.trials); }},
      {{"sweep", "threads", "worker threads for compare"},
       [](SimConfig& c, const std::string& v) {
         c.sweep.threads = static_cast<int>(to_integer(v));
       },
       [](const SimConfig& c) { return std::to_string(c.sweep.threads); }},
  };
  return specs;
}

const std::set<std::string>& manifest_keys() {
  static const std::set<std::string> keys{"version", "command", "outputs",
                                          "config_hash"};
  return keys;
}

const KeySpec* find_key(const std::string& section, const std::string& key) {
  for (const KeySpec& spec : registry()) {
    if (spec.key.section == section && spec.key.name == key) return &spec;
  }
  return nullptr;
}

bool known_section(const std::string& section) {
  if (section == "manifest") return true;
  for (const KeySpec& spec : registry()) {
    if (spec.key.section == section) return true;
  }
  return false;
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const KeySpec& spec : registry()) out.push_back(spec.key);
    return out;
  }();
  return keys;
}

void set_config_value(SimConfig& cfg, const std::string& section,
                      const std::string& key, const std::string& value) {
  const KeySpec* spec = find_key(section, key);
  if (!spec) {
    throw ConfigError(section + "." + key, 0, "unknown key");
  }
  try {
    spec->set(cfg, value);
  } catch (const ContractError& e) {
    throw ConfigError(section + "." + key, 0, e.what());
  }
}

SimConfig parse_config(const std::string& text) {
  SimConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  std::set<std::string> seen;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("", line_no, "malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (!known_section(section)) {
        throw ConfigError(section, line_no, "unknown section");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(trim(line), line_no, "expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw ConfigError(key, line_no, "key outside of a section");
    }
    const std::string full = section + "." + key;
    if (!seen.insert(full).second) {
      throw ConfigError(full, line_no, "duplicate key");
    }
    if (section == "manifest") {
      if (!manifest_keys().count(key)) {
        throw ConfigError(full, line_no, "unknown key");
      }
      continue;
    }
    const KeySpec* spec = find_key(section, key);
    if (!spec) throw ConfigError(full, line_no, "unknown key");
    try {
      spec->set(cfg, value);
    } catch (const ContractError& e) {
      throw ConfigError(full, line_no, e.what());
    }
  }
  try {
    validate(cfg);
  } catch (const ContractError& e) {
    throw ConfigError("", 0, e.what());
  }
  return cfg;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", 0, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string render_config(const SimConfig& cfg) {
  std::ostringstream os;
  std::string section;
  for (const KeySpec& spec : registry()) {
    if (spec.key.section != section) {
      if (!section.empty()) os << '\n';
      section = spec.key.section;
      os << '[' << section << "]\n";
    }
    os << spec.key.name << " = " << spec.get(cfg) << '\n';
  }
  return os.str();
}

std::uint64_t config_hash(const SimConfig& cfg) {
  SimConfig copy = cfg;
  copy.seed = 0;
  const std::string text = render_config(copy);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string render_manifest(const RunManifest& m) {
  std::ostringstream os;
  os << render_config(m.config) << "\n[manifest]\n";
  os << "version = " << m.version << '\n';
  os << "command = " << m.command << '\n';
  os << "config_hash = " << config_hash(m.config) << '\n';
  os << "outputs = ";
  for (std::size_t i = 0; i < m.outputs.size(); ++i) {
    if (i) os << ", ";
    os << m.outputs[i];
  }
  os << '\n';
  return os.str();
}

}  // namespace clde
