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

#include "clde/fixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "clde/config_io.hpp"

namespace clde {

Metrics run_metrics(const SimConfig& cfg, const TrajectoryLog& log) {
  Metrics m;
  m["rms_steady_state"] = rms_steady_state_error(log, cfg.steady_state_window);
  m["final_relative_error"] = final_relative_error(log);
  m["switch_count"] = static_cast<double>(log.switch_times.size());
  const Vector& theta_hat = log.rows.back().theta_hat;
  for (Eigen::Index i = 0; i < theta_hat.size(); ++i) {
    m["final_theta_hat_" + std::to_string(i + 1)] = theta_hat(i);
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const StackSummary& s : log.stacks) {
    lo = std::min(lo, s.sigma_min);
    hi = std::max(hi, s.sigma_min);
  }
  m["min_stack_sigma_min"] = lo;
  m["max_stack_sigma_min"] = hi;
  return m;
}

void write_metrics(std::ostream& os, const Metrics& metrics) {
  os << "metric,value\n";
  for (const auto& [name, value] : metrics) {
    os << name << ',' << format_double(value) << '\n';
  }
}

namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t digest(const Metrics& metrics) {
  std::ostringstream os;
  write_metrics(os, metrics);
  return fnv1a(os.str());
}

}  // namespace

GoldenFixture make_fixture(const SimConfig& cfg, const TrajectoryLog& log,
                           const std::string& version,
                           std::size_t rows_each_end) {
  GoldenFixture f;
  RunManifest manifest{cfg, version, "simulate", {"trajectory.csv"}};
  f.manifest = render_manifest(manifest);
  f.config_hash = config_hash(cfg);
  f.metrics = run_metrics(cfg, log);
  f.metrics_digest = digest(f.metrics);

  std::ostringstream csv;
  write_log_csv(csv, log);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, f.csv_header);
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  const std::size_t n = std::min(rows_each_end, rows.size());
  f.head_rows.assign(rows.begin(), rows.begin() + static_cast<long>(n));
  f.tail_rows.assign(rows.end() - static_cast<long>(n), rows.end());
  return f;
}

std::string to_json(const GoldenFixture& f) {
  nlohmann::ordered_json j;
  j["config_hash"] = std::to_string(f.config_hash);
  j["metrics_digest"] = std::to_string(f.metrics_digest);
  j["manifest"] = f.manifest;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  for (const auto& [name, value] : f.metrics) metrics[name] = format_double(value);
  j["metrics"] = metrics;
  j["csv_header"] = f.csv_header;
  j["head_rows"] = f.head_rows;
  j["tail_rows"] = f.tail_rows;
  return j.dump(2) + "\n";
}

GoldenFixture fixture_from_json(const std::string& text) {
  GoldenFixture f;
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    f.config_hash = std::stoull(j.at("config_hash").get<std::string>());
    f.metrics_digest = std::stoull(j.at("metrics_digest").get<std::string>());
    f.manifest = j.at("manifest").get<std::string>();
    for (const auto& [name, value] : j.at("metrics").items()) {
      f.metrics[name] = std::stod(value.get<std::string>());
    }
    f.csv_header = j.at("csv_header").get<std::string>();
    f.head_rows = j.at("head_rows").get<std::vector<std::string>>();
    f.tail_rows = j.at("tail_rows").get<std::vector<std::string>>();
  } catch (const std::exception& e) {
    throw Error(std::string("malformed fixture: ") + e.what());
  }
  return f;
}

RegressionResult regression_check(const GoldenFixture& fixture,
                                  const SimConfig& fresh_cfg,
                                  const TrajectoryLog& fresh_log,
                                  double relative) {
  if (config_hash(fresh_cfg) != fixture.config_hash) {
    throw StaleFixtureError(
        "fixture was generated from a different configuration; regenerate it");
  }
  RegressionResult result;
  const Metrics fresh = run_metrics(fresh_cfg, fresh_log);
  for (const auto& [name, expected] : fixture.metrics) {
    const auto it = fresh.find(name);
    if (it == fresh.end()) {
      result.pass = false;
      result.mismatches.push_back(name + ": missing");
      continue;
    }
    const double scale = std::max(std::abs(expected), 1e-300);
    if (std::abs(it->second - expected) > relative * scale) {
      result.pass = false;
      result.mismatches.push_back(name + ": expected " +
                                  format_double(expected) + ", got " +
                                  format_double(it->second));
    }
  }
  return result;
}

}  // namespace clde
