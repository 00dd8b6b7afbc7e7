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

#ifndef CLDE_FIXTURE_HPP_
#define CLDE_FIXTURE_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "clde/sim.hpp"

namespace clde {

using Metrics = std::map<std::string, double>;

/// Scalar summary of a run: steady-state RMS, final relative error, final
/// estimate, switch count, and the extreme stack singular values.
Metrics run_metrics(const SimConfig& cfg, const TrajectoryLog& log);

/// "name,value" lines in key order, values with 17 significant digits.
void write_metrics(std::ostream& os, const Metrics& metrics);

/// Reference run kept under version control. Stores the manifest, the
/// config hash (seed excluded), the metrics and the first and last rows of
/// the trajectory CSV for human inspection.
struct GoldenFixture {
  std::string manifest;
  std::uint64_t config_hash = 0;
  std::uint64_t metrics_digest = 0;
  Metrics metrics;
  std::string csv_header;
  std::vector<std::string> head_rows;
  std::vector<std::string> tail_rows;
};

GoldenFixture make_fixture(const SimConfig& cfg, const TrajectoryLog& log,
                           const std::string& version,
                           std::size_t rows_each_end = 100);

std::string to_json(const GoldenFixture& fixture);
GoldenFixture fixture_from_json(const std::string& text);

struct RegressionResult {
  bool pass = true;
  std::vector<std::string> mismatches;
};

/// Compares metrics within `relative` tolerance. Throws StaleFixtureError
/// when the fresh configuration hashes differently from the fixture's.
RegressionResult regression_check(const GoldenFixture& fixture,
                                  const SimConfig& fresh_cfg,
                                  const TrajectoryLog& fresh_log,
                                  double relative = 1e-9);

}  // namespace clde

#endif  // CLDE_FIXTURE_HPP_
