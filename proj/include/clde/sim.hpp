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

#ifndef CLDE_SIM_HPP_
#define CLDE_SIM_HPP_

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "clde/errors.hpp"
#include "clde/sim_config.hpp"
#include "clde/trajectory_log.hpp"

namespace clde {

/// Run aborted because the state or the estimate left the finite range or
/// ||theta_hat|| exceeded 10 theta_bound. Carries the log up to the abort.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, TrajectoryLog partial)
      : Error(what), partial_(std::move(partial)) {}
  const TrajectoryLog& partial_log() const { return partial_; }

 private:
  TrajectoryLog partial_;
};

/// x + w with w ~ N(0, variance I). Draws nothing when variance is 0.
Vector add_measurement_noise(const Vector& x, double variance,
                             std::mt19937_64& rng);

/// Independent stream seeds derived from a run seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Closed-loop run of the two-link benchmark: the controller sees the true
/// state, the observer, history stacks and update law see the measurements.
TrajectoryLog run_experiment(const SimConfig& cfg);

/// RMS of ||theta_hat - theta|| over the log rows with t >= t_end - window.
double rms_steady_state_error(const TrajectoryLog& log, double window);

/// Final ||theta_tilde|| / ||theta||.
double final_relative_error(const TrajectoryLog& log);

struct ComparisonCell {
  Method method = Method::kDynamicObserver;
  double variance = 0.0;
  // Lowest, over the sweep settings, of the RMS pooled over the trials:
  // sqrt(mean_i rms_i^2). A setting with a failed trial is not eligible.
  double best_rms = 0.0;
  // Setting that produced best_rms.
  double k = 0.0;
  double xi = 0.0;
  std::size_t window = 0;
  int order = 0;
  int trials = 0;
  int runs = 0;
  int failed_runs = 0;
  std::vector<std::string> errors;
};

struct ComparisonTable {
  std::vector<double> variances;
  std::vector<ComparisonCell> cells;  // method-major, then variance

  const ComparisonCell& cell(Method method, double variance) const;
};

/// For each variance and method, runs every sweep setting `trials` times
/// (trial i uses seed cfg.seed + i) and keeps the setting with the lowest
/// pooled steady-state RMS. Run failures are recorded per cell. Uses
/// cfg.sweep.threads worker threads; results do not depend on it.
ComparisonTable compare_methods(const SimConfig& cfg,
                                const std::vector<double>& variances,
                                int trials);

/// Log rows as CSV with a header naming every column.
void write_log_csv(std::ostream& os, const TrajectoryLog& log);
void write_switch_csv(std::ostream& os, const TrajectoryLog& log);
void write_lyapunov_csv(std::ostream& os, const TrajectoryLog& log);
/// Parsers for the three CSV files above. Throw Error on malformed input.
std::vector<LogRow> read_log_csv(std::istream& is);
std::vector<StackSummary> read_switch_csv(std::istream& is);
std::vector<LyapunovSample> read_lyapunov_csv(std::istream& is);

void write_comparison_csv(std::ostream& os, const ComparisonTable& table);
std::string render_comparison(const ComparisonTable& table);

/// Formats with 17 significant digits.
std::string format_double(double v);

}  // namespace clde

#endif  // CLDE_SIM_HPP_
