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

#ifndef CLDE_HISTORY_STACK_HPP_
#define CLDE_HISTORY_STACK_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "clde/numerics.hpp"
#include "clde/plant.hpp"

namespace clde {

/// One recorded tuple (derivative estimate, state, input) and its time.
struct DataPoint {
  Vector x_hat_dot;
  Vector x;
  Vector u;
  double t = 0.0;
};

/// Fixed-capacity store of data points. Each entry caches its regressor
/// products so the gram matrix sum_j Y_j^T Y_j and the regression target
/// sum_j Y_j^T (x_hat_dot_j - f1_j - g_j u_j) are re-summed from cached terms
/// (in slot order) after every mutation without re-evaluating the plant.
class HistoryStack {
 public:
  HistoryStack(std::size_t capacity, int param_dim);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool full() const { return entries_.size() == capacity_; }
  int param_dim() const { return param_dim_; }

  const DataPoint& point(std::size_t slot) const;
  std::vector<DataPoint> points() const;

  /// sum_j Y^T(x_j) Y(x_j); zero for an empty stack.
  const Matrix& gram() const { return gram_; }
  /// sum_j Y^T(x_j) (x_hat_dot_j - f1(x_j) - g(x_j) u_j).
  const Vector& target() const { return target_; }
  /// sigma_min of the gram, cached.
  double min_singular_value() const { return sigma_min_; }

  /// Per-slot gram contribution Y^T(x_j) Y(x_j).
  const Matrix& contribution(std::size_t slot) const;

  void append(const DataPoint& p, const Plant& plant);
  void replace(std::size_t slot, const DataPoint& p, const Plant& plant);
  void clear();

  /// Gram re-evaluated from scratch through the plant (for verification).
  Matrix recompute_gram(const Plant& plant) const;

  struct Entry {
    DataPoint point;
    Matrix contribution;
    Vector target;
  };
  static Entry make_entry(const DataPoint& p, const Plant& plant);
  void replace(std::size_t slot, Entry entry);
  void append(Entry entry);

 private:
  void refresh();

  std::size_t capacity_;
  int param_dim_;
  std::vector<Entry> entries_;
  Matrix gram_;
  Vector target_;
  double sigma_min_ = 0.0;
};

struct InsertResult {
  bool inserted = false;
  std::optional<std::size_t> slot;  // replaced slot when the stack was full
};

/// Appends when not full. When full, tries every single-slot replacement
/// and commits the one with the largest sigma_min of the gram, provided it
/// beats the current sigma_min by more than tolerance::kInsertImprovement.
/// Ties go to the lowest slot.
InsertResult try_insert(HistoryStack& stack, const DataPoint& p,
                        const Plant& plant);

bool stack_is_full_rank(const HistoryStack& stack);

struct PurgeSettings {
  std::size_t capacity = 20;  // M
  double xi = 0.9;            // threshold fraction in (0, 1]
  double dwell = 1.0;         // minimum time between purges, s
  double record_period = 0.05;
};

void validate(const PurgeSettings& settings);

/// Active stack, auxiliary stack and the purge bookkeeping.
struct PurgeState {
  PurgeState(HistoryStack active_stack, const PurgeSettings& settings);

  HistoryStack active;     // H
  HistoryStack auxiliary;  // G
  double last_update = 0.0;  // delta: time of the last H <- G
  double eta = 0.0;          // highest sigma_min of H seen at a purge
  double xi;
  double dwell;
  int switch_index = 1;  // s = 1 + completed purges
  std::vector<double> switch_times;
};

/// Replaces H by G and empties G when G is full and full rank, its sigma_min
/// reaches xi * eta, and at least `dwell` seconds have passed since the last
/// update. Returns true on a switch.
bool maybe_purge(PurgeState& ps, double t);

/// M states drawn uniformly from the plant's operating box with u = 0 and
/// x_hat_dot = f1(x) + Y(x) theta_hat0, redrawn until the gram is full rank.
/// Throws InitializationError after 100 rounds.
HistoryStack initialize_active_stack(const Plant& plant,
                                     const Vector& theta_hat0,
                                     std::size_t capacity, std::uint64_t seed);

/// True iff t - last_record_time >= period (within tolerance::kGate).
bool sampling_gate(double last_record_time, double t, double period);

/// One row per data point: t_j, x_j..., u_j..., x_hat_dot_j...
void write_stack_csv(std::ostream& os, const HistoryStack& stack);

}  // namespace clde

#endif  // CLDE_HISTORY_STACK_HPP_
