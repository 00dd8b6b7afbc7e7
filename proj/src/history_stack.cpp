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

#include "clde/history_stack.hpp"

#include <cstdio>
#include <ostream>
#include <random>
#include <string>
#include <utility>

namespace clde {

HistoryStack::HistoryStack(std::size_t capacity, int param_dim)
    : capacity_(capacity),
      param_dim_(param_dim),
      gram_(Matrix::Zero(param_dim, param_dim)),
      target_(Vector::Zero(param_dim)) {
  if (capacity == 0 || param_dim <= 0) {
    throw ContractError("HistoryStack: capacity and param_dim must be positive");
  }
  entries_.reserve(capacity);
}

const DataPoint& HistoryStack::point(std::size_t slot) const {
  return entries_.at(slot).point;
}

const Matrix& HistoryStack::contribution(std::size_t slot) const {
  return entries_.at(slot).contribution;
}

std::vector<DataPoint> HistoryStack::points() const {
  std::vector<DataPoint> out;
  out.reserve(entries_.size());
  for (const Entry& e : entries_) out.push_back(e.point);
  return out;
}

HistoryStack::Entry HistoryStack::make_entry(const DataPoint& p,
                                             const Plant& plant) {
  if (p.x.size() != plant.state_dim() || p.u.size() != plant.input_dim() ||
      p.x_hat_dot.size() != plant.state_dim()) {
    throw ContractError("HistoryStack: data point shape mismatch");
  }
  const PlantTerms terms = plant.terms(p.x);
  Entry e;
  e.point = p;
  e.contribution = terms.regressor.transpose() * terms.regressor;
  // Exact symmetry keeps the gram acceptable to the symmetric solvers.
  e.contribution = 0.5 * (e.contribution + e.contribution.transpose()).eval();
  e.target = terms.regressor.transpose() *
             (p.x_hat_dot - terms.drift - terms.input_matrix * p.u);
  return e;
}

void HistoryStack::append(Entry entry) {
  if (full()) throw ContractError("HistoryStack: append to a full stack");
  if (entry.contribution.rows() != param_dim_) {
    throw ContractError("HistoryStack: parameter dimension mismatch");
  }
  entries_.push_back(std::move(entry));
  refresh();
}

void HistoryStack::replace(std::size_t slot, Entry entry) {
  if (slot >= entries_.size()) throw ContractError("HistoryStack: bad slot");
  entries_[slot] = std::move(entry);
  refresh();
}

void HistoryStack::append(const DataPoint& p, const Plant& plant) {
  append(make_entry(p, plant));
}

void HistoryStack::replace(std::size_t slot, const DataPoint& p,
                           const Plant& plant) {
  replace(slot, make_entry(p, plant));
}

void HistoryStack::clear() {
  entries_.clear();
  refresh();
}

void HistoryStack::refresh() {
  gram_.setZero(param_dim_, param_dim_);
  target_.setZero(param_dim_);
  for (const Entry& e : entries_) {
    gram_ += e.contribution;
    target_ += e.target;
  }
  sigma_min_ = entries_.empty() ? 0.0 : clde::min_singular_value(gram_);
}

Matrix HistoryStack::recompute_gram(const Plant& plant) const {
  Matrix sum = Matrix::Zero(param_dim_, param_dim_);
  for (const Entry& e : entries_) {
    const Matrix y = plant.regressor(e.point.x);
    sum += y.transpose() * y;
  }
  return sum;
}

InsertResult try_insert(HistoryStack& stack, const DataPoint& p,
                        const Plant& plant) {
  if (!p.x.allFinite() || !p.u.allFinite() || !p.x_hat_dot.allFinite()) {
    throw ContractError("try_insert: non-finite data point");
  }
  HistoryStack::Entry entry = HistoryStack::make_entry(p, plant);
  if (!stack.full()) {
    stack.append(std::move(entry));
    return {true, std::nullopt};
  }
  const double current = stack.min_singular_value();
  double best = current;
  std::optional<std::size_t> best_slot;
  Matrix trial(stack.param_dim(), stack.param_dim());
  for (std::size_t slot = 0; slot < stack.size(); ++slot) {
    trial = stack.gram() - stack.contribution(slot) + entry.contribution;
    const double sigma = min_singular_value(trial);
    if (!best_slot || sigma > best) {
      if (sigma > current + tolerance::kInsertImprovement) {
        best = sigma;
        best_slot = slot;
      }
    }
  }
  if (!best_slot) return {false, std::nullopt};
  stack.replace(*best_slot, std::move(entry));
  return {true, best_slot};
}

bool stack_is_full_rank(const HistoryStack& stack) {
  return !stack.empty() && stack.min_singular_value() > tolerance::kRank;
}

void validate(const PurgeSettings& s) {
  if (s.capacity == 0) throw ContractError("history stack capacity must be >= 1");
  if (!(s.xi > 0.0 && s.xi <= 1.0)) {
    throw ContractError("purge threshold xi must lie in (0, 1]");
  }
  if (!(s.dwell >= 0.0)) throw ContractError("dwell time must be >= 0");
  if (!(s.record_period > 0.0)) {
    throw ContractError("record period must be positive");
  }
}

PurgeState::PurgeState(HistoryStack active_stack, const PurgeSettings& settings)
    : active(std::move(active_stack)),
      auxiliary(settings.capacity, active.param_dim()),
      xi(settings.xi),
      dwell(settings.dwell) {
  validate(settings);
}

bool maybe_purge(PurgeState& ps, double t) {
  if (!ps.auxiliary.full() || !stack_is_full_rank(ps.auxiliary)) return false;
  if (ps.auxiliary.min_singular_value() < ps.xi * ps.eta) return false;
  if (t - ps.last_update < ps.dwell) return false;
  ps.active = ps.auxiliary;
  ps.auxiliary.clear();
  ps.last_update = t;
  ++ps.switch_index;
  ps.switch_times.push_back(t);
  if (ps.eta < ps.active.min_singular_value()) {
    ps.eta = ps.active.min_singular_value();
  }
  return true;
}

HistoryStack initialize_active_stack(const Plant& plant,
                                     const Vector& theta_hat0,
                                     std::size_t capacity, std::uint64_t seed) {
  if (theta_hat0.size() != plant.param_dim()) {
    throw ContractError("initialize_active_stack: theta_hat0 size");
  }
  constexpr int kMaxRounds = 100;
  std::mt19937_64 rng(seed);
  const StateBox box = plant.operating_box();
  const Vector u = Vector::Zero(plant.input_dim());
  for (int round = 0; round < kMaxRounds; ++round) {
    HistoryStack stack(capacity, plant.param_dim());
    for (std::size_t j = 0; j < capacity; ++j) {
      Vector x(plant.state_dim());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        std::uniform_real_distribution<double> dist(box.lower(i), box.upper(i));
        x(i) = dist(rng);
      }
      const PlantTerms terms = plant.terms(x);
      DataPoint p{terms.drift + terms.regressor * theta_hat0, x, u, 0.0};
      stack.append(p, plant);
    }
    if (stack_is_full_rank(stack)) return stack;
  }
  throw InitializationError(
      "could not draw a full-rank history stack in 100 rounds");
}

bool sampling_gate(double last_record_time, double t, double period) {
  if (!(period > 0.0)) throw ContractError("sampling_gate: period must be > 0");
  return t - last_record_time >= period * (1.0 - tolerance::kGate);
}

void write_stack_csv(std::ostream& os, const HistoryStack& stack) {
  const auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  if (stack.empty()) {
    os << "t_j\n";
    return;
  }
  const DataPoint& first = stack.point(0);
  os << "t_j";
  for (Eigen::Index i = 0; i < first.x.size(); ++i) os << ",x_" << i + 1;
  for (Eigen::Index i = 0; i < first.u.size(); ++i) os << ",u_" << i + 1;
  for (Eigen::Index i = 0; i < first.x_hat_dot.size(); ++i) {
    os << ",x_hat_dot_" << i + 1;
  }
  os << '\n';
  for (const DataPoint& p : stack.points()) {
    os << fmt(p.t);
    for (double v : p.x) os << ',' << fmt(v);
    for (double v : p.u) os << ',' << fmt(v);
    for (double v : p.x_hat_dot) os << ',' << fmt(v);
    os << '\n';
  }
}

}  // namespace clde
