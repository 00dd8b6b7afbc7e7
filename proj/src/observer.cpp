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

#include "clde/observer.hpp"

#include <span>

namespace clde {

void validate(const ObserverGains& gains) {
  if (!(gains.k1 > 0.0) || !(gains.alpha1 > 0.0)) {
    throw ContractError("observer gains k1 and alpha1 must be positive");
  }
  if (!(gains.gamma1 >= 0.0 && gains.gamma1 <= 1.0)) {
    throw ContractError("observer gain gamma1 must lie in [0, 1]");
  }
}

void observer_rates(const ObserverState& state, const Vector& x_meas,
                    const Vector& u, const Vector& theta_hat,
                    const ObserverGains& gains, const PlantTerms& terms,
                    Vector& x_hat_dot, Vector& mu_dot) {
  const Eigen::Index n = terms.drift.size();
  if (state.x_hat.size() != n || state.mu.size() != n || x_meas.size() != n ||
      u.size() != terms.input_matrix.cols() ||
      theta_hat.size() != terms.regressor.cols()) {
    throw ContractError("observer_rates: shape mismatch");
  }
  // x_hat_dot temporarily holds x_tilde.
  x_hat_dot = x_meas - state.x_hat;
  mu_dot.noalias() = (gains.k1 * gains.alpha1 + 1.0) * x_hat_dot;
  x_hat_dot *= gains.k1 + gains.alpha1;
  x_hat_dot += state.mu + terms.drift;
  x_hat_dot.noalias() += terms.input_matrix * u;
  x_hat_dot.noalias() += gains.gamma1 * (terms.regressor * theta_hat);
}

ObserverRates observer_rates(const ObserverState& state, const Vector& x_meas,
                             const Vector& u, const Vector& theta_hat,
                             const ObserverGains& gains, const Plant& plant) {
  if (x_meas.size() != plant.state_dim()) {
    throw ContractError("observer_rates: measurement size");
  }
  ObserverRates rates;
  observer_rates(state, x_meas, u, theta_hat, gains, plant.terms(x_meas),
                 rates.x_hat_dot, rates.mu_dot);
  return rates;
}

Vector filtered_error(const Vector& x_tilde, const Vector& x_tilde_dot,
                      double alpha1) {
  if (x_tilde.size() != x_tilde_dot.size()) {
    throw ContractError("filtered_error: shape mismatch");
  }
  return x_tilde_dot + alpha1 * x_tilde;
}

NumericalDifferentiator::NumericalDifferentiator(std::size_t window, int order,
                                                 std::size_t smoothing)
    : window_(window),
      order_(order),
      smoothing_(smoothing),
      time_(window),
      smoothed_(window),
      raw_(window),
      recent_(smoothing) {
  if (order < 0 || window < static_cast<std::size_t>(order) + 1) {
    throw ContractError("NumericalDifferentiator: window must be >= order+1");
  }
  if (smoothing == 0) {
    throw ContractError("NumericalDifferentiator: smoothing width must be >= 1");
  }
}

void NumericalDifferentiator::push(double t, const Vector& x_meas) {
  if (size_ > 0 && !(t > time_[slot(size_ - 1)])) {
    throw ContractError("NumericalDifferentiator: time must increase");
  }
  recent_[recent_next_] = x_meas;
  recent_next_ = (recent_next_ + 1) % smoothing_;
  if (recent_count_ < smoothing_) ++recent_count_;
  const Vector smoothed = moving_average(
      std::span<const Vector>(recent_.data(), recent_count_));

  std::size_t target;
  if (size_ < window_) {
    target = slot(size_);
    ++size_;
  } else {
    target = head_;
    head_ = (head_ + 1) % window_;
  }
  time_[target] = t;
  smoothed_[target] = smoothed;
  raw_[target] = x_meas;
}

std::vector<double> NumericalDifferentiator::times() const {
  std::vector<double> out(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = time_[slot(i)];
  return out;
}

std::vector<Vector> NumericalDifferentiator::values() const {
  std::vector<Vector> out(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = smoothed_[slot(i)];
  return out;
}

const Vector& NumericalDifferentiator::raw(std::size_t i) const {
  if (i >= size_) throw ContractError("NumericalDifferentiator: index");
  return raw_[slot(i)];
}

double NumericalDifferentiator::midpoint_time() const {
  return time_[slot(midpoint_index())];
}

std::optional<Vector> NumericalDifferentiator::estimate(double t_eval) const {
  if (!ready()) return std::nullopt;
  const std::vector<double> t = times();
  const std::vector<Vector> v = values();
  return polyfit_derivative(t, v, order_, t_eval);
}

std::optional<Vector> NumericalDifferentiator::estimate_at_midpoint() const {
  if (!ready()) return std::nullopt;
  return estimate(midpoint_time());
}

}  // namespace clde
