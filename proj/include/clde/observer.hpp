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

#ifndef CLDE_OBSERVER_HPP_
#define CLDE_OBSERVER_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "clde/numerics.hpp"
#include "clde/plant.hpp"

namespace clde {

struct ObserverState {
  Vector x_hat;  // state estimate
  Vector mu;     // auxiliary integral signal
};

struct ObserverGains {
  double k1 = 20.0;
  double alpha1 = 20.0;
  double gamma1 = 1.0;  // in [0, 1]; weight of the parameter feedforward
};

void validate(const ObserverGains& gains);

struct ObserverRates {
  Vector x_hat_dot;  // also the state-derivative estimate
  Vector mu_dot;
};

/// Adaptive state-derivative observer:
///   x_hat_dot = gamma1 Y(x) theta_hat + f1(x) + g(x) u + (k1 + alpha1) x_tilde + mu
///   mu_dot    = (k1 alpha1 + 1) x_tilde,        x_tilde = x_meas - x_hat
/// with the known terms evaluated at the measurement.
ObserverRates observer_rates(const ObserverState& state, const Vector& x_meas,
                             const Vector& u, const Vector& theta_hat,
                             const ObserverGains& gains, const Plant& plant);

/// Same law with the plant terms at x_meas already evaluated. Writes into
/// preallocated outputs.
void observer_rates(const ObserverState& state, const Vector& x_meas,
                    const Vector& u, const Vector& theta_hat,
                    const ObserverGains& gains, const PlantTerms& terms_at_meas,
                    Vector& x_hat_dot, Vector& mu_dot);

/// r = x_tilde_dot + alpha1 x_tilde.
Vector filtered_error(const Vector& x_tilde, const Vector& x_tilde_dot,
                      double alpha1);

/// Numerical-differentiation baseline: raw measurements pass through a
/// moving average of width `smoothing`, the smoothed values are kept in a
/// ring of `window` samples, and derivatives come from a least-squares
/// polynomial of degree `order` over the ring.
class NumericalDifferentiator {
 public:
  NumericalDifferentiator(std::size_t window, int order, std::size_t smoothing);

  /// Appends the moving average of the last `smoothing` raw measurements
  /// (including this one). Throws ContractError unless t increases.
  void push(double t, const Vector& x_meas);

  bool ready() const { return size_ == window_; }
  std::size_t size() const { return size_; }
  std::size_t window() const { return window_; }
  int order() const { return order_; }
  std::size_t smoothing() const { return smoothing_; }

  /// Buffered (time, smoothed value) pairs, oldest first.
  std::vector<double> times() const;
  std::vector<Vector> values() const;
  /// Raw measurement that entered the buffer at position i (oldest first).
  const Vector& raw(std::size_t i) const;

  /// Time of the middle buffered sample; undefined when not ready.
  double midpoint_time() const;
  std::size_t midpoint_index() const { return window_ / 2; }

  /// Derivative of the polynomial fit at t_eval, or nullopt if underfull.
  std::optional<Vector> estimate(double t_eval) const;
  std::optional<Vector> estimate_at_midpoint() const;

 private:
  std::size_t slot(std::size_t i) const { return (head_ + i) % window_; }

  std::size_t window_;
  int order_;
  std::size_t smoothing_;
  // Ring of smoothed samples; head_ is the oldest.
  std::vector<double> time_;
  std::vector<Vector> smoothed_;
  std::vector<Vector> raw_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
  // Last `smoothing` raw measurements for the moving average.
  std::vector<Vector> recent_;
  std::size_t recent_next_ = 0;
  std::size_t recent_count_ = 0;
};

}  // namespace clde

#endif  // CLDE_OBSERVER_HPP_
