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

// One full concurrent-learning step (observer rates, history-stack insert
// trial, parameter update law) at the default sizes, shared by the benchmark
// executable and the budget test.

#ifndef CLDE_TOOLS_CL_STEP_HPP_
#define CLDE_TOOLS_CL_STEP_HPP_

#include <cstddef>
#include <vector>

#include "clde/estimator.hpp"
#include "clde/history_stack.hpp"
#include "clde/observer.hpp"
#include "clde/plant.hpp"
#include "clde/sim.hpp"
#include "clde/sim_config.hpp"

namespace clde::bench {

// Per-step budget in nanoseconds, set from the first stable Release build on
// the reference container (see README). A step slower than twice this is a
// regression.
inline constexpr double kStepBudgetNs = 30000.0;
inline constexpr double kRegressionFactor = 2.0;

class ClStep {
 public:
  explicit ClStep(std::size_t capacity = 20)
      : arm_(cfg_.plant),
        active_(initialize_active_stack(arm_, cfg_.theta_hat0, capacity, 7)),
        auxiliary_(initialize_active_stack(arm_, cfg_.theta_hat0, capacity, 8)) {
    // Measured states along a short noisy excitation run.
    SimConfig run = cfg_;
    run.duration = 4.0;
    run.steady_state_window = 1.0;
    run.noise_variance = 0.005;
    for (const LogRow& row : run_experiment(run).rows) {
      states_.push_back(row.x_meas);
      times_.push_back(row.t);
    }
    obs_.x_hat = states_.front();
    obs_.mu = Vector::Zero(4);
    theta_hat_ = cfg_.theta_hat0;
  }

  void step() {
    const Vector& x = states_[index_];
    const double t = times_[index_];
    index_ = (index_ + 1) % states_.size();
    const Vector u = excitation_controller(t, x, cfg_.controller, arm_,
                                           cfg_.plant.theta_true);
    const ObserverRates rates =
        observer_rates(obs_, x, u, theta_hat_, cfg_.observer, arm_);
    try_insert(auxiliary_, DataPoint{rates.x_hat_dot, x, u, t}, arm_);
    const Vector rate = theta_hat_dot(theta_hat_, x - obs_.x_hat, x, active_,
                                      cfg_.estimator, arm_);
    obs_.x_hat += cfg_.dt * rates.x_hat_dot;
    obs_.mu += cfg_.dt * rates.mu_dot;
    theta_hat_ += cfg_.dt * rate;
  }

  const Vector& theta_hat() const { return theta_hat_; }

 private:
  SimConfig cfg_;
  TwoLinkArm arm_;
  HistoryStack active_;
  HistoryStack auxiliary_;
  std::vector<Vector> states_;
  std::vector<double> times_;
  std::size_t index_ = 0;
  ObserverState obs_;
  Vector theta_hat_;
};

}  // namespace clde::bench

#endif  // CLDE_TOOLS_CL_STEP_HPP_
