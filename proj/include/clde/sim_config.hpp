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

#ifndef CLDE_SIM_CONFIG_HPP_
#define CLDE_SIM_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "clde/estimator.hpp"
#include "clde/history_stack.hpp"
#include "clde/observer.hpp"
#include "clde/plant.hpp"

namespace clde {

enum class Method { kDynamicObserver, kNumericalDifferentiation };

std::string to_string(Method method);
/// Accepts "dynamic-observer" and "numerical-differentiation"; throws
/// ContractError otherwise.
Method parse_method(const std::string& name);

struct BaselineSettings {
  std::size_t window = 21;    // W samples
  int order = 3;              // d
  std::size_t smoothing = 5;  // moving-average width w
};

struct SweepSettings {
  std::vector<double> k{1.0, 5.0, 20.0};
  std::vector<std::size_t> windows{11, 21, 41};
  std::vector<int> orders{2, 3};
  std::vector<double> xi{0.5, 0.9, 1.0};
  std::vector<double> variances{0.005, 0.1};
  int trials = 5;
  int threads = 1;
};

struct SimConfig {
  /// Tuned defaults for the two-link benchmark: a wide reference for
  /// excitation, a diagonal gain that normalizes the regressor gram, and
  /// low observer gains.
  SimConfig();

  TwoLinkParams plant;
  ControllerConfig controller;
  /// Parameters used by the controller's friction compensation. Empty means
  /// the true parameters (exact computed torque).
  Vector controller_theta;
  ObserverGains observer;
  EstimatorGains estimator;
  PurgeSettings purge;
  BaselineSettings baseline;
  SweepSettings sweep;
  Method method = Method::kDynamicObserver;

  double dt = 1e-3;
  double duration = 120.0;
  double noise_variance = 0.0;
  std::uint64_t seed = 1;
  double log_period = 0.01;
  double steady_state_window = 30.0;
  Vector x0 = Vector::Zero(4);
  Vector theta_hat0 = Vector::Zero(4);
};

/// Throws ContractError on any out-of-range field.
void validate(const SimConfig& cfg);

}  // namespace clde

#endif  // CLDE_SIM_CONFIG_HPP_
