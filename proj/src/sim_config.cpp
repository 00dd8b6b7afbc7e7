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

#include "clde/sim_config.hpp"

#include <cmath>

namespace clde {

std::string to_string(Method method) {
  switch (method) {
    case Method::kDynamicObserver:
      return "dynamic-observer";
    case Method::kNumericalDifferentiation:
      return "numerical-differentiation";
  }
  return "unknown";
}

Method parse_method(const std::string& name) {
  if (name == "dynamic-observer") return Method::kDynamicObserver;
  if (name == "numerical-differentiation") {
    return Method::kNumericalDifferentiation;
  }
  throw ContractError("unknown method '" + name +
                      "' (expected dynamic-observer or "
                      "numerical-differentiation)");
}

SimConfig::SimConfig() {
  controller.amplitudes = {2.0, 2.0};
  observer.k1 = 2.0;
  observer.alpha1 = 2.0;
  estimator.gamma = Vector((Vector(4) << 0.044, 0.000266, 0.62, 0.0042)
                               .finished())
                        .asDiagonal();
}

void validate(const SimConfig& cfg) {
  if (!(cfg.dt > 0.0)) throw ContractError("sim.dt must be positive");
  if (!(cfg.duration > cfg.dt)) {
    throw ContractError("sim.duration must exceed sim.dt");
  }
  if (!(cfg.noise_variance >= 0.0)) {
    throw ContractError("sim.noise_variance must be >= 0");
  }
  if (!(cfg.log_period >= cfg.dt)) {
    throw ContractError("sim.log_period must be >= sim.dt");
  }
  if (!(cfg.steady_state_window > 0.0) ||
      cfg.steady_state_window > cfg.duration) {
    throw ContractError("sim.steady_state_window must lie in (0, duration]");
  }
  if (!(cfg.purge.record_period >= cfg.dt)) {
    throw ContractError("purge.record_period must be >= sim.dt");
  }
  if (cfg.x0.size() != 4 || !cfg.x0.allFinite()) {
    throw ContractError("sim.x0 must hold 4 finite values");
  }
  if (cfg.theta_hat0.size() != 4 || !cfg.theta_hat0.allFinite()) {
    throw ContractError("estimator.theta_hat0 must hold 4 finite values");
  }
  if (cfg.controller_theta.size() != 0 && cfg.controller_theta.size() != 4) {
    throw ContractError("controller.theta must hold 4 values when given");
  }
  if (cfg.estimator.gamma.rows() != 4) {
    throw ContractError("estimator.gamma must be 4x4");
  }
  validate(cfg.controller);
  validate(cfg.observer);
  validate(cfg.estimator);
  validate(cfg.purge);
  if (cfg.baseline.order < 0 ||
      cfg.baseline.window < static_cast<std::size_t>(cfg.baseline.order) + 1) {
    throw ContractError("baseline.window must be >= baseline.order + 1");
  }
  if (cfg.baseline.smoothing == 0) {
    throw ContractError("baseline.smoothing must be >= 1");
  }
  if (cfg.sweep.trials < 1) throw ContractError("sweep.trials must be >= 1");
  if (cfg.sweep.threads < 1) throw ContractError("sweep.threads must be >= 1");
  if (cfg.sweep.k.empty() || cfg.sweep.xi.empty() ||
      cfg.sweep.windows.empty() || cfg.sweep.orders.empty()) {
    throw ContractError("sweep lists must be nonempty");
  }
  for (double k : cfg.sweep.k) {
    if (!(k > 0.0)) throw ContractError("sweep.k values must be positive");
  }
  for (double xi : cfg.sweep.xi) {
    if (!(xi > 0.0 && xi <= 1.0)) {
      throw ContractError("sweep.xi values must lie in (0, 1]");
    }
  }
  for (double v : cfg.sweep.variances) {
    if (!(v >= 0.0)) throw ContractError("sweep.variances must be >= 0");
  }
  for (std::size_t w : cfg.sweep.windows) {
    for (int d : cfg.sweep.orders) {
      if (d < 0 || w < static_cast<std::size_t>(d) + 1) {
        throw ContractError("sweep windows must exceed every sweep order");
      }
    }
  }
}

}  // namespace clde
