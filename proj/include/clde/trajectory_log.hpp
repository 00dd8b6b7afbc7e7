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

#ifndef CLDE_TRAJECTORY_LOG_HPP_
#define CLDE_TRAJECTORY_LOG_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "clde/numerics.hpp"

namespace clde {

/// One sample of a closed-loop run on the log grid.
struct LogRow {
  double t = 0.0;
  int s = 1;  // switch index in force
  Vector x;          // true state
  Vector x_meas;     // noisy measurement
  Vector x_hat;      // observer state estimate
  Vector x_dot;      // true state derivative
  Vector x_hat_dot;  // observer derivative estimate
  Vector u;
  Vector theta_hat;
  Vector x_tilde;    // x - x_hat (ground truth)
  double sigma_min_active = 0.0;
};

/// Properties of an active history stack, recorded at t = 0 for the initial
/// stack and at every purge for the stack that took over.
struct StackSummary {
  double t = 0.0;
  int s = 1;
  double sigma_min = 0.0;
  double lambda_min = 0.0;  // of the gram
  double norm_A = 0.0;      // spectral norm of the gram
  double norm_Q = 0.0;      // ||sum_j Y_j^T (x_dot_j - x_hat_dot_j)||
  std::size_t aux_size = 0;  // auxiliary-stack size when the switch fired
};

struct LyapunovSample {
  double t = 0.0;
  int s = 1;
  double V = 0.0;
  double V_r = 0.0;
  double norm_theta_tilde = 0.0;
  double norm_x_tilde = 0.0;
  double norm_r = 0.0;
  double norm_x_tilde_dot = 0.0;
};

struct TrajectoryLog {
  std::vector<LogRow> rows;
  std::vector<StackSummary> stacks;  // stacks[0] is the initial stack
  std::vector<double> switch_times;
  std::vector<LyapunovSample> lyapunov;
  Vector theta_true;
  Matrix gamma;
  double alpha1 = 0.0;
  double gamma1 = 1.0;
  std::string method;
};

}  // namespace clde

#endif  // CLDE_TRAJECTORY_LOG_HPP_
