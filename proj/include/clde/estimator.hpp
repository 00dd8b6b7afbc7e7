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

#ifndef CLDE_ESTIMATOR_HPP_
#define CLDE_ESTIMATOR_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "clde/history_stack.hpp"
#include "clde/numerics.hpp"
#include "clde/plant.hpp"
#include "clde/trajectory_log.hpp"

namespace clde {

struct EstimatorGains {
  double k = 1.0;
  Matrix gamma = Matrix::Identity(4, 4);
  double theta_bound = 20.0;  // divergence monitor only, no projection
};

/// Throws ContractError unless k >= 0, Gamma symmetric positive definite and
/// theta_bound > 0.
void validate(const EstimatorGains& gains);

/// Gram sum_j Y^T(x_j) Y(x_j) of a nonempty stack.
Matrix compute_A(const HistoryStack& stack);

/// sum_j Y^T(x_j) (x_dot_j - x_hat_dot_j), where x_dot_j is the true
/// derivative f1 + g u_j + Y theta at the recorded point.
Vector compute_Q(const HistoryStack& stack, const Vector& theta,
                 const Plant& plant);

/// sum_j Y^T(x_j) (x_hat_dot_j - f1(x_j) - g(x_j) u_j - Y(x_j) theta_hat),
/// which equals A theta_tilde - Q.
Vector cl_residual_sum(const HistoryStack& stack, const Vector& theta_hat,
                       const Plant& plant);

/// k Gamma cl_residual_sum + Gamma Y^T(x_meas) x_tilde.
Vector theta_hat_dot(const Vector& theta_hat, const Vector& x_tilde,
                     const Vector& x_meas, const HistoryStack& stack,
                     const EstimatorGains& gains, const Plant& plant);

/// Bounds along a trajectory used by the gain conditions and the dwell-time
/// analysis.
struct BoundConstants {
  double F_bar = 0.0;
  double F1_bar = 0.0;
  double x_bar = 0.0;
  double Y_bar = 0.0;
  double Gamma_bar = 0.0;
  double A_bar = 0.0;
  double a_lower = 0.0;
};

struct GainConditionReport {
  BoundConstants bounds;
  double k = 0.0, k1 = 0.0, alpha1 = 0.0;
  // a_lower > 3 Y^2/(k alpha1) + 4 F^2/(k k1) + 4 k Y^2 Gamma^2 A^2 / k1
  double lhs1 = 0.0;
  std::vector<double> terms1;  // the three right-hand terms
  double rhs1 = 0.0;
  bool pass1 = false;
  // k1 > 6 Y^4 Gamma^2 / alpha1
  double lhs2 = 0.0;
  double rhs2 = 0.0;
  bool pass2 = false;
  double margin1 = 0.0;  // lhs / rhs (infinite when rhs is 0)
  double margin2 = 0.0;
  /// Smallest (k1, alpha1) pair obtained by doubling both until the
  /// conditions hold; empty when doubling cannot succeed.
  std::optional<std::pair<double, double>> suggestion;

  bool pass() const { return pass1 && pass2; }
};

GainConditionReport check_gain_conditions(const BoundConstants& b, double k,
                                          double k1, double alpha1);

std::string to_text(const GainConditionReport& report);
void write_csv(std::ostream& os, const GainConditionReport& report);

struct DwellTimeInputs {
  std::vector<double> iota;  // iota_1 .. iota_s; s = iota.size()
  double V1_bar = 0.0;
  double v = 0.0;
  double v_bar = 0.0;
  double v_r = 0.0;
  double V_r1_bar = 0.0;
  double iota_r1 = 0.0;
};

/// Minimum dwell time
///   max( max_j v_bar/(v (s-j)) log(s iota_j/iota_s - s iota_{j+1}/iota_s),
///        v_bar/(v s) log(s v V1_bar/(v_bar iota_s) - s iota_1/iota_s),
///        1/v_r log(v_r V_r1_bar/iota_r1 - 1) ),
/// where a logarithm whose argument does not exceed 1 contributes 0.
double min_dwell_time(const DwellTimeInputs& in);

/// Derivative of the regressor along the flow,
///   F(x, u) = gamma1 sum_i dY/dx_i (f1 + Y theta + g u)_i,
/// with dY/dx_i by central differences.
Matrix regressor_flow_derivative(const Plant& plant, const Vector& x,
                                 const Vector& u, const Vector& theta,
                                 double gamma1);

/// Empirical suprema along a logged run: ||F||, ||f1 + Y theta + g u||,
/// ||x||, ||Y|| over the rows; Gamma_bar = ||Gamma||; a_lower and A_bar from
/// the recorded stack summaries (all zero when none are logged).
BoundConstants estimate_bound_constants(const TrajectoryLog& log,
                                        const Plant& plant);

}  // namespace clde

#endif  // CLDE_ESTIMATOR_HPP_
