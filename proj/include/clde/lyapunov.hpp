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

#ifndef CLDE_LYAPUNOV_HPP_
#define CLDE_LYAPUNOV_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "clde/estimator.hpp"
#include "clde/numerics.hpp"
#include "clde/trajectory_log.hpp"

namespace clde {

/// V = 1/2 r^T r + 1/2 x_tilde^T x_tilde + 1/2 theta_tilde^T Gamma^-1 theta_tilde.
/// Throws ContractError when Gamma is not positive definite.
double compute_V(const Vector& r, const Vector& x_tilde,
                 const Vector& theta_tilde, const Matrix& gamma);

/// Same as compute_V with a precomputed Gamma^-1.
double compute_V_with_inverse(const Vector& r, const Vector& x_tilde,
                              const Vector& theta_tilde,
                              const Matrix& gamma_inverse);

/// V_r = ||r||^2 + ||x_tilde||^2.
double compute_Vr(const Vector& r, const Vector& x_tilde);

/// Quadratic bounds v_lower ||Z||^2 <= V <= v_bar ||Z||^2 for
/// Z = (r, x_tilde, theta_tilde).
struct QuadraticBounds {
  double v_lower = 0.0;  // 1/2 min{1, lambda_min(Gamma^-1)}
  double v_bar = 0.0;    // 1/2 max{1, lambda_max(Gamma^-1)}
};
QuadraticBounds quadratic_bounds(const Matrix& gamma);

/// Decay rates of V and V_r between switches:
///   v = min{k a_lower / 4, alpha1 / 3, k1 / 8},  v_r = min{k1 / 2, alpha1}.
double decay_rate(double k, double a_lower, double k1, double alpha1);
double decay_rate_r(double k1, double alpha1);

/// iota_s = (k / (2 a_lower) + k^2 Y^2 Gamma^2 / k1) ||Q_s||^2.
double iota(double k, double a_lower, double Y_bar, double Gamma_bar,
            double k1, double norm_Q);

struct SwitchViolation {
  double t_previous = 0.0;
  double t_next = 0.0;
  double V_previous = 0.0;
  double V_next = 0.0;
};

/// For every pair of consecutive switch times, compares V at the nearest
/// samples and reports pairs where V_next > (1 + slack) V_previous.
std::vector<SwitchViolation> check_switch_decrease(
    const std::vector<LyapunovSample>& samples,
    const std::vector<double>& switch_times, double slack = 0.01);

struct EnvelopeViolation {
  int s = 0;
  double t = 0.0;
  double V = 0.0;
  double envelope = 0.0;
};

/// Splits the samples into switch intervals (before the first switch is
/// interval s = 1) and checks each sample against
///   (V_0 - (v_bar/v) iota_s) exp(-(v/v_bar)(tau - t_0)) + (v_bar/v) iota_s
/// seeded from the interval's first sample, with relative slack.
/// iota_by_s[i] is iota for interval s = i + 1.
std::vector<EnvelopeViolation> check_interswitch_envelope(
    const std::vector<LyapunovSample>& samples,
    const std::vector<double>& switch_times, double v, double v_bar,
    const std::vector<double>& iota_by_s, double slack = 0.05);

/// Samples where ||x_tilde_dot||^2 > (1 + alpha1) V_r.
std::vector<LyapunovSample> observer_chain_counterexamples(
    const std::vector<LyapunovSample>& samples, double alpha1);

/// iota_s for every logged stack (index 0 is the initial stack), computed
/// from the recorded ||Q_s|| with the given bounds.
std::vector<double> iota_sequence(const TrajectoryLog& log,
                                  const BoundConstants& bounds, double k,
                                  double k1);

/// Dwell-time inputs estimated from a logged run: iota from the recorded
/// stacks, V1_bar and V_r1_bar from the largest V and V_r sampled before the
/// first switch (raised to the sufficient levels (v_bar/v) iota_1 and
/// iota_r1/v_r when those are larger, then scaled by 1.01 to make the
/// inequalities strict), and
///   iota_r1 = (theta_1 F + k Y Gamma (theta_1 A + Q_1))^2 / k1,
///   theta_1 = sqrt(v_bar/v_lower) max{sqrt(V1_bar), sqrt(iota_1)}.
/// Throws ContractError when fewer than two switches were logged.
DwellTimeInputs dwell_time_inputs(const TrajectoryLog& log,
                                  const BoundConstants& bounds, double k,
                                  double k1, double alpha1);

void write_csv(std::ostream& os, const std::vector<SwitchViolation>& v);
void write_csv(std::ostream& os, const std::vector<EnvelopeViolation>& v);
std::string summarize(const std::vector<SwitchViolation>& switch_violations,
                      const std::vector<EnvelopeViolation>& envelope_violations);

}  // namespace clde

#endif  // CLDE_LYAPUNOV_HPP_
