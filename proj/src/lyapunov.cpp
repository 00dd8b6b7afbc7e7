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

#include "clde/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

namespace clde {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Index of the sample whose time is closest to t (earlier sample on ties).
std::size_t nearest_sample(const std::vector<LyapunovSample>& samples,
                           double t) {
  const auto it = std::lower_bound(
      samples.begin(), samples.end(), t,
      [](const LyapunovSample& s, double value) { return s.t < value; });
  if (it == samples.begin()) return 0;
  if (it == samples.end()) return samples.size() - 1;
  const auto prev = it - 1;
  return (t - prev->t <= it->t - t)
             ? static_cast<std::size_t>(prev - samples.begin())
             : static_cast<std::size_t>(it - samples.begin());
}

}  // namespace

double compute_V_with_inverse(const Vector& r, const Vector& x_tilde,
                              const Vector& theta_tilde,
                              const Matrix& gamma_inverse) {
  return 0.5 * r.squaredNorm() + 0.5 * x_tilde.squaredNorm() +
         0.5 * theta_tilde.dot(gamma_inverse * theta_tilde);
}

double compute_V(const Vector& r, const Vector& x_tilde,
                 const Vector& theta_tilde, const Matrix& gamma) {
  if (gamma.rows() != theta_tilde.size() || gamma.cols() != theta_tilde.size()) {
    throw ContractError("compute_V: Gamma shape");
  }
  Eigen::LLT<Matrix> llt(gamma);
  if (llt.info() != Eigen::Success) {
    throw ContractError("compute_V: Gamma is not positive definite");
  }
  return 0.5 * r.squaredNorm() + 0.5 * x_tilde.squaredNorm() +
         0.5 * theta_tilde.dot(llt.solve(theta_tilde));
}

double compute_Vr(const Vector& r, const Vector& x_tilde) {
  return r.squaredNorm() + x_tilde.squaredNorm();
}

QuadraticBounds quadratic_bounds(const Matrix& gamma) {
  const Vector eig = symmetric_eigenvalues(gamma);
  if (!(eig(0) > 0.0)) {
    throw ContractError("quadratic_bounds: Gamma is not positive definite");
  }
  // Eigenvalues of Gamma^-1 are the reciprocals.
  const double inv_min = 1.0 / eig(eig.size() - 1);
  const double inv_max = 1.0 / eig(0);
  return {0.5 * std::min(1.0, inv_min), 0.5 * std::max(1.0, inv_max)};
}

double decay_rate(double k, double a_lower, double k1, double alpha1) {
  return std::min({k * a_lower / 4.0, alpha1 / 3.0, k1 / 8.0});
}

double decay_rate_r(double k1, double alpha1) {
  return std::min(k1 / 2.0, alpha1);
}

double iota(double k, double a_lower, double Y_bar, double Gamma_bar,
            double k1, double norm_Q) {
  if (!(a_lower > 0.0) || !(k1 > 0.0)) {
    throw ContractError("iota: a_lower and k1 must be positive");
  }
  const double beta2 =
      k / (2.0 * a_lower) + k * k * Y_bar * Y_bar * Gamma_bar * Gamma_bar / k1;
  return beta2 * norm_Q * norm_Q;
}

std::vector<SwitchViolation> check_switch_decrease(
    const std::vector<LyapunovSample>& samples,
    const std::vector<double>& switch_times, double slack) {
  std::vector<SwitchViolation> out;
  if (samples.empty()) return out;
  for (std::size_t i = 1; i < switch_times.size(); ++i) {
    const LyapunovSample& a = samples[nearest_sample(samples, switch_times[i - 1])];
    const LyapunovSample& b = samples[nearest_sample(samples, switch_times[i])];
    if (b.V > (1.0 + slack) * a.V) {
      out.push_back({switch_times[i - 1], switch_times[i], a.V, b.V});
    }
  }
  return out;
}

std::vector<EnvelopeViolation> check_interswitch_envelope(
    const std::vector<LyapunovSample>& samples,
    const std::vector<double>& switch_times, double v, double v_bar,
    const std::vector<double>& iota_by_s, double slack) {
  if (!(v > 0.0) || !(v_bar > 0.0)) {
    throw ContractError("check_interswitch_envelope: rates must be positive");
  }
  if (iota_by_s.size() < switch_times.size() + 1) {
    throw ContractError("check_interswitch_envelope: one iota per interval");
  }
  for (double value : iota_by_s) {
    if (!(value > 0.0)) {
      throw ContractError("check_interswitch_envelope: iota must be positive");
    }
  }
  std::vector<EnvelopeViolation> out;
  const double rate = v / v_bar;
  std::size_t i = 0;
  for (std::size_t interval = 0; interval <= switch_times.size(); ++interval) {
    const double end = interval < switch_times.size()
                           ? switch_times[interval]
                           : std::numeric_limits<double>::infinity();
    if (i >= samples.size() || samples[i].t >= end) continue;
    const double floor = (v_bar / v) * iota_by_s[interval];
    const double t0 = samples[i].t;
    const double v0 = samples[i].V;
    for (; i < samples.size() && samples[i].t < end; ++i) {
      // (v0 - floor) e + floor, rearranged so a floor far above v0 does not
      // cancel v0 away.
      const double decay = -rate * (samples[i].t - t0);
      const double envelope = v0 * std::exp(decay) - floor * std::expm1(decay);
      if (samples[i].V > (1.0 + slack) * envelope) {
        out.push_back({static_cast<int>(interval) + 1, samples[i].t,
                       samples[i].V, envelope});
      }
    }
  }
  return out;
}

std::vector<LyapunovSample> observer_chain_counterexamples(
    const std::vector<LyapunovSample>& samples, double alpha1) {
  std::vector<LyapunovSample> out;
  for (const LyapunovSample& s : samples) {
    if (s.norm_x_tilde_dot * s.norm_x_tilde_dot > (1.0 + alpha1) * s.V_r) {
      out.push_back(s);
    }
  }
  return out;
}

std::vector<double> iota_sequence(const TrajectoryLog& log,
                                  const BoundConstants& bounds, double k,
                                  double k1) {
  std::vector<double> out;
  out.reserve(log.stacks.size());
  for (const StackSummary& s : log.stacks) {
    out.push_back(iota(k, bounds.a_lower, bounds.Y_bar, bounds.Gamma_bar, k1,
                       s.norm_Q));
  }
  return out;
}

DwellTimeInputs dwell_time_inputs(const TrajectoryLog& log,
                                  const BoundConstants& bounds, double k,
                                  double k1, double alpha1) {
  if (log.switch_times.size() < 2 || log.stacks.size() < 3) {
    throw ContractError("dwell time needs a log with at least two switches");
  }
  constexpr double kStrict = 1.01;
  const QuadraticBounds qb = quadratic_bounds(log.gamma);
  DwellTimeInputs in;
  in.iota = iota_sequence(log, bounds, k, k1);
  in.v = decay_rate(k, bounds.a_lower, k1, alpha1);
  in.v_bar = qb.v_bar;
  in.v_r = decay_rate_r(k1, alpha1);

  double v_max = 0.0;
  double vr_max = 0.0;
  for (const LyapunovSample& s : log.lyapunov) {
    if (s.s != 1) continue;
    v_max = std::max(v_max, s.V);
    vr_max = std::max(vr_max, s.V_r);
  }
  in.V1_bar = kStrict * std::max(v_max, in.v_bar / in.v * in.iota.front());
  const double theta1 = std::sqrt(qb.v_bar / qb.v_lower) *
                        std::max(std::sqrt(in.V1_bar), std::sqrt(in.iota.front()));
  const double q1 = log.stacks.front().norm_Q;
  const double root = theta1 * bounds.F_bar +
                      k * bounds.Y_bar * bounds.Gamma_bar *
                          (theta1 * bounds.A_bar + q1);
  in.iota_r1 = root * root / k1;
  in.V_r1_bar = kStrict * std::max(vr_max, in.iota_r1 / in.v_r);
  return in;
}

void write_csv(std::ostream& os, const std::vector<SwitchViolation>& v) {
  os << "t_previous,t_next,V_previous,V_next\n";
  for (const SwitchViolation& e : v) {
    os << num(e.t_previous) << ',' << num(e.t_next) << ','
       << num(e.V_previous) << ',' << num(e.V_next) << '\n';
  }
}

void write_csv(std::ostream& os, const std::vector<EnvelopeViolation>& v) {
  os << "s,t,V,envelope\n";
  for (const EnvelopeViolation& e : v) {
    os << e.s << ',' << num(e.t) << ',' << num(e.V) << ',' << num(e.envelope)
       << '\n';
  }
}

std::string summarize(const std::vector<SwitchViolation>& switch_violations,
                      const std::vector<EnvelopeViolation>& envelope_violations) {
  std::ostringstream os;
  os << "switch-decrease violations: " << switch_violations.size() << '\n';
  constexpr std::size_t kShown = 10;
  for (std::size_t i = 0; i < std::min(kShown, switch_violations.size()); ++i) {
    const SwitchViolation& e = switch_violations[i];
    os << "  V(" << num(e.t_next) << ")=" << num(e.V_next) << " vs V("
       << num(e.t_previous) << ")=" << num(e.V_previous) << '\n';
  }
  os << "envelope violations: " << envelope_violations.size() << '\n';
  for (std::size_t i = 0; i < std::min(kShown, envelope_violations.size());
       ++i) {
    const EnvelopeViolation& e = envelope_violations[i];
    os << "  s=" << e.s << " t=" << num(e.t) << " V=" << num(e.V)
       << " envelope=" << num(e.envelope) << '\n';
  }
  return os.str();
}

}  // namespace clde
