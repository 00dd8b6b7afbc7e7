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

#include "clde/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

namespace clde {

void validate(const EstimatorGains& gains) {
  if (!(gains.k >= 0.0) || !std::isfinite(gains.k)) {
    throw ContractError("estimator gain k must be nonnegative");
  }
  if (gains.gamma.rows() != gains.gamma.cols() || gains.gamma.rows() == 0) {
    throw ContractError("estimator gain Gamma must be square");
  }
  if (!gains.gamma.allFinite() || !is_symmetric(gains.gamma)) {
    throw ContractError("estimator gain Gamma must be symmetric");
  }
  if (!(min_eigenvalue_symmetric(gains.gamma) > 0.0)) {
    throw ContractError("estimator gain Gamma must be positive definite");
  }
  if (!(gains.theta_bound > 0.0)) {
    throw ContractError("theta_bound must be positive");
  }
}

Matrix compute_A(const HistoryStack& stack) {
  if (stack.empty()) throw ContractError("compute_A: empty history stack");
  return stack.gram();
}

Vector compute_Q(const HistoryStack& stack, const Vector& theta,
                 const Plant& plant) {
  if (theta.size() != plant.param_dim()) {
    throw ContractError("compute_Q: theta size");
  }
  Vector q = Vector::Zero(plant.param_dim());
  PlantTerms terms;
  for (std::size_t j = 0; j < stack.size(); ++j) {
    const DataPoint& p = stack.point(j);
    plant.evaluate(p.x, terms);
    const Vector x_dot =
        terms.drift + terms.input_matrix * p.u + terms.regressor * theta;
    q += terms.regressor.transpose() * (x_dot - p.x_hat_dot);
  }
  return q;
}

Vector cl_residual_sum(const HistoryStack& stack, const Vector& theta_hat,
                       const Plant& plant) {
  if (theta_hat.size() != plant.param_dim() ||
      stack.param_dim() != plant.param_dim()) {
    throw ContractError("cl_residual_sum: parameter dimension mismatch");
  }
  return stack.target() - stack.gram() * theta_hat;
}

Vector theta_hat_dot(const Vector& theta_hat, const Vector& x_tilde,
                     const Vector& x_meas, const HistoryStack& stack,
                     const EstimatorGains& gains, const Plant& plant) {
  if (x_tilde.size() != plant.state_dim() ||
      x_meas.size() != plant.state_dim() ||
      gains.gamma.rows() != plant.param_dim()) {
    throw ContractError("theta_hat_dot: shape mismatch");
  }
  const Vector cl = cl_residual_sum(stack, theta_hat, plant);
  const Matrix y = plant.regressor(x_meas);
  return gains.k * (gains.gamma * cl) +
         gains.gamma * (y.transpose() * x_tilde);
}

namespace {

struct Condition1 {
  double t1, t2, t3;
  double rhs() const { return t1 + t2 + t3; }
};

Condition1 condition1(const BoundConstants& b, double k, double k1,
                      double alpha1) {
  const double y2 = b.Y_bar * b.Y_bar;
  const double g2 = b.Gamma_bar * b.Gamma_bar;
  return {3.0 * y2 / (k * alpha1), 4.0 * b.F_bar * b.F_bar / (k * k1),
          4.0 * k * y2 * g2 * b.A_bar * b.A_bar / k1};
}

double condition2_rhs(const BoundConstants& b, double alpha1) {
  const double y2 = b.Y_bar * b.Y_bar;
  return 6.0 * y2 * y2 * b.Gamma_bar * b.Gamma_bar / alpha1;
}

bool passes(const BoundConstants& b, double k, double k1, double alpha1) {
  return b.a_lower > condition1(b, k, k1, alpha1).rhs() &&
         k1 > condition2_rhs(b, alpha1);
}

double ratio(double lhs, double rhs) {
  if (rhs == 0.0) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

GainConditionReport check_gain_conditions(const BoundConstants& b, double k,
                                          double k1, double alpha1) {
  if (!(k > 0.0) || !(k1 > 0.0) || !(alpha1 > 0.0)) {
    throw ContractError("check_gain_conditions: gains must be positive");
  }
  GainConditionReport r;
  r.bounds = b;
  r.k = k;
  r.k1 = k1;
  r.alpha1 = alpha1;
  const Condition1 c1 = condition1(b, k, k1, alpha1);
  r.lhs1 = b.a_lower;
  r.terms1 = {c1.t1, c1.t2, c1.t3};
  r.rhs1 = c1.rhs();
  r.pass1 = r.lhs1 > r.rhs1;
  r.lhs2 = k1;
  r.rhs2 = condition2_rhs(b, alpha1);
  r.pass2 = r.lhs2 > r.rhs2;
  r.margin1 = ratio(r.lhs1, r.rhs1);
  r.margin2 = ratio(r.lhs2, r.rhs2);

  if (b.a_lower > 0.0) {
    constexpr int kMaxDoublings = 200;
    double s_k1 = k1;
    double s_alpha1 = alpha1;
    for (int i = 0; i <= kMaxDoublings; ++i) {
      if (passes(b, k, s_k1, s_alpha1)) {
        r.suggestion = std::make_pair(s_k1, s_alpha1);
        break;
      }
      s_k1 *= 2.0;
      s_alpha1 *= 2.0;
    }
  }
  return r;
}

std::string to_text(const GainConditionReport& r) {
  std::ostringstream os;
  os << "gains: k=" << num(r.k) << " k1=" << num(r.k1)
     << " alpha1=" << num(r.alpha1) << '\n';
  os << "bounds: F=" << num(r.bounds.F_bar) << " F1=" << num(r.bounds.F1_bar)
     << " x=" << num(r.bounds.x_bar) << " Y=" << num(r.bounds.Y_bar)
     << " Gamma=" << num(r.bounds.Gamma_bar) << " A=" << num(r.bounds.A_bar)
     << " a_lower=" << num(r.bounds.a_lower) << '\n';
  os << "condition 1: " << num(r.lhs1) << " > " << num(r.terms1[0]) << " + "
     << num(r.terms1[1]) << " + " << num(r.terms1[2]) << " = " << num(r.rhs1)
     << "  " << (r.pass1 ? "PASS" : "FAIL") << " (margin " << num(r.margin1)
     << ")\n";
  os << "condition 2: " << num(r.lhs2) << " > " << num(r.rhs2) << "  "
     << (r.pass2 ? "PASS" : "FAIL") << " (margin " << num(r.margin2) << ")\n";
  if (r.suggestion) {
    os << "suggested k1=" << num(r.suggestion->first)
       << " alpha1=" << num(r.suggestion->second) << '\n';
  } else {
    os << "no (k1, alpha1) doubling satisfies the conditions\n";
  }
  return os.str();
}

void write_csv(std::ostream& os, const GainConditionReport& r) {
  os << "k,k1,alpha1,F_bar,F1_bar,x_bar,Y_bar,Gamma_bar,A_bar,a_lower,"
        "lhs1,term1a,term1b,term1c,rhs1,pass1,lhs2,rhs2,pass2,margin1,"
        "margin2,suggested_k1,suggested_alpha1\n";
  const BoundConstants& b = r.bounds;
  os << num(r.k) << ',' << num(r.k1) << ',' << num(r.alpha1) << ','
     << num(b.F_bar) << ',' << num(b.F1_bar) << ',' << num(b.x_bar) << ','
     << num(b.Y_bar) << ',' << num(b.Gamma_bar) << ',' << num(b.A_bar) << ','
     << num(b.a_lower) << ',' << num(r.lhs1) << ',' << num(r.terms1[0]) << ','
     << num(r.terms1[1]) << ',' << num(r.terms1[2]) << ',' << num(r.rhs1)
     << ',' << (r.pass1 ? 1 : 0) << ',' << num(r.lhs2) << ',' << num(r.rhs2)
     << ',' << (r.pass2 ? 1 : 0) << ',' << num(r.margin1) << ','
     << num(r.margin2) << ','
     << (r.suggestion ? num(r.suggestion->first) : std::string()) << ','
     << (r.suggestion ? num(r.suggestion->second) : std::string()) << '\n';
}

namespace {

double binding_log(double scale, double argument) {
  if (!(argument > 1.0)) return 0.0;
  return scale * std::log(argument);
}

}  // namespace

double min_dwell_time(const DwellTimeInputs& in) {
  if (!(in.v > 0.0) || !(in.v_r > 0.0)) {
    throw ContractError("min_dwell_time: rates v and v_r must be positive");
  }
  if (in.iota.size() < 2) {
    throw ContractError("min_dwell_time: need at least two switches");
  }
  if (!(in.v_bar > 0.0) || !(in.iota_r1 > 0.0)) {
    throw ContractError("min_dwell_time: v_bar and iota_r1 must be positive");
  }
  for (double iota : in.iota) {
    if (!(iota > 0.0)) throw ContractError("min_dwell_time: iota must be > 0");
  }
  const auto s = static_cast<double>(in.iota.size());
  const double iota_s = in.iota.back();
  double dwell = 0.0;
  for (std::size_t j = 1; j < in.iota.size(); ++j) {
    const double arg = s * in.iota[j - 1] / iota_s - s * in.iota[j] / iota_s;
    const double scale = in.v_bar / (in.v * (s - static_cast<double>(j)));
    dwell = std::max(dwell, binding_log(scale, arg));
  }
  const double arg1 = s * in.v * in.V1_bar / (in.v_bar * iota_s) -
                      s * in.iota.front() / iota_s;
  dwell = std::max(dwell, binding_log(in.v_bar / (in.v * s), arg1));
  const double arg_r = in.v_r * in.V_r1_bar / in.iota_r1 - 1.0;
  dwell = std::max(dwell, binding_log(1.0 / in.v_r, arg_r));
  return dwell;
}

Matrix regressor_flow_derivative(const Plant& plant, const Vector& x,
                                 const Vector& u, const Vector& theta,
                                 double gamma1) {
  const PlantTerms terms = plant.terms(x);
  const Vector flow =
      terms.drift + terms.regressor * theta + terms.input_matrix * u;
  const double h = tolerance::kFiniteDifferenceStep;
  Matrix f = Matrix::Zero(plant.state_dim(), plant.param_dim());
  Vector xp = x;
  Vector xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp(i) = x(i) + h;
    xm(i) = x(i) - h;
    f += ((plant.regressor(xp) - plant.regressor(xm)) / (2.0 * h)) * flow(i);
    xp(i) = x(i);
    xm(i) = x(i);
  }
  return gamma1 * f;
}

BoundConstants estimate_bound_constants(const TrajectoryLog& log,
                                        const Plant& plant) {
  if (log.rows.empty()) {
    throw ContractError("estimate_bound_constants: empty log");
  }
  BoundConstants b;
  for (const LogRow& row : log.rows) {
    const PlantTerms terms = plant.terms(row.x);
    const Vector flow = terms.drift + terms.regressor * log.theta_true +
                        terms.input_matrix * row.u;
    b.F1_bar = std::max(b.F1_bar, flow.norm());
    b.x_bar = std::max(b.x_bar, row.x.norm());
    b.Y_bar = std::max(b.Y_bar, spectral_norm(terms.regressor));
    const Matrix f = regressor_flow_derivative(plant, row.x, row.u,
                                               log.theta_true, log.gamma1);
    b.F_bar = std::max(b.F_bar, spectral_norm(f));
  }
  if (log.gamma.size() > 0) b.Gamma_bar = spectral_norm(log.gamma);
  if (!log.stacks.empty()) {
    b.a_lower = std::numeric_limits<double>::infinity();
    for (const StackSummary& st : log.stacks) {
      b.a_lower = std::min(b.a_lower, st.lambda_min);
      b.A_bar = std::max(b.A_bar, st.norm_A);
    }
  }
  return b;
}

}  // namespace clde
