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

#include "clde/plant.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

namespace clde {

FunctionPlant::FunctionPlant(int n, int m, int p, VectorFn drift,
                             MatrixFn input_matrix, MatrixFn regressor,
                             StateBox box)
    : n_(n),
      m_(m),
      p_(p),
      drift_(std::move(drift)),
      input_matrix_(std::move(input_matrix)),
      regressor_(std::move(regressor)),
      box_(std::move(box)) {
  if (n <= 0 || m < 0 || p <= 0) {
    throw ContractError("FunctionPlant: invalid dimensions");
  }
}

void FunctionPlant::evaluate(const Vector& x, PlantTerms& out) const {
  if (x.size() != n_) throw ContractError("FunctionPlant: state size");
  out.drift = drift_(x);
  out.input_matrix = input_matrix_(x);
  out.regressor = regressor_(x);
  if (out.drift.size() != n_ || out.input_matrix.rows() != n_ ||
      out.input_matrix.cols() != m_ || out.regressor.rows() != n_ ||
      out.regressor.cols() != p_) {
    throw ContractError("FunctionPlant: callable returned a wrong shape");
  }
}

Vector true_derivative(const Plant& plant, const Vector& x, const Vector& u,
                       const Vector& theta) {
  if (x.size() != plant.state_dim() || u.size() != plant.input_dim() ||
      theta.size() != plant.param_dim()) {
    throw ContractError("true_derivative: shape mismatch");
  }
  const PlantTerms t = plant.terms(x);
  return t.drift + t.input_matrix * u + t.regressor * theta;
}

TwoLinkArm::TwoLinkArm(TwoLinkParams params) : params_(std::move(params)) {
  if (params_.theta_true.size() != 4) {
    throw ContractError("TwoLinkArm: theta_true must have 4 entries");
  }
}

Eigen::Matrix2d TwoLinkArm::inertia(const Vector& x) const {
  const double c2 = std::cos(x(1));
  const double off = params_.p2 + params_.p3 * c2;
  Eigen::Matrix2d m;
  m << params_.p1 + 2.0 * params_.p3 * c2, off, off, params_.p2;
  return m;
}

Eigen::Matrix2d TwoLinkArm::coriolis(const Vector& x) const {
  const double s2 = std::sin(x(1));
  const double p3s2 = params_.p3 * s2;
  Eigen::Matrix2d v;
  v << -p3s2 * x(3), -p3s2 * (x(2) + x(3)), p3s2 * x(2), 0.0;
  return v;
}

Eigen::Matrix2d TwoLinkArm::inverse_inertia(const Vector& x) const {
  const Eigen::Matrix2d m = inertia(x);
  const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  // Eigenvalues of the symmetric 2x2 inertia in closed form.
  const double mean = 0.5 * (m(0, 0) + m(1, 1));
  const double radius = std::hypot(0.5 * (m(0, 0) - m(1, 1)), m(0, 1));
  const double lo = mean - radius;
  const double hi = mean + radius;
  if (!(lo > 0.0) || hi / lo > tolerance::kSingularCondition ||
      !std::isfinite(det)) {
    throw SingularityError("two-link inertia matrix is numerically singular");
  }
  Eigen::Matrix2d inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return inv / det;
}

Eigen::Vector2d TwoLinkArm::friction_force(const Vector& x,
                                           const Vector& theta) {
  return {theta(0) * x(2) + theta(2) * std::tanh(x(2)),
          theta(1) * x(3) + theta(3) * std::tanh(x(3))};
}

void TwoLinkArm::evaluate(const Vector& x, PlantTerms& out) const {
  if (x.size() != 4) throw ContractError("TwoLinkArm: state must have 4 entries");
  const Eigen::Matrix2d minv = inverse_inertia(x);
  const Eigen::Vector2d dq = x.tail<2>();
  const Eigen::Matrix2d vm = coriolis(x);

  out.drift.resize(4);
  out.drift.head<2>() = dq;
  out.drift.tail<2>() = -minv * (vm * dq);

  out.input_matrix.setZero(4, 2);
  out.input_matrix.bottomRows<2>() = minv;

  // [M^-1 M^-1] D(x): column j scales column (j mod 2) of M^-1.
  const double d[4] = {x(2), x(3), std::tanh(x(2)), std::tanh(x(3))};
  out.regressor.setZero(4, 4);
  for (int j = 0; j < 4; ++j) {
    out.regressor.block<2, 1>(2, j) = minv.col(j % 2) * d[j];
  }
}

StateBox TwoLinkArm::operating_box() const {
  constexpr double pi = std::numbers::pi;
  return {(Vector(4) << -pi, -pi, -5.0, -5.0).finished(),
          (Vector(4) << pi, pi, 5.0, 5.0).finished()};
}

Vector two_link_f1(const Vector& x, const TwoLinkParams& params) {
  return TwoLinkArm(params).drift(x);
}

Matrix two_link_g(const Vector& x, const TwoLinkParams& params) {
  return TwoLinkArm(params).input_matrix(x);
}

Matrix two_link_Y(const Vector& x, const TwoLinkParams& params) {
  return TwoLinkArm(params).regressor(x);
}

namespace {

bool near_small_ratio(double r) {
  constexpr int kMaxDenominator = 12;
  for (int q = 1; q <= kMaxDenominator; ++q) {
    for (int p = 1; p <= kMaxDenominator; ++p) {
      if (std::abs(r - static_cast<double>(p) / q) < 1e-9) return true;
    }
  }
  return false;
}

}  // namespace

void validate(const ControllerConfig& cfg) {
  if (!(cfg.kp > 0.0) || !(cfg.kd > 0.0)) {
    throw ContractError("controller gains kp and kd must be positive");
  }
  if (cfg.amplitudes.size() != 2) {
    throw ContractError("controller needs one reference amplitude per joint");
  }
  bool rich = false;
  for (std::size_t i = 0; i < cfg.frequencies.size(); ++i) {
    if (!(cfg.frequencies[i] > 0.0)) {
      throw ContractError("reference frequencies must be positive");
    }
    for (std::size_t j = i + 1; j < cfg.frequencies.size(); ++j) {
      if (!near_small_ratio(cfg.frequencies[i] / cfg.frequencies[j])) {
        rich = true;
      }
    }
  }
  if (!rich) {
    throw ContractError(
        "reference needs at least two incommensurate frequencies");
  }
}

JointReference joint_reference(double t, const ControllerConfig& cfg) {
  JointReference ref;
  ref.q.setZero();
  ref.dq.setZero();
  ref.ddq.setZero();
  for (int i = 0; i < 2; ++i) {
    const double a = cfg.amplitudes.at(i);
    for (double w : cfg.frequencies) {
      const double s = std::sin(w * t);
      const double c = std::cos(w * t);
      ref.q(i) += a * s;
      ref.dq(i) += a * w * c;
      ref.ddq(i) -= a * w * w * s;
    }
  }
  return ref;
}

Vector excitation_controller(double t, const Vector& x,
                             const ControllerConfig& cfg,
                             const TwoLinkArm& plant, const Vector& theta_hat) {
  if (x.size() != 4 || theta_hat.size() != 4) {
    throw ContractError("excitation_controller: shape mismatch");
  }
  const JointReference ref = joint_reference(t, cfg);
  const Eigen::Vector2d q = x.head<2>();
  const Eigen::Vector2d dq = x.tail<2>();
  const Eigen::Vector2d e = ref.q - q;
  const Eigen::Vector2d de = ref.dq - dq;
  const Eigen::Vector2d accel = ref.ddq + cfg.kd * de + cfg.kp * e;
  const Eigen::Vector2d u = plant.inertia(x) * accel + plant.coriolis(x) * dq -
                            TwoLinkArm::friction_force(x, theta_hat);
  return Vector(u);
}

}  // namespace clde
