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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "clde/plant.hpp"

namespace clde {
namespace {

Vector random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> q(-3.0, 3.0);
  std::uniform_real_distribution<double> dq(-4.0, 4.0);
  return (Vector(4) << q(rng), q(rng), dq(rng), dq(rng)).finished();
}

// Direct evaluation of the manipulator equations, written independently of
// TwoLinkArm::evaluate: M(q) ddq + Vm(q, dq) dq = tau + D(dq) theta.
Vector arm_oracle(const Vector& x, const Vector& u, const Vector& theta) {
  const double p1 = 3.473, p2 = 0.196, p3 = 0.242;
  const double c2 = std::cos(x(1));
  const double s2 = std::sin(x(1));
  Eigen::Matrix2d m;
  m << p1 + 2 * p3 * c2, p2 + p3 * c2, p2 + p3 * c2, p2;
  Eigen::Matrix2d vm;
  vm << -p3 * s2 * x(3), -p3 * s2 * (x(2) + x(3)), p3 * s2 * x(2), 0.0;
  const Eigen::Vector2d dq(x(2), x(3));
  const Eigen::Vector2d friction(theta(0) * x(2) + theta(2) * std::tanh(x(2)),
                                 theta(1) * x(3) + theta(3) * std::tanh(x(3)));
  const Eigen::Vector2d ddq =
      m.lu().solve(Eigen::Vector2d(u(0), u(1)) - vm * dq + friction);
  return (Vector(4) << x(2), x(3), ddq(0), ddq(1)).finished();
}

TEST(TwoLinkArm, ZeroVelocityZeroInputIsEquilibrium) {
  const TwoLinkArm arm;
  std::mt19937_64 rng(1);
  Vector x = random_state(rng);
  x(2) = 0.0;
  x(3) = 0.0;
  const Vector d = true_derivative(arm, x, Vector::Zero(2), arm.params().theta_true);
  EXPECT_EQ(d.norm(), 0.0);
}

TEST(TwoLinkArm, RegressorVanishesAtRest) {
  const TwoLinkArm arm;
  EXPECT_EQ(arm.regressor(Vector::Zero(4)).norm(), 0.0);
}

TEST(TwoLinkArm, DerivativeMatchesManipulatorEquations) {
  const TwoLinkArm arm;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> torque(0.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x = random_state(rng);
    const Vector u = (Vector(2) << torque(rng), torque(rng)).finished();
    const Vector theta = arm.params().theta_true;
    const Vector ours = true_derivative(arm, x, u, theta);
    EXPECT_LT((ours - arm_oracle(x, u, theta)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(TwoLinkArm, RegressorIsLinearInParameters) {
  const TwoLinkArm arm;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  const Vector x = random_state(rng);
  const Vector a = (Vector(4) << n(rng), n(rng), n(rng), n(rng)).finished();
  const Vector b = (Vector(4) << n(rng), n(rng), n(rng), n(rng)).finished();
  const Matrix y = arm.regressor(x);
  EXPECT_LT((y * (2.0 * a - b) - (2.0 * (y * a) - y * b)).norm(), 1e-12);
  EXPECT_EQ(y.topRows(2).norm(), 0.0);
}

TEST(TwoLinkArm, FreeFunctionsAgreeWithClass) {
  const TwoLinkParams params;
  const TwoLinkArm arm(params);
  const Vector x = (Vector(4) << 0.3, -1.2, 0.7, -0.4).finished();
  EXPECT_EQ((two_link_f1(x, params) - arm.drift(x)).norm(), 0.0);
  EXPECT_EQ((two_link_g(x, params) - arm.input_matrix(x)).norm(), 0.0);
  EXPECT_EQ((two_link_Y(x, params) - arm.regressor(x)).norm(), 0.0);
}

TEST(TwoLinkArm, InertiaIsSymmetricPositiveDefinite) {
  const TwoLinkArm arm;
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x = random_state(rng);
    const Eigen::Matrix2d m = arm.inertia(x);
    EXPECT_EQ(m(0, 1), m(1, 0));
    EXPECT_GT(m.determinant(), 0.0);
    EXPECT_GT(m(0, 0), 0.0);
    EXPECT_LT((arm.inverse_inertia(x) * m - Eigen::Matrix2d::Identity()).norm(),
              1e-12);
  }
}

TEST(TwoLinkArm, SingularInertiaIsReported) {
  TwoLinkParams params;
  // p1 p2 - p2^2 - p3^2 cos^2(q2) = 0 at q2 = 0.
  params.p1 = 1.0;
  params.p2 = 0.5;
  params.p3 = 0.5;
  const TwoLinkArm arm(params);
  EXPECT_THROW(arm.inverse_inertia(Vector::Zero(4)), SingularityError);
}

TEST(TwoLinkArm, OperatingBoxContainsOrigin) {
  const StateBox box = TwoLinkArm().operating_box();
  EXPECT_TRUE((box.lower.array() < 0.0).all());
  EXPECT_TRUE((box.upper.array() > 0.0).all());
}

TEST(FunctionPlant, ShapeMismatchIsContractError) {
  const FunctionPlant plant(
      2, 1, 2, [](const Vector&) { return Vector(Vector::Zero(3)); },
      [](const Vector&) { return Matrix(Matrix::Zero(2, 1)); },
      [](const Vector&) { return Matrix(Matrix::Zero(2, 2)); },
      {Vector::Zero(2), Vector::Ones(2)});
  EXPECT_THROW(plant.terms(Vector::Zero(2)), ContractError);
  EXPECT_THROW(plant.terms(Vector::Zero(3)), ContractError);
}

TEST(TrueDerivative, ShapeChecks) {
  const TwoLinkArm arm;
  EXPECT_THROW(true_derivative(arm, Vector::Zero(4), Vector::Zero(3),
                               arm.params().theta_true),
               ContractError);
}

TEST(Controller, ExactCompensationTracksReferenceAcceleration) {
  const TwoLinkArm arm;
  ControllerConfig cfg;
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector x = random_state(rng);
    const double t = 0.37 * trial;
    const Vector u = excitation_controller(t, x, cfg, arm, arm.params().theta_true);
    const Vector d = true_derivative(arm, x, u, arm.params().theta_true);
    const JointReference ref = joint_reference(t, cfg);
    const Eigen::Vector2d e = ref.q - x.head<2>();
    const Eigen::Vector2d de = ref.dq - x.tail<2>();
    const Eigen::Vector2d expected = ref.ddq + cfg.kd * de + cfg.kp * e;
    EXPECT_LT((d.tail<2>() - expected).norm(), 1e-9);
  }
}

TEST(Controller, ReferenceDerivativesAreConsistent) {
  const ControllerConfig cfg;
  const double t = 1.234;
  const double h = 1e-6;
  const JointReference a = joint_reference(t - h, cfg);
  const JointReference b = joint_reference(t + h, cfg);
  const JointReference c = joint_reference(t, cfg);
  EXPECT_LT(((b.q - a.q) / (2 * h) - c.dq).norm(), 1e-7);
  EXPECT_LT(((b.dq - a.dq) / (2 * h) - c.ddq).norm(), 1e-7);
}

TEST(Controller, ValidationRejectsBadSettings) {
  ControllerConfig cfg;
  EXPECT_NO_THROW(validate(cfg));
  cfg.kp = 0.0;
  EXPECT_THROW(validate(cfg), ContractError);
  cfg = ControllerConfig{};
  cfg.amplitudes = {1.0};
  EXPECT_THROW(validate(cfg), ContractError);
  cfg = ControllerConfig{};
  cfg.frequencies = {1.0, 2.0};
  EXPECT_THROW(validate(cfg), ContractError);
  cfg.frequencies = {1.0, -2.0};
  EXPECT_THROW(validate(cfg), ContractError);
}

}  // namespace
}  // namespace clde
