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

#ifndef CLDE_PLANT_HPP_
#define CLDE_PLANT_HPP_

#include <functional>
#include <vector>

#include "clde/numerics.hpp"

namespace clde {

/// Known terms of a control-affine plant evaluated at one state.
struct PlantTerms {
  Vector drift;         // f1(x), n
  Matrix input_matrix;  // g(x), n x m
  Matrix regressor;     // Y(x), n x P
};

/// Axis-aligned sampling box in state space.
struct StateBox {
  Vector lower;
  Vector upper;
};

/// Linearly parameterized control-affine plant:
///   dx/dt = f1(x) + g(x) u + Y(x) theta
/// with f1, g, Y known and theta unknown.
class Plant {
 public:
  virtual ~Plant() = default;

  virtual int state_dim() const = 0;
  virtual int input_dim() const = 0;
  virtual int param_dim() const = 0;

  /// Writes all three known terms into `out`, resizing as needed. Hot loops
  /// reuse `out` across calls.
  virtual void evaluate(const Vector& x, PlantTerms& out) const = 0;

  /// Box used for arbitrary history-stack initialization.
  virtual StateBox operating_box() const = 0;

  PlantTerms terms(const Vector& x) const {
    PlantTerms out;
    evaluate(x, out);
    return out;
  }
  Vector drift(const Vector& x) const { return terms(x).drift; }
  Matrix input_matrix(const Vector& x) const { return terms(x).input_matrix; }
  Matrix regressor(const Vector& x) const { return terms(x).regressor; }
};

/// Plant assembled from callables; used for synthetic test plants and for
/// models that do not warrant their own class.
class FunctionPlant final : public Plant {
 public:
  using VectorFn = std::function<Vector(const Vector&)>;
  using MatrixFn = std::function<Matrix(const Vector&)>;

  FunctionPlant(int n, int m, int p, VectorFn drift, MatrixFn input_matrix,
                MatrixFn regressor, StateBox box);

  int state_dim() const override { return n_; }
  int input_dim() const override { return m_; }
  int param_dim() const override { return p_; }
  void evaluate(const Vector& x, PlantTerms& out) const override;
  StateBox operating_box() const override { return box_; }

 private:
  int n_, m_, p_;
  VectorFn drift_;
  MatrixFn input_matrix_;
  MatrixFn regressor_;
  StateBox box_;
};

/// f1(x) + g(x) u + Y(x) theta, with shape checks.
Vector true_derivative(const Plant& plant, const Vector& x, const Vector& u,
                       const Vector& theta);

/// Inertia constants and true parameters of the two-link arm benchmark.
struct TwoLinkParams {
  double p1 = 3.473;
  double p2 = 0.196;
  double p3 = 0.242;
  Vector theta_true = (Vector(4) << 5.3, 1.1, 8.45, 2.35).finished();
};

/// Two-link planar manipulator, state x = [q1, q2, dq1, dq2]:
///   f1 = [dq; -M^-1 Vm dq],  g = [0; M^-1],  Y = [0; [M^-1 M^-1] D(x)]
/// with D(x) = diag(dq1, dq2, tanh dq1, tanh dq2).
class TwoLinkArm final : public Plant {
 public:
  explicit TwoLinkArm(TwoLinkParams params = {});

  int state_dim() const override { return 4; }
  int input_dim() const override { return 2; }
  int param_dim() const override { return 4; }
  void evaluate(const Vector& x, PlantTerms& out) const override;
  StateBox operating_box() const override;

  const TwoLinkParams& params() const { return params_; }

  Eigen::Matrix2d inertia(const Vector& x) const;
  Eigen::Matrix2d coriolis(const Vector& x) const;
  /// M(x)^-1; throws SingularityError when cond(M) exceeds the threshold.
  Eigen::Matrix2d inverse_inertia(const Vector& x) const;

  /// Generalized force produced by the parameterized terms, i.e. the vector
  /// M(x) * (rows 3-4 of Y(x) theta).
  static Eigen::Vector2d friction_force(const Vector& x, const Vector& theta);

 private:
  TwoLinkParams params_;
};

// Free-function views of the two-link model.
Vector two_link_f1(const Vector& x, const TwoLinkParams& params);
Matrix two_link_g(const Vector& x, const TwoLinkParams& params);
Matrix two_link_Y(const Vector& x, const TwoLinkParams& params);

/// Sum-of-sinusoids joint reference tracked by a computed-torque PD law.
struct ControllerConfig {
  std::vector<double> amplitudes{0.5, 0.7};   // rad, one per joint
  std::vector<double> frequencies{0.7, 1.3, 2.1};  // rad/s, shared
  double kp = 25.0;
  double kd = 10.0;
};

/// Throws ContractError when a gain is nonpositive, the amplitude list does
/// not have one entry per joint, or no two frequencies have a ratio that is
/// far from every p/q with p, q <= 12.
void validate(const ControllerConfig& cfg);

struct JointReference {
  Eigen::Vector2d q, dq, ddq;
};
JointReference joint_reference(double t, const ControllerConfig& cfg);

/// Computed-torque PD tracking of the joint reference:
///   u = M(x)(ddq_d + kd de + kp e) + Vm(x) dq - friction(x, theta_hat)
/// With theta_hat equal to the true parameters the closed loop is
/// ddq = ddq_d + kd de + kp e.
Vector excitation_controller(double t, const Vector& x,
                             const ControllerConfig& cfg,
                             const TwoLinkArm& plant, const Vector& theta_hat);

}  // namespace clde

#endif  // CLDE_PLANT_HPP_
