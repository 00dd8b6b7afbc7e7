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

#ifndef CLDE_NUMERICS_HPP_
#define CLDE_NUMERICS_HPP_

#include <span>
#include <utility>

#include <Eigen/Dense>

#include "clde/errors.hpp"

namespace clde {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Numerical tolerances shared by every module.
namespace tolerance {
/// |A_ij - A_ji| <= kSymmetry * max(1, |A_ij|) for matrices treated as symmetric.
inline constexpr double kSymmetry = 1e-12;
/// A gram matrix is full rank when its smallest singular value exceeds this.
inline constexpr double kRank = 1e-8;
/// A history-stack replacement must raise sigma_min by more than this.
inline constexpr double kInsertImprovement = 1e-12;
/// Jacobi rotations stop once off-diagonal coupling falls below this (relative).
inline constexpr double kJacobi = 1e-15;
/// Condition number beyond which an inertia matrix is treated as singular.
inline constexpr double kSingularCondition = 1e12;
/// Relative pivot threshold for rank detection in polynomial fits.
inline constexpr double kVandermondeRank = 1e-10;
/// Central-difference step for regressor Jacobians.
inline constexpr double kFiniteDifferenceStep = 1e-5;
/// Relative slack on sampling-gate comparisons (absorbs t = k*dt rounding).
inline constexpr double kGate = 1e-9;
}  // namespace tolerance

inline bool all_finite(const Vector& v) { return v.allFinite(); }

/// Classical fourth-order Runge-Kutta step for dx/dt = f(t, x).
/// `f` is called as f(t, x) and returns the derivative; a non-finite stage
/// raises IntegrationError carrying t and the 1-based stage index.
template <typename Derivative>
Vector rk4_step(Derivative&& f, double t, const Vector& x, double dt) {
  if (!(dt > 0.0)) throw ContractError("rk4_step: dt must be positive");
  const double half = 0.5 * dt;
  const Vector k1 = f(t, x);
  if (!k1.allFinite()) throw IntegrationError(t, 1);
  const Vector k2 = f(t + half, Vector(x + half * k1));
  if (!k2.allFinite()) throw IntegrationError(t, 2);
  const Vector k3 = f(t + half, Vector(x + half * k2));
  if (!k3.allFinite()) throw IntegrationError(t, 3);
  const Vector k4 = f(t + dt, Vector(x + dt * k3));
  if (!k4.allFinite()) throw IntegrationError(t, 4);
  return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Allocation-free RK4 for hot loops. The derivative is written in place:
/// f(t, x, dxdt). Produces the same arithmetic as rk4_step.
class Rk4Workspace {
 public:
  explicit Rk4Workspace(Eigen::Index dim)
      : k1_(dim), k2_(dim), k3_(dim), k4_(dim), stage_(dim) {}

  template <typename Derivative>
  void step(Derivative&& f, double t, Vector& x, double dt) {
    if (!(dt > 0.0)) throw ContractError("rk4_step: dt must be positive");
    const double half = 0.5 * dt;
    f(t, x, k1_);
    if (!k1_.allFinite()) throw IntegrationError(t, 1);
    stage_.noalias() = x + half * k1_;
    f(t + half, stage_, k2_);
    if (!k2_.allFinite()) throw IntegrationError(t, 2);
    stage_.noalias() = x + half * k2_;
    f(t + half, stage_, k3_);
    if (!k3_.allFinite()) throw IntegrationError(t, 3);
    stage_.noalias() = x + dt * k3_;
    f(t + dt, stage_, k4_);
    if (!k4_.allFinite()) throw IntegrationError(t, 4);
    x += (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
  }

 private:
  Vector k1_, k2_, k3_, k4_, stage_;
};

/// All singular values, descending. One-sided (Hestenes) Jacobi.
Vector singular_values(const Matrix& a);

/// Smallest singular value of any-shape finite matrix (0 for empty input).
double min_singular_value(const Matrix& a);

/// Eigenvalues of a symmetric matrix, ascending. Cyclic Jacobi.
Vector symmetric_eigenvalues(const Matrix& a);

double min_eigenvalue_symmetric(const Matrix& a);
double max_eigenvalue_symmetric(const Matrix& a);

/// Spectral norm (largest singular value).
double spectral_norm(const Matrix& a);

bool is_symmetric(const Matrix& a, double tol = tolerance::kSymmetry);

/// Least-squares polynomial of degree `order` fitted independently to each
/// component of `samples`; returns the derivative of the fit at `eval_time`.
/// Times are shifted to `eval_time` and scaled by the half-span before the
/// QR solve.
Vector polyfit_derivative(std::span<const double> times,
                          std::span<const Vector> samples, int order,
                          double eval_time);

/// Componentwise arithmetic mean.
Vector moving_average(std::span<const Vector> window);

}  // namespace clde

#endif  // CLDE_NUMERICS_HPP_
