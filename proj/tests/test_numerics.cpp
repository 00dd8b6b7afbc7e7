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
#include <vector>

#include <gtest/gtest.h>

#include "clde/numerics.hpp"

namespace clde {
namespace {

Matrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = dist(rng);
  }
  return m;
}

TEST(Rk4Step, ZeroDerivativeKeepsState) {
  const Vector x = Vector::Constant(1, 2.0);
  const Vector next = rk4_step(
      [](double, const Vector& v) { return Vector(Vector::Zero(v.size())); }, 0.0,
      x, 0.1);
  EXPECT_EQ(next(0), 2.0);
}

TEST(Rk4Step, DecayMatchesHandComputedStages) {
  // k1 = -1, k2 = -0.95, k3 = -0.9525, k4 = -0.90475.
  const double expected =
      1.0 + 0.1 / 6.0 * (-1.0 + 2.0 * -0.95 + 2.0 * -0.9525 + -0.90475);
  const Vector next = rk4_step([](double, const Vector& v) { return Vector(-v); },
                               0.0, Vector::Constant(1, 1.0), 0.1);
  EXPECT_NEAR(next(0), expected, 1e-15);
  EXPECT_NEAR(next(0), 0.9048375, 1e-7);
}

TEST(Rk4Step, ConstantDerivativeIsExact) {
  const Vector next = rk4_step(
      [](double, const Vector&) { return Vector(Vector::Constant(1, 1.0)); }, 0.0,
      Vector::Zero(1), 0.5);
  EXPECT_DOUBLE_EQ(next(0), 0.5);
}

TEST(Rk4Step, RejectsNonPositiveStep) {
  auto f = [](double, const Vector& v) { return Vector(-v); };
  EXPECT_THROW(rk4_step(f, 0.0, Vector::Ones(1), 0.0), ContractError);
  EXPECT_THROW(rk4_step(f, 0.0, Vector::Ones(1), -1e-3), ContractError);
}

TEST(Rk4Step, NonFiniteStageReportsTimeAndStage) {
  auto f = [](double t, const Vector& v) {
    if (t > 0.0) return Vector(Vector::Constant(v.size(), NAN));
    return Vector(-v);
  };
  try {
    rk4_step(f, 0.0, Vector::Ones(1), 0.1);
    FAIL() << "expected IntegrationError";
  } catch (const IntegrationError& e) {
    EXPECT_EQ(e.stage(), 2);
    EXPECT_EQ(e.time(), 0.0);
  }
}

TEST(Rk4Step, GlobalErrorOnDecayIsTiny) {
  Vector x = Vector::Ones(1);
  const double dt = 1e-3;
  for (int k = 0; k < 1000; ++k) {
    x = rk4_step([](double, const Vector& v) { return Vector(-v); },
                 k * dt, x, dt);
  }
  EXPECT_LT(std::abs(x(0) - std::exp(-1.0)), 1e-10);
}

TEST(Rk4Workspace, MatchesFunctionalStep) {
  std::mt19937_64 rng(7);
  const Matrix a = random_matrix(rng, 5, 5);
  auto f = [&](double t, const Vector& v) {
    return Vector(a * v + Vector::Constant(5, std::sin(t)));
  };
  Vector x = random_matrix(rng, 5, 1);
  Vector y = x;
  Rk4Workspace ws(5);
  for (int k = 0; k < 50; ++k) {
    x = rk4_step(f, 0.01 * k, x, 0.01);
    ws.step([&](double t, const Vector& v, Vector& d) { d = f(t, v); }, 0.01 * k,
            y, 0.01);
  }
  EXPECT_EQ((x - y).cwiseAbs().maxCoeff(), 0.0);
}

TEST(MinSingularValue, SimpleCases) {
  EXPECT_DOUBLE_EQ(min_singular_value(Matrix::Identity(2, 2)), 1.0);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 0.5;
  EXPECT_NEAR(min_singular_value(d), 0.5, 1e-15);
  EXPECT_EQ(min_singular_value(Matrix(0, 0)), 0.0);
}

TEST(MinSingularValue, RejectsNonFinite) {
  Matrix m = Matrix::Identity(3, 3);
  m(1, 2) = NAN;
  EXPECT_THROW(min_singular_value(m), DomainError);
}

TEST(MinSingularValue, MatchesTwoSidedJacobiOracle) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const int rows = 1 + static_cast<int>(rng() % 8);
    const int cols = 1 + static_cast<int>(rng() % 8);
    const Matrix a = random_matrix(rng, rows, cols);
    Eigen::JacobiSVD<Matrix> oracle(a);
    const Vector sv = oracle.singularValues();
    const Vector ours = singular_values(a);
    ASSERT_EQ(ours.size(), sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      EXPECT_NEAR(ours(i), sv(i), 1e-9 * std::max(1.0, sv(0)));
    }
    EXPECT_NEAR(min_singular_value(a), min_singular_value(a.transpose()), 1e-12);
  }
}

TEST(SymmetricEigenvalues, SimpleCases) {
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 4.0;
  EXPECT_DOUBLE_EQ(min_eigenvalue_symmetric(d), 1.0);
  EXPECT_DOUBLE_EQ(max_eigenvalue_symmetric(d), 4.0);
  EXPECT_EQ(min_eigenvalue_symmetric(Matrix::Zero(3, 3)), 0.0);
}

TEST(SymmetricEigenvalues, RejectsAsymmetric) {
  Matrix m = Matrix::Identity(3, 3);
  m(0, 1) = 1e-6;
  EXPECT_THROW(min_eigenvalue_symmetric(m), DomainError);
}

TEST(SymmetricEigenvalues, PsdMatchesSingularValuesAndOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix b = random_matrix(rng, 4, 4);
    const Matrix a = b.transpose() * b;
    const double lmin = min_eigenvalue_symmetric(a);
    EXPECT_GE(lmin, -1e-10);
    EXPECT_NEAR(lmin, min_singular_value(a), 1e-9 * std::max(1.0, a.norm()));
    Eigen::SelfAdjointEigenSolver<Matrix> oracle(a);
    const Vector eig = symmetric_eigenvalues(a);
    for (int i = 0; i < 4; ++i) {
      EXPECT_NEAR(eig(i), oracle.eigenvalues()(i), 1e-9 * std::max(1.0, a.norm()));
    }
  }
}

TEST(SpectralNorm, MatchesLargestSingularValue) {
  std::mt19937_64 rng(5);
  const Matrix a = random_matrix(rng, 4, 3);
  Eigen::JacobiSVD<Matrix> oracle(a);
  EXPECT_NEAR(spectral_norm(a), oracle.singularValues()(0), 1e-12);
}

TEST(PolyfitDerivative, ExactLinear) {
  const std::vector<double> t{0.0, 0.1, 0.2};
  const std::vector<Vector> x{Vector::Constant(1, 0.0), Vector::Constant(1, 0.1),
                              Vector::Constant(1, 0.2)};
  EXPECT_NEAR(polyfit_derivative(t, x, 1, 0.1)(0), 1.0, 1e-12);
}

TEST(PolyfitDerivative, ExactQuadratic) {
  std::vector<double> t;
  std::vector<Vector> x;
  for (int i = 0; i < 5; ++i) {
    t.push_back(0.1 * i);
    x.push_back(Vector::Constant(1, t.back() * t.back()));
  }
  EXPECT_NEAR(polyfit_derivative(t, x, 2, 0.2)(0), 0.4, 1e-12);
}

TEST(PolyfitDerivative, ReproducesPolynomialsUpToOrder) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int order = 0; order <= 4; ++order) {
    std::vector<double> c(static_cast<std::size_t>(order) + 1);
    for (double& v : c) v = coef(rng);
    std::vector<double> t;
    std::vector<Vector> x;
    for (int i = 0; i < 15; ++i) {
      const double ti = 1.0 + 0.05 * i;
      double value = 0.0;
      for (int p = order; p >= 0; --p) value = value * ti + c[static_cast<std::size_t>(p)];
      t.push_back(ti);
      x.push_back(Vector::Constant(2, value));
    }
    const double te = 1.33;
    double slope = 0.0;
    for (int p = order; p >= 1; --p) slope = slope * te + p * c[static_cast<std::size_t>(p)];
    const Vector d = polyfit_derivative(t, x, order, te);
    EXPECT_NEAR(d(0), slope, 1e-9) << "order " << order;
    EXPECT_NEAR(d(1), slope, 1e-9) << "order " << order;
  }
}

TEST(PolyfitDerivative, NoisySineMatchesNormalEquations) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<double> t;
  std::vector<Vector> x;
  for (int i = 0; i < 21; ++i) {
    t.push_back(2.0 + 0.01 * i);
    x.push_back(Vector::Constant(1, std::sin(3.0 * t.back()) + noise(rng)));
  }
  const double te = t[10];
  // Normal equations in the shifted variable s = t - te; derivative is c1.
  Matrix v(21, 4);
  Vector y(21);
  for (int i = 0; i < 21; ++i) {
    const double s = t[static_cast<std::size_t>(i)] - te;
    for (int p = 0; p < 4; ++p) v(i, p) = std::pow(s, p);
    y(i) = x[static_cast<std::size_t>(i)](0);
  }
  const Vector c = (v.transpose() * v).ldlt().solve(v.transpose() * y);
  EXPECT_NEAR(polyfit_derivative(t, x, 3, te)(0), c(1), 1e-8);
}

TEST(PolyfitDerivative, ContractAndFitErrors) {
  const std::vector<double> t{0.0, 0.1, 0.2};
  const std::vector<Vector> x(3, Vector::Zero(1));
  EXPECT_THROW(polyfit_derivative(t, x, 3, 0.1), ContractError);
  const std::vector<double> bad{0.0, 0.2, 0.1};
  EXPECT_THROW(polyfit_derivative(bad, x, 1, 0.1), ContractError);
  EXPECT_THROW(polyfit_derivative(t, x, 1, 0.5), ContractError);
  const std::vector<double> clustered{0.0, 1.0, 1.0 + 1e-13};
  EXPECT_THROW(polyfit_derivative(clustered, x, 2, 0.5), FitError);
}

TEST(MovingAverage, Examples) {
  const std::vector<Vector> ones(3, Vector::Ones(1));
  EXPECT_EQ(moving_average(ones)(0), 1.0);
  const std::vector<Vector> pair{Vector::Constant(1, 0.0), Vector::Constant(1, 2.0)};
  EXPECT_EQ(moving_average(pair)(0), 1.0);
  EXPECT_THROW(moving_average(std::vector<Vector>{}), DomainError);
}

TEST(MovingAverage, MatchesDirectSummation) {
  std::mt19937_64 rng(9);
  std::vector<Vector> w;
  for (int i = 0; i < 5; ++i) w.push_back(random_matrix(rng, 3, 1));
  Vector sum = Vector::Zero(3);
  for (const Vector& v : w) sum += v;
  EXPECT_LT((moving_average(w) - sum / 5.0).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(IsSymmetric, RelativeTolerance) {
  Matrix m = Matrix::Identity(2, 2) * 1e6;
  m(0, 1) = 1e6;
  m(1, 0) = 1e6 * (1.0 + 1e-13);
  EXPECT_TRUE(is_symmetric(m));
  m(1, 0) = 1e6 * (1.0 + 1e-9);
  EXPECT_FALSE(is_symmetric(m));
}

}  // namespace
}  // namespace clde
