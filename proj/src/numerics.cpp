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

#include "clde/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace clde {
namespace {

constexpr int kMaxSweeps = 100;

void require_finite(const Matrix& a, const char* who) {
  if (!a.allFinite()) {
    throw DomainError(std::string(who) + ": non-finite input");
  }
}

}  // namespace

Vector singular_values(const Matrix& a) {
  require_finite(a, "singular_values");
  if (a.size() == 0) return Vector();
  // Orthogonalize the columns of the taller orientation; the column norms
  // converge to the singular values.
  Matrix u = a.rows() >= a.cols() ? Matrix(a) : Matrix(a.transpose());
  const Eigen::Index n = u.cols();
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double alpha = u.col(p).squaredNorm();
        const double beta = u.col(q).squaredNorm();
        const double gamma = u.col(p).dot(u.col(q));
        if (gamma == 0.0 ||
            std::abs(gamma) <= tolerance::kJacobi * std::sqrt(alpha * beta)) {
          continue;
        }
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (Eigen::Index i = 0; i < u.rows(); ++i) {
          const double up = u(i, p);
          const double uq = u(i, q);
          u(i, p) = c * up - s * uq;
          u(i, q) = s * up + c * uq;
        }
      }
    }
    if (!rotated) break;
  }
  Vector sv(n);
  for (Eigen::Index j = 0; j < n; ++j) sv(j) = u.col(j).norm();
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

double min_singular_value(const Matrix& a) {
  const Vector sv = singular_values(a);
  return sv.size() == 0 ? 0.0 : sv(sv.size() - 1);
}

double spectral_norm(const Matrix& a) {
  const Vector sv = singular_values(a);
  return sv.size() == 0 ? 0.0 : sv(0);
}

bool is_symmetric(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < a.cols(); ++j) {
      const double scale = std::max(1.0, std::abs(a(i, j)));
      if (std::abs(a(i, j) - a(j, i)) > tol * scale) return false;
    }
  }
  return true;
}

Vector symmetric_eigenvalues(const Matrix& input) {
  require_finite(input, "symmetric_eigenvalues");
  if (!is_symmetric(input)) {
    throw DomainError("symmetric_eigenvalues: matrix is not symmetric");
  }
  const Eigen::Index n = input.rows();
  if (n == 0) return Vector();
  Matrix a = 0.5 * (input + input.transpose());
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    }
    if (off == 0.0 ||
        off <= tolerance::kJacobi * tolerance::kJacobi * a.squaredNorm()) {
      break;
    }
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector ev = a.diagonal();
  std::sort(ev.begin(), ev.end());
  return ev;
}

double min_eigenvalue_symmetric(const Matrix& a) {
  const Vector ev = symmetric_eigenvalues(a);
  return ev.size() == 0 ? 0.0 : ev(0);
}

double max_eigenvalue_symmetric(const Matrix& a) {
  const Vector ev = symmetric_eigenvalues(a);
  return ev.size() == 0 ? 0.0 : ev(ev.size() - 1);
}

Vector polyfit_derivative(std::span<const double> times,
                          std::span<const Vector> samples, int order,
                          double eval_time) {
  if (order < 0) throw ContractError("polyfit_derivative: negative order");
  if (times.size() != samples.size()) {
    throw ContractError("polyfit_derivative: times/samples length mismatch");
  }
  const auto count = static_cast<Eigen::Index>(times.size());
  if (count < order + 1) {
    throw ContractError("polyfit_derivative: window shorter than order+1");
  }
  for (Eigen::Index i = 1; i < count; ++i) {
    if (!(times[i] > times[i - 1])) {
      throw ContractError("polyfit_derivative: times not strictly increasing");
    }
  }
  if (eval_time < times.front() || eval_time > times.back()) {
    throw ContractError("polyfit_derivative: eval_time outside window");
  }
  const Eigen::Index dim = samples.front().size();
  if (order == 0) return Vector::Zero(dim);

  const double scale = 0.5 * (times.back() - times.front());
  Matrix vandermonde(count, order + 1);
  Matrix rhs(count, dim);
  for (Eigen::Index i = 0; i < count; ++i) {
    if (samples[i].size() != dim) {
      throw ContractError("polyfit_derivative: inconsistent sample sizes");
    }
    const double tau = (times[i] - eval_time) / scale;
    double power = 1.0;
    for (int j = 0; j <= order; ++j) {
      vandermonde(i, j) = power;
      power *= tau;
    }
    rhs.row(i) = samples[i].transpose();
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(vandermonde);
  qr.setThreshold(tolerance::kVandermondeRank);
  if (qr.rank() < order + 1) {
    throw FitError("polyfit_derivative: rank-deficient Vandermonde system");
  }
  const Matrix coeffs = qr.solve(rhs);
  // d/dt p((t - eval)/scale) at t = eval is c1 / scale.
  return coeffs.row(1).transpose() / scale;
}

Vector moving_average(std::span<const Vector> window) {
  if (window.empty()) throw DomainError("moving_average: empty window");
  Vector sum = window.front();
  for (std::size_t i = 1; i < window.size(); ++i) {
    if (window[i].size() != sum.size()) {
      throw ContractError("moving_average: inconsistent sample sizes");
    }
    sum += window[i];
  }
  return sum / static_cast<double>(window.size());
}

}  // namespace clde
