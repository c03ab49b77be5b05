#include "aopt/penalty.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace aopt {

Vector column_norms(const Matrix& X) { return X.colwise().norm().transpose(); }

double omega(const Matrix& X) { return X.cols() == 0 ? 0.0 : column_norms(X).sum(); }

double omega_dual(const Matrix& Z) { return Z.cols() == 0 ? 0.0 : column_norms(Z).maxCoeff(); }

double g_penalty(const Matrix& X) {
  const double o = omega(X);
  return 0.5 * o * o;
}

double g_conjugate(const Matrix& Z) {
  const double o = omega_dual(Z);
  return 0.5 * o * o;
}

bool in_subgradient(const Matrix& X, const Matrix& Z, double tol) {
  if (X.rows() != Z.rows() || X.cols() != Z.cols()) return false;
  const Vector norms = column_norms(X);
  const double total = norms.sum();
  for (Index i = 0; i < X.cols(); ++i) {
    if (norms[i] > 0.0) {
      const double dev = (Z.col(i) - (total / norms[i]) * X.col(i)).norm();
      if (dev > tol) return false;
    } else if (Z.col(i).norm() > total + tol) {
      return false;
    }
  }
  return true;
}

ProxResult prox_g(const Matrix& V, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("prox step t must be positive");
  const Index m = V.cols();
  const Vector norms = column_norms(V);

  ProxResult out{Matrix::Zero(V.rows(), m), {}};
  auto& diag = out.diagnostics;
  diag.permutation.resize(static_cast<std::size_t>(m));
  std::iota(diag.permutation.begin(), diag.permutation.end(), Index{0});
  std::stable_sort(diag.permutation.begin(), diag.permutation.end(),
                   [&](Index a, Index b) { return norms[a] > norms[b]; });

  // Largest k with ||v_(k)|| (tk + 1) >= t S_k. The margin
  // ||v_(k)|| (tk + 1) - t S_k is nonincreasing in k along the sorted order,
  // so a linear scan over the prefix sums suffices.
  double prefix = 0.0;
  double kept_sum = 0.0;
  Index k = 0;
  for (Index j = 0; j < m; ++j) {
    const double nj = norms[diag.permutation[static_cast<std::size_t>(j)]];
    prefix += nj;
    const double kk = static_cast<double>(j + 1);
    if (nj * (t * kk + 1.0) >= t * prefix) {
      k = j + 1;
      kept_sum = prefix;
    }
  }
  diag.k = k;
  diag.threshold = t / (t * static_cast<double>(k) + 1.0) * kept_sum;

  for (Index j = 0; j < k; ++j) {
    const Index i = diag.permutation[static_cast<std::size_t>(j)];
    // Zero columns only enter the prefix when V == 0, where X = 0 anyway.
    if (norms[i] > 0.0) {
      const double scale = std::max(0.0, 1.0 - diag.threshold / norms[i]);
      out.X.col(i) = scale * V.col(i);
    }
  }
  return out;
}

}  // namespace aopt
