#pragma once

#include <vector>

#include "aopt/types.hpp"

namespace aopt {

// Euclidean norm of every column.
Vector column_norms(const Matrix& X);

// Omega(X) = sum_i ||x_i||, the group-lasso norm.
double omega(const Matrix& X);

// Omega*(Z) = max_i ||z_i||, the dual norm of Omega.
double omega_dual(const Matrix& Z);

// g(X) = Omega(X)^2 / 2.
double g_penalty(const Matrix& X);

// g*(Z) = max_i ||z_i||^2 / 2.
double g_conjugate(const Matrix& Z);

// Tests Z in dg(X): z_i must equal Omega(X) x_i/||x_i|| on nonzero columns
// and satisfy ||z_i|| <= Omega(X) on zero columns, each up to `tol`.
bool in_subgradient(const Matrix& X, const Matrix& Z, double tol);

struct ProxDiagnostics {
  // Number of columns kept in the active (largest-norm) prefix.
  Index k = 0;
  // Column indices in the order used: norm descending, index ascending.
  std::vector<Index> permutation;
  // t/(tk+1) * sum of the k largest column norms.
  double threshold = 0.0;
};

struct ProxResult {
  Matrix X;
  ProxDiagnostics diagnostics;
};

// prox_{t g}(V) = argmin_X t g(X) + ||X - V||_F^2 / 2.
//
// Columns are sorted by decreasing norm and the active prefix is the largest
// k with ||v_(k)|| >= t/(tk+1) * sum_{j<=k} ||v_(j)||. Kept columns are
// shrunk towards zero by the common amount `threshold`; the rest are zeroed.
// Throws std::invalid_argument unless t > 0.
ProxResult prox_g(const Matrix& V, double t);

}  // namespace aopt
