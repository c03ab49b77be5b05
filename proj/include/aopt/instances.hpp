#pragma once

#include <cstdint>

#include "aopt/model.hpp"

namespace aopt {

inline constexpr double kDefaultSigma2N = 0.01;

// A entries i.i.d. standard normal from a stream keyed by (seed, m, n);
// K = Sigma = I_n.
DesignProblem gen_random(Index m, Index n, std::uint64_t seed,
                         double sigma2N = kDefaultSigma2N);

// Number of quadratic-regression features in dimension d: 1 + d + d(d+1)/2.
Index quadreg_dimension(Index d);

// Feature map [1, x_1..x_d, x_i x_j (i <= j, lexicographic)].
Vector quadreg_features(const Vector& x);

// Regular grid over [-1,1]^d with `points_per_dim` nodes per axis, first
// coordinate varying slowest; K = Sigma = I_n. The grid is deterministic, so
// the seed only enters provenance. Throws std::invalid_argument on bad sizes
// or when points_per_dim^d overflows.
DesignProblem gen_quadreg(Index d, Index points_per_dim, std::uint64_t seed = 0,
                          double sigma2N = kDefaultSigma2N);

// Finite quadrature of the IMSE measure: row j of `points` is phi(x_j)^T.
struct QuadratureSpec {
  Matrix points;
  Vector weights;
};

// Factor K (n x r) of Q = sum_j mu_j phi_j phi_j^T, from a symmetric
// eigendecomposition keeping eigenvalues above rank_tol * lambda_max.
// Columns follow decreasing eigenvalue; the first nonzero entry of each is
// nonnegative. Throws std::invalid_argument on negative weights or when Q is
// numerically zero.
Matrix imse_to_K(const QuadratureSpec& quad, double rank_tol = 1e-12);

}  // namespace aopt
