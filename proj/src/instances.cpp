#include "aopt/instances.hpp"

#include <Eigen/Eigenvalues>
#include <limits>
#include <stdexcept>

#include "aopt/random.hpp"

namespace aopt {

DesignProblem gen_random(Index m, Index n, std::uint64_t seed, double sigma2N) {
  if (m < 1 || n < 1) throw std::invalid_argument("gen_random needs m, n >= 1");
  // Key the stream on the shape too, so no two shapes share a prefix.
  const CounterRng rng = CounterRng(seed)
                             .derive(static_cast<std::uint64_t>(m))
                             .derive(static_cast<std::uint64_t>(n));
  Matrix A(m, n);
  std::uint64_t counter = 0;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) A(i, j) = rng.normal(counter++);
  return DesignProblem(std::move(A), Matrix::Identity(n, n), Matrix::Identity(n, n), sigma2N);
}

Index quadreg_dimension(Index d) { return 1 + d + d * (d + 1) / 2; }

Vector quadreg_features(const Vector& x) {
  const Index d = x.size();
  Vector phi(quadreg_dimension(d));
  Index k = 0;
  phi[k++] = 1.0;
  for (Index i = 0; i < d; ++i) phi[k++] = x[i];
  for (Index i = 0; i < d; ++i)
    for (Index j = i; j < d; ++j) phi[k++] = x[i] * x[j];
  return phi;
}

DesignProblem gen_quadreg(Index d, Index points_per_dim, std::uint64_t /*seed*/, double sigma2N) {
  if (d < 1) throw std::invalid_argument("gen_quadreg needs d >= 1");
  if (points_per_dim < 2) throw std::invalid_argument("gen_quadreg needs at least 2 points per axis");
  // Cap the grid well below what a dense m x n matrix could hold.
  constexpr Index kMaxPoints = Index{1} << 26;
  Index m = 1;
  for (Index i = 0; i < d; ++i) {
    if (m > kMaxPoints / points_per_dim) throw std::invalid_argument("grid size overflows");
    m *= points_per_dim;
  }
  const Index n = quadreg_dimension(d);
  const double step = 2.0 / static_cast<double>(points_per_dim - 1);

  Matrix A(m, n);
  Vector x(d);
  std::vector<Index> digits(static_cast<std::size_t>(d), 0);
  for (Index row = 0; row < m; ++row) {
    for (Index i = 0; i < d; ++i) {
      const Index digit = digits[static_cast<std::size_t>(i)];
      // Exact endpoints; symmetric nodes stay symmetric.
      x[i] = (digit == points_per_dim - 1) ? 1.0 : -1.0 + step * static_cast<double>(digit);
    }
    A.row(row) = quadreg_features(x).transpose();
    for (Index i = d - 1; i >= 0; --i) {
      auto& digit = digits[static_cast<std::size_t>(i)];
      if (++digit < points_per_dim) break;
      digit = 0;
    }
  }
  return DesignProblem(std::move(A), Matrix::Identity(n, n), Matrix::Identity(n, n), sigma2N);
}

Matrix imse_to_K(const QuadratureSpec& quad, double rank_tol) {
  const Index q = quad.points.rows();
  if (q < 1 || quad.points.cols() < 1) throw std::invalid_argument("quadrature needs at least one node");
  if (quad.weights.size() != q) throw std::invalid_argument("one weight per quadrature node");
  if ((quad.weights.array() < 0.0).any() || !quad.weights.allFinite())
    throw std::invalid_argument("quadrature weights must be nonnegative");
  if (!(rank_tol >= 0.0)) throw std::invalid_argument("rank_tol must be >= 0");

  const Matrix Q = quad.points.transpose() * quad.weights.asDiagonal() * quad.points;
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(Q);
  if (eig.info() != Eigen::Success) throw std::invalid_argument("moment matrix eigensolver failed");
  const Vector& lambda = eig.eigenvalues();  // ascending
  const double lambda_max = lambda.maxCoeff();
  const double scale = Q.cwiseAbs().maxCoeff();
  if (!(lambda_max > std::numeric_limits<double>::epsilon() * scale) || !(scale > 0.0))
    throw std::invalid_argument("moment matrix is numerically zero");

  const double cutoff = rank_tol * lambda_max;
  std::vector<Index> kept;
  for (Index j = lambda.size() - 1; j >= 0; --j)
    if (lambda[j] > cutoff && lambda[j] > 0.0) kept.push_back(j);

  Matrix K(Q.rows(), static_cast<Index>(kept.size()));
  for (Index c = 0; c < K.cols(); ++c) {
    const Index j = kept[static_cast<std::size_t>(c)];
    Vector v = eig.eigenvectors().col(j);
    const double tiny = 1e-12 * v.cwiseAbs().maxCoeff();
    for (Index i = 0; i < v.size(); ++i) {
      if (std::abs(v[i]) > tiny) {
        if (v[i] < 0.0) v = -v;
        break;
      }
    }
    K.col(c) = std::sqrt(lambda[j]) * v;
  }
  return K;
}

}  // namespace aopt
