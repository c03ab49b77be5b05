#include "aopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "aopt/errors.hpp"
#include "aopt/metrics.hpp"
#include "aopt/solvers.hpp"

namespace aopt {

ReferenceSolution reference_rho(const DesignProblem& problem, double tol, long max_iter) {
  SolverConfig config;
  config.algorithm = Algorithm::mul;
  config.tol = tol;
  config.max_iter = max_iter;
  config.trace_every = max_iter;
  const SolveResult run = solve_mul(problem, config);
  if (!run.converged)
    throw NumericalFailure("reference MUL run did not reach eps <= " + std::to_string(tol));
  ReferenceSolution ref;
  ref.rho = run.objective;
  ref.rho_lower = run.certificate.lower_bound();
  ref.eps = run.certificate.eps;
  ref.iterations = run.iterations;
  ref.X_star = estimator_for_design(problem, run.design);
  ref.w_star = run.design;
  return ref;
}

Vector project_simplex(const Vector& y) {
  const Index n = y.size();
  std::vector<double> sorted(y.data(), y.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Index j = 0; j < n; ++j) {
    cumulative += sorted[static_cast<std::size_t>(j)];
    const double candidate = (cumulative - 1.0) / static_cast<double>(j + 1);
    if (sorted[static_cast<std::size_t>(j)] - candidate > 0.0) theta = candidate;
  }
  return (y.array() - theta).max(0.0).matrix();
}

Matrix prox_oracle(const Matrix& V, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("prox step t must be positive");
  const Index m = V.cols();
  const Vector sq = V.colwise().squaredNorm().transpose();
  if (sq.maxCoeff() == 0.0) return Matrix::Zero(V.rows(), m);

  // phi(u) = 1/2 sum sq_i t / (t + u_i); phi'' <= sq_i / t^2 on the simplex.
  auto grad = [&](const Vector& u) -> Vector {
    return (-0.5 * t * sq.array() / (t + u.array()).square()).matrix();
  };
  const double lipschitz = sq.maxCoeff() / (t * t);
  const double step = 1.0 / lipschitz;

  Vector u = Vector::Constant(m, 1.0 / static_cast<double>(m));
  Vector y = u;
  double momentum = 1.0;
  for (long it = 0; it < 5'000'000; ++it) {
    const Vector next = project_simplex(y - step * grad(y));
    // Gradient-based restart: drop momentum when it points uphill.
    if ((y - next).dot(next - u) > 0.0) {
      y = next;
      momentum = 1.0;
    } else {
      const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
      y = next + ((momentum - 1.0) / next_momentum) * (next - u);
      momentum = next_momentum;
    }
    u = next;
    const Vector mapped = project_simplex(u - step * grad(u));
    if ((u - mapped).norm() * lipschitz <= 1e-10) break;
  }

  Matrix X(V.rows(), m);
  for (Index i = 0; i < m; ++i) X.col(i) = (u[i] / (u[i] + t)) * V.col(i);
  return X;
}

Matrix fd_gradient(const std::function<double(const Matrix&)>& fun, const Matrix& point,
                   double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  Matrix grad(point.rows(), point.cols());
  Matrix probe = point;
  for (Index j = 0; j < point.cols(); ++j) {
    for (Index i = 0; i < point.rows(); ++i) {
      const double saved = probe(i, j);
      probe(i, j) = saved + h;
      const double up = fun(probe);
      probe(i, j) = saved - h;
      const double down = fun(probe);
      probe(i, j) = saved;
      grad(i, j) = (up - down) / (2.0 * h);
    }
  }
  return grad;
}

}  // namespace aopt
