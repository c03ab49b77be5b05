#pragma once

#include <functional>

#include "aopt/model.hpp"

namespace aopt {

// Reference optimum, certified by the multiplicative algorithm:
// rho_lower <= rho_true <= rho.
struct ReferenceSolution {
  double rho = 0.0;
  double rho_lower = 0.0;
  double eps = 0.0;
  long iterations = 0;
  Design w_star = Design::uniform(1);
  // Optimal estimator for w_star (closed form, see estimator_for_design).
  EstimatorMatrix X_star;
};

// Runs MUL until eps <= tol. Throws NumericalFailure after max_iter.
ReferenceSolution reference_rho(const DesignProblem& problem, double tol = 1e-11,
                                long max_iter = 10'000'000);

// Slow reference for prox_{t g}(V), independent of the sorting algorithm.
// Uses (sum_i ||x_i||)^2 = min_{u in simplex} sum_i ||x_i||^2 / u_i to reduce
// the prox to the smooth simplex problem
//   min_u  1/2 sum_i ||v_i||^2 t / (t + u_i),
// solved by accelerated projected gradient until the gradient mapping drops
// below 1e-10; then x_i = u_i v_i / (u_i + t).
Matrix prox_oracle(const Matrix& V, double t);

// Euclidean projection onto the probability simplex.
Vector project_simplex(const Vector& y);

// Central differences, one coordinate at a time.
Matrix fd_gradient(const std::function<double(const Matrix&)>& fun, const Matrix& point,
                   double h);

}  // namespace aopt
