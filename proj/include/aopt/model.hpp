#pragma once

#include <Eigen/Cholesky>

#include "aopt/types.hpp"

namespace aopt {

// Bayes A_K-optimal design instance:
//
//   minimize_{w in simplex}  trace K^T M(w)^{-1} K,
//   M(w) = Sigma^{-1} + (1/sigma2N) * sum_i w_i a_i a_i^T,
//
// where a_i^T is row i of A (m x n), K is n x r and Sigma is the n x n prior
// covariance. Immutable after construction; the quantities every solver
// needs (Sigma factor, Sigma^{-1}, Sigma A^T, a_i^T Sigma a_i) are cached.
class DesignProblem {
 public:
  // Validates dimensions, finiteness, symmetry of Sigma (relative 1e-12),
  // positive definiteness and sigma2N > 0. Sigma is symmetrized after the
  // check. Throws InvalidProblem.
  DesignProblem(Matrix A, Matrix K, Matrix Sigma, double sigma2N);

  Index m() const { return A_.rows(); }
  Index n() const { return A_.cols(); }
  Index r() const { return K_.cols(); }

  const Matrix& A() const { return A_; }
  const Matrix& K() const { return K_; }
  const Matrix& sigma() const { return sigma_; }
  double sigma2N() const { return sigma2N_; }

  const Eigen::LLT<Matrix>& sigma_factor() const { return sigma_llt_; }
  // Sigma^{-1}, obtained from the Cholesky factor by triangular solves.
  const Matrix& sigma_inv() const { return sigma_inv_; }
  // Sigma A^T (n x m); column i is Sigma a_i.
  const Matrix& sigma_At() const { return sigma_At_; }
  // a_i^T Sigma a_i for every design point.
  const Vector& leverage() const { return leverage_; }

  // True when K is identically zero (every design is optimal, Phi == 0).
  bool trivial_target() const { return trivial_target_; }

 private:
  Matrix A_;
  Matrix K_;
  Matrix sigma_;
  double sigma2N_;
  Eigen::LLT<Matrix> sigma_llt_;
  Matrix sigma_inv_;
  Matrix sigma_At_;
  Vector leverage_;
  bool trivial_target_ = false;
};

// A point of the probability simplex over the m design points.
class Design {
 public:
  static constexpr double kSumTolerance = 1e-9;

  // Requires w >= 0 and |sum w - 1| <= 1e-9; throws std::invalid_argument.
  explicit Design(Vector w);

  static Design uniform(Index m);
  static Design vertex(Index m, Index i);
  // Like the constructor, but divides by the sum once after validation.
  static Design renormalized(Vector w);

  const Vector& weights() const { return w_; }
  Index size() const { return w_.size(); }
  double operator[](Index i) const { return w_[i]; }

 private:
  Vector w_;
};

// M_N(w) together with its Cholesky factor.
struct InfoMatrix {
  Matrix M;
  Eigen::LLT<Matrix> chol;
};

// Everything obtainable from one factorization of M_N(w).
struct DesignEvaluation {
  double phi = 0.0;
  // d_i = ||K^T M^{-1} a_i||^2 / sigma2N, the negated gradient of Phi.
  Vector d;
  // M^{-1} K (n x r).
  Matrix MinvK;
};

InfoMatrix info_matrix(const DesignProblem& problem, const Design& design);

// Phi_{A_K}(w) = trace K^T M_N(w)^{-1} K.
double phi_ak(const DesignProblem& problem, const Design& design);

// d = -grad Phi_{A_K}(w), all entries nonnegative.
Vector grad_phi(const DesignProblem& problem, const Design& design);

DesignEvaluation evaluate_design(const DesignProblem& problem, const Design& design);
DesignEvaluation evaluate_info(const DesignProblem& problem, const InfoMatrix& info);

// f(X) = ||(XA - K^T) Sigma^{1/2}||_F^2, evaluated in trace form.
double f_smooth(const DesignProblem& problem, const EstimatorMatrix& X);

// grad f(X) = 2 (XA - K^T) Sigma A^T.
Matrix grad_f(const DesignProblem& problem, const EstimatorMatrix& X);

// trace(A Sigma A^T). Zero only when A == 0.
double lipschitz_L(const DesignProblem& problem);

// ||D A Sigma^{1/2}||_F^2 for a displacement D (r x m): the exact second-order
// term of f, f(X + D) = f(X) + <grad f(X), D> + curvature(D).
double curvature(const DesignProblem& problem, const Matrix& D);

// Optimal linear estimator for a fixed design:
// X(w) = K^T M_N(w)^{-1} A^T Diag(w) / sigma2N. Minimizes the variance
// objective for that design; at an optimal design it solves the group-lasso
// reformulation.
EstimatorMatrix estimator_for_design(const DesignProblem& problem, const Design& design);

}  // namespace aopt
