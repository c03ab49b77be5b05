#include "aopt/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "aopt/errors.hpp"

namespace aopt {

namespace {

std::string shape(const Matrix& M) {
  return std::to_string(M.rows()) + "x" + std::to_string(M.cols());
}

}  // namespace

DesignProblem::DesignProblem(Matrix A, Matrix K, Matrix Sigma, double sigma2N)
    : A_(std::move(A)), K_(std::move(K)), sigma_(std::move(Sigma)), sigma2N_(sigma2N) {
  if (A_.rows() < 1 || A_.cols() < 1) throw InvalidProblem("A must be at least 1x1, got " + shape(A_));
  const Index n = A_.cols();
  if (K_.rows() != n || K_.cols() < 1)
    throw InvalidProblem("K must be n x r with n = " + std::to_string(n) + ", got " + shape(K_));
  if (sigma_.rows() != n || sigma_.cols() != n)
    throw InvalidProblem("Sigma must be n x n with n = " + std::to_string(n) + ", got " + shape(sigma_));
  if (!std::isfinite(sigma2N_) || sigma2N_ <= 0.0)
    throw InvalidProblem("sigma2N must be positive and finite");
  if (!A_.allFinite() || !K_.allFinite() || !sigma_.allFinite())
    throw InvalidProblem("A, K and Sigma must have finite entries");

  const double scale = sigma_.cwiseAbs().maxCoeff();
  const double asym = (sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) throw InvalidProblem("Sigma is not symmetric");
  sigma_ = (0.5 * (sigma_ + sigma_.transpose())).eval();

  sigma_llt_.compute(sigma_);
  if (sigma_llt_.info() != Eigen::Success) throw InvalidProblem("Sigma is not positive definite");
  // LLT can succeed on semidefinite input with a zero pivot; reject those.
  const Vector pivots = sigma_llt_.matrixL().toDenseMatrix().diagonal();
  if ((pivots.array() <= 0.0).any() || !pivots.allFinite())
    throw InvalidProblem("Sigma is not positive definite");

  sigma_inv_ = sigma_llt_.solve(Matrix::Identity(n, n));
  sigma_inv_ = (0.5 * (sigma_inv_ + sigma_inv_.transpose())).eval();
  sigma_At_ = sigma_ * A_.transpose();
  leverage_ = (A_.transpose().array() * sigma_At_.array()).colwise().sum().transpose();
  trivial_target_ = K_.isZero(0.0);
}

Design::Design(Vector w) : w_(std::move(w)) {
  if (w_.size() < 1) throw std::invalid_argument("design must have at least one point");
  if (!w_.allFinite()) throw std::invalid_argument("design weights must be finite");
  if ((w_.array() < 0.0).any()) throw std::invalid_argument("design weights must be nonnegative");
  if (std::abs(w_.sum() - 1.0) > kSumTolerance)
    throw std::invalid_argument("design weights must sum to one");
}

Design Design::uniform(Index m) {
  if (m < 1) throw std::invalid_argument("design must have at least one point");
  return Design(Vector::Constant(m, 1.0 / static_cast<double>(m)));
}

Design Design::vertex(Index m, Index i) {
  if (i < 0 || i >= m) throw std::invalid_argument("vertex index out of range");
  Vector w = Vector::Zero(m);
  w[i] = 1.0;
  return Design(std::move(w));
}

Design Design::renormalized(Vector w) {
  Design checked(std::move(w));
  Vector v = checked.w_ / checked.w_.sum();
  checked.w_ = std::move(v);
  return checked;
}

InfoMatrix info_matrix(const DesignProblem& problem, const Design& design) {
  if (design.size() != problem.m())
    throw std::invalid_argument("design length does not match the number of design points");
  const Matrix& A = problem.A();
  Matrix M = problem.sigma_inv();
  M.noalias() += (A.transpose() * design.weights().asDiagonal() * A) / problem.sigma2N();
  M = (0.5 * (M + M.transpose())).eval();
  InfoMatrix info{std::move(M), {}};
  info.chol.compute(info.M);
  if (info.chol.info() != Eigen::Success)
    throw InvalidProblem("information matrix is not positive definite");
  return info;
}

DesignEvaluation evaluate_info(const DesignProblem& problem, const InfoMatrix& info) {
  DesignEvaluation eval;
  eval.MinvK = info.chol.solve(problem.K());
  eval.phi = (problem.K().array() * eval.MinvK.array()).sum();
  // K^T M^{-1} a_i is row i of A (M^{-1} K).
  const Matrix rows = problem.A() * eval.MinvK;
  eval.d = rows.rowwise().squaredNorm() / problem.sigma2N();
  return eval;
}

DesignEvaluation evaluate_design(const DesignProblem& problem, const Design& design) {
  return evaluate_info(problem, info_matrix(problem, design));
}

double phi_ak(const DesignProblem& problem, const Design& design) {
  const InfoMatrix info = info_matrix(problem, design);
  const Matrix Z = info.chol.solve(problem.K());
  return (problem.K().array() * Z.array()).sum();
}

Vector grad_phi(const DesignProblem& problem, const Design& design) {
  return evaluate_design(problem, design).d;
}

namespace {

void check_estimator(const DesignProblem& problem, const Matrix& X) {
  if (X.rows() != problem.r() || X.cols() != problem.m())
    throw std::invalid_argument("estimator must be r x m");
}

}  // namespace

double f_smooth(const DesignProblem& problem, const EstimatorMatrix& X) {
  check_estimator(problem, X);
  const Matrix R = X * problem.A() - problem.K().transpose();
  return ((R * problem.sigma()).array() * R.array()).sum();
}

Matrix grad_f(const DesignProblem& problem, const EstimatorMatrix& X) {
  check_estimator(problem, X);
  const Matrix R = X * problem.A() - problem.K().transpose();
  return 2.0 * R * problem.sigma_At();
}

double lipschitz_L(const DesignProblem& problem) { return problem.leverage().sum(); }

double curvature(const DesignProblem& problem, const Matrix& D) {
  check_estimator(problem, D);
  const Matrix DA = D * problem.A();
  return ((DA * problem.sigma()).array() * DA.array()).sum();
}

EstimatorMatrix estimator_for_design(const DesignProblem& problem, const Design& design) {
  const InfoMatrix info = info_matrix(problem, design);
  const Matrix MinvK = info.chol.solve(problem.K());
  // Row i of A M^{-1} K is (K^T M^{-1} a_i)^T.
  Matrix X = (problem.A() * MinvK).transpose();
  X *= (design.weights() / problem.sigma2N()).asDiagonal();
  return X;
}

}  // namespace aopt
