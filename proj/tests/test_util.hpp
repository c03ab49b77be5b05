#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "aopt/model.hpp"

// Test-side randomness is a plain std::mt19937_64 so the library generator is
// never its own oracle.
namespace aopt::testing {

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

inline Matrix gaussian(Index rows, Index cols, std::mt19937_64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) out(i, j) = normal(gen);
  return out;
}

// Well-conditioned SPD matrix B B^T / n + 0.5 I.
inline Matrix random_spd(Index n, std::mt19937_64& gen) {
  const Matrix B = gaussian(n, n, gen);
  Matrix S = B * B.transpose() / static_cast<double>(n);
  S.diagonal().array() += 0.5;
  return 0.5 * (S + S.transpose());
}

inline Vector random_simplex(Index m, std::mt19937_64& gen) {
  std::exponential_distribution<double> expo(1.0);
  Vector w(m);
  for (Index i = 0; i < m; ++i) w[i] = expo(gen);
  return w / w.sum();
}

// General instance: Gaussian A, Gaussian K (n x r), random SPD Sigma.
inline DesignProblem random_problem(Index m, Index n, Index r, double sigma2N,
                                    std::mt19937_64& gen) {
  return DesignProblem(gaussian(m, n, gen), gaussian(n, r, gen), random_spd(n, gen), sigma2N);
}

inline DesignProblem identity_problem(const Matrix& A, double sigma2N) {
  const Index n = A.cols();
  return DesignProblem(A, Matrix::Identity(n, n), Matrix::Identity(n, n), sigma2N);
}

// Two points e1, e2 in R^2 with K = Sigma = I and sigma2N = 1.
inline DesignProblem two_point_problem() {
  return identity_problem(Matrix::Identity(2, 2), 1.0);
}

// M(w) by explicit summation in extended precision.
inline LMatrix info_oracle(const DesignProblem& p, const Vector& w) {
  const Index n = p.n();
  LMatrix M = p.sigma().cast<long double>().inverse();
  for (Index i = 0; i < p.m(); ++i) {
    const LVector a = p.A().row(i).transpose().cast<long double>();
    M += (static_cast<long double>(w[i]) / p.sigma2N()) * a * a.transpose();
  }
  (void)n;
  return M;
}

inline long double phi_oracle(const DesignProblem& p, const Vector& w) {
  const LMatrix Minv = info_oracle(p, w).inverse();
  const LMatrix K = p.K().cast<long double>();
  return (K.transpose() * Minv * K).trace();
}

inline double rel_err(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

}  // namespace aopt::testing
