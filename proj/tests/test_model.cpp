#include <gtest/gtest.h>

#include "aopt/errors.hpp"
#include "aopt/model.hpp"
#include "aopt/oracle.hpp"
#include "test_util.hpp"

namespace aopt {
namespace {

using testing::LMatrix;

TEST(InfoMatrix, TwoPointIdentity) {
  const DesignProblem p = testing::two_point_problem();
  const InfoMatrix info = info_matrix(p, Design::uniform(2));
  EXPECT_TRUE(info.M.isApprox(1.5 * Matrix::Identity(2, 2), 1e-15));
}

TEST(InfoMatrix, VertexDesignIsSinglePointSum) {
  std::mt19937_64 gen(11);
  const DesignProblem p = testing::random_problem(5, 3, 2, 0.3, gen);
  const InfoMatrix info = info_matrix(p, Design::vertex(5, 2));
  const Vector a = p.A().row(2).transpose();
  const Matrix expected = p.sigma().inverse() + a * a.transpose() / 0.3;
  EXPECT_LT((info.M - expected).norm(), 1e-12 * expected.norm());
}

TEST(InfoMatrix, MatchesExtendedPrecisionSum) {
  std::mt19937_64 gen(12);
  const DesignProblem p = testing::random_problem(4, 3, 3, 0.5, gen);
  const Design w = Design::uniform(4);
  const LMatrix oracle = testing::info_oracle(p, w.weights());
  const Matrix M = info_matrix(p, w).M;
  EXPECT_LT((M.cast<long double>() - oracle).norm(), 1e-12L * oracle.norm());
}

TEST(Phi, TwoPointIdentity) {
  EXPECT_NEAR(phi_ak(testing::two_point_problem(), Design::uniform(2)), 4.0 / 3.0, 1e-15);
}

TEST(Phi, ZeroTarget) {
  std::mt19937_64 gen(13);
  const DesignProblem p(testing::gaussian(6, 3, gen), Matrix::Zero(3, 2),
                        testing::random_spd(3, gen), 0.1);
  EXPECT_TRUE(p.trivial_target());
  EXPECT_EQ(phi_ak(p, Design::uniform(6)), 0.0);
  EXPECT_EQ(grad_phi(p, Design::uniform(6)).norm(), 0.0);
}

TEST(Phi, MatchesDenseInverseOracle) {
  std::mt19937_64 gen(14);
  for (int trial = 0; trial < 10; ++trial) {
    const DesignProblem p = testing::random_problem(5, 3, 2, 0.05, gen);
    const Vector w = testing::random_simplex(5, gen);
    const double phi = phi_ak(p, Design(w));
    EXPECT_LT(testing::rel_err(phi, static_cast<double>(testing::phi_oracle(p, w))), 1e-10);
  }
}

TEST(GradPhi, TwoPointIdentity) {
  const Vector d = grad_phi(testing::two_point_problem(), Design::uniform(2));
  EXPECT_NEAR(d[0], 4.0 / 9.0, 1e-15);
  EXPECT_EQ(d[0], d[1]);
}

TEST(GradPhi, MatchesCentralDifferences) {
  std::mt19937_64 gen(15);
  const DesignProblem p = testing::random_problem(6, 3, 3, 0.2, gen);
  const Vector w = testing::random_simplex(6, gen);
  const Vector d = grad_phi(p, Design(w));
  const double h = 1e-6;
  for (Index i = 0; i < 6; ++i) {
    // Phi extends to the positive orthant through M(w), so off-simplex
    // perturbations are fine for the oracle.
    Vector wp = w, wm = w;
    wp[i] += h;
    wm[i] -= h;
    const double fd = -static_cast<double>(testing::phi_oracle(p, wp) - testing::phi_oracle(p, wm)) /
                      (2 * h);
    EXPECT_LT(testing::rel_err(d[i], fd), 1e-5) << "i = " << i;
  }
}

TEST(SmoothPart, ZeroEstimatorAndExactFit) {
  std::mt19937_64 gen(16);
  const DesignProblem p = testing::random_problem(5, 3, 2, 0.1, gen);
  const Matrix X0 = Matrix::Zero(2, 5);
  const double expected = (p.K().transpose() * p.sigma() * p.K()).trace();
  EXPECT_NEAR(f_smooth(p, X0), expected, 1e-12 * expected);

  // Minimum-norm solution of X A = K^T.
  const Matrix X = p.A().transpose().completeOrthogonalDecomposition().solve(p.K()).transpose();
  ASSERT_LT((X * p.A() - p.K().transpose()).norm(), 1e-10);
  EXPECT_NEAR(f_smooth(p, X), 0.0, 1e-18 + 1e-12 * expected);
  EXPECT_LT(grad_f(p, X).norm(), 1e-10);
}

TEST(SmoothPart, MatchesSquareRootOracle) {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 5; ++trial) {
    const DesignProblem p = testing::random_problem(4, 3, 3, 0.1, gen);
    const Matrix X = testing::gaussian(3, 4, gen);
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(p.sigma());
    const Matrix root = eig.operatorSqrt();
    const double oracle = ((X * p.A() - p.K().transpose()) * root).squaredNorm();
    EXPECT_LT(testing::rel_err(f_smooth(p, X), oracle), 1e-10);
  }
}

TEST(SmoothPart, GradientMatchesFiniteDifferences) {
  std::mt19937_64 gen(18);
  const DesignProblem p = testing::random_problem(5, 4, 2, 0.1, gen);
  const Matrix X = testing::gaussian(2, 5, gen);
  const Matrix fd = fd_gradient([&](const Matrix& Y) { return f_smooth(p, Y); }, X, 1e-5);
  const Matrix g = grad_f(p, X);
  for (Index j = 0; j < g.cols(); ++j)
    for (Index i = 0; i < g.rows(); ++i)
      EXPECT_LT(std::abs(g(i, j) - fd(i, j)), 1e-5 * std::max(1.0, std::abs(fd(i, j))));
  EXPECT_EQ(grad_f(p, Matrix::Zero(2, 5)).norm() > 0, true);
  const DesignProblem zero(p.A(), Matrix::Zero(4, 2), p.sigma(), 0.1);
  EXPECT_EQ(grad_f(zero, Matrix::Zero(2, 5)).norm(), 0.0);
}

TEST(SmoothPart, CurvatureIsExactSecondOrderTerm) {
  std::mt19937_64 gen(19);
  const DesignProblem p = testing::random_problem(6, 3, 2, 0.1, gen);
  const Matrix X = testing::gaussian(2, 6, gen);
  const Matrix D = testing::gaussian(2, 6, gen);
  const double lhs = f_smooth(p, X + D);
  const double rhs = f_smooth(p, X) + (grad_f(p, X).array() * D.array()).sum() + curvature(p, D);
  EXPECT_NEAR(lhs, rhs, 1e-10 * std::abs(lhs));
}

TEST(Lipschitz, Values) {
  EXPECT_DOUBLE_EQ(lipschitz_L(testing::two_point_problem()), 2.0);
  const DesignProblem zeroA = testing::identity_problem(Matrix::Zero(3, 2), 1.0);
  EXPECT_EQ(lipschitz_L(zeroA), 0.0);

  std::mt19937_64 gen(20);
  const DesignProblem p = testing::random_problem(10, 4, 2, 0.1, gen);
  long double sum = 0;
  for (Index i = 0; i < 10; ++i)
    for (Index a = 0; a < 4; ++a)
      for (Index b = 0; b < 4; ++b)
        sum += static_cast<long double>(p.A()(i, a)) * p.sigma()(a, b) * p.A()(i, b);
  EXPECT_LT(testing::rel_err(lipschitz_L(p), static_cast<double>(sum)), 1e-12);
}

TEST(EstimatorForDesign, AttainsPhiAsVariance) {
  // Phi(w) = min_X f(X) + sigma2N sum ||x_i||^2 / w_i, attained at X(w).
  std::mt19937_64 gen(21);
  const DesignProblem p = testing::random_problem(7, 3, 2, 0.2, gen);
  const Design w(testing::random_simplex(7, gen));
  const Matrix X = estimator_for_design(p, w);
  double weighted = 0.0;
  for (Index i = 0; i < 7; ++i) weighted += X.col(i).squaredNorm() / w[i];
  const double variance = f_smooth(p, X) + p.sigma2N() * weighted;
  EXPECT_LT(testing::rel_err(variance, phi_ak(p, w)), 1e-10);
}

TEST(Validation, RejectsBadInputs) {
  const Matrix I = Matrix::Identity(2, 2);
  EXPECT_THROW(DesignProblem(I, I, I, 0.0), InvalidProblem);
  EXPECT_THROW(DesignProblem(I, Matrix::Identity(3, 3), I, 1.0), InvalidProblem);
  Matrix asym = I;
  asym(0, 1) = 0.5;
  EXPECT_THROW(DesignProblem(I, I, asym, 1.0), InvalidProblem);
  Matrix indefinite = I;
  indefinite(1, 1) = -1.0;
  EXPECT_THROW(DesignProblem(I, I, indefinite, 1.0), InvalidProblem);
  Matrix nan = I;
  nan(0, 0) = std::nan("");
  EXPECT_THROW(DesignProblem(nan, I, I, 1.0), InvalidProblem);

  EXPECT_THROW(Design(Vector::Constant(2, 0.6)), std::invalid_argument);
  Vector negative(2);
  negative << 1.5, -0.5;
  EXPECT_THROW(Design{negative}, std::invalid_argument);
}

}  // namespace
}  // namespace aopt
