#pragma once

#include "aopt/model.hpp"

namespace aopt {

// Duality certificate for a design w. With d = -grad Phi(w) and
// s = max_i d_i - w^T d, every design satisfies
//   rho >= Phi(w)^2 / (Phi(w) + s),  i.e.  eff(w) >= 1 - eps.
struct DualityCertificate {
  Vector d;
  double s = 0.0;
  double eps = 0.0;
  double phi = 0.0;

  // Phi(w) (1 - eps): a certified lower bound on the optimal value.
  double lower_bound() const { return phi * (1.0 - eps); }
};

struct RecoveredDesign {
  Design design;
  // Omega(X) == 0: the recovery is undefined and `design` is uniform.
  bool degenerate = false;
};

// w_i = ||x_i|| / Omega(X).
RecoveredDesign design_from_estimator(const EstimatorMatrix& X);

DualityCertificate certificate(const DesignProblem& problem, const Design& design);
DualityCertificate certificate_from(const DesignEvaluation& eval, const Design& design);

// rho / Phi(w). Throws std::invalid_argument when Phi(w) == 0.
double efficiency(const DesignProblem& problem, const Design& design, double rho);

// delta_c(w): number of weights strictly above threshold_factor / m.
Index support_size(const Design& design, double threshold_factor = 0.01);

// Columns of X that are not exactly zero.
Index nonzero_columns(const EstimatorMatrix& X);

// Largest relative deviation, over columns with x_i != 0, between
// ||x_i||^2 / w_i^2 and Omega(X)^2 (the simplex KKT condition of the inner
// minimization over w). Throws std::invalid_argument if Omega(X) == 0 or if
// some support column carries zero weight.
double kkt_simplex_residual(const EstimatorMatrix& X, const Design& design);
double kkt_simplex_residual(const EstimatorMatrix& X, const DesignProblem& problem);

}  // namespace aopt
