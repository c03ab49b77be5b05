#include "aopt/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aopt/penalty.hpp"

namespace aopt {

RecoveredDesign design_from_estimator(const EstimatorMatrix& X) {
  const Vector norms = column_norms(X);
  const double total = norms.sum();
  if (!(total > 0.0)) return {Design::uniform(X.cols()), true};
  return {Design::renormalized(norms / total), false};
}

DualityCertificate certificate_from(const DesignEvaluation& eval, const Design& design) {
  DualityCertificate cert;
  cert.d = eval.d;
  cert.phi = eval.phi;
  cert.s = eval.d.maxCoeff() - design.weights().dot(eval.d);
  const double denom = cert.phi + cert.s;
  cert.eps = denom > 0.0 ? std::clamp(cert.s / denom, 0.0, 1.0) : 0.0;
  return cert;
}

DualityCertificate certificate(const DesignProblem& problem, const Design& design) {
  return certificate_from(evaluate_design(problem, design), design);
}

double efficiency(const DesignProblem& problem, const Design& design, double rho) {
  const double phi = phi_ak(problem, design);
  if (!(phi > 0.0)) throw std::invalid_argument("efficiency is undefined when Phi == 0");
  return rho / phi;
}

Index support_size(const Design& design, double threshold_factor) {
  const double threshold = threshold_factor / static_cast<double>(design.size());
  return (design.weights().array() > threshold).count();
}

Index nonzero_columns(const EstimatorMatrix& X) {
  Index count = 0;
  for (Index i = 0; i < X.cols(); ++i)
    if (!X.col(i).isZero(0.0)) ++count;
  return count;
}

double kkt_simplex_residual(const EstimatorMatrix& X, const Design& design) {
  if (design.size() != X.cols()) throw std::invalid_argument("design length must equal X.cols()");
  const Vector norms = column_norms(X);
  const double total = norms.sum();
  if (!(total > 0.0)) throw std::invalid_argument("KKT residual is undefined when Omega(X) == 0");
  const double target = total * total;
  double worst = 0.0;
  for (Index i = 0; i < X.cols(); ++i) {
    if (norms[i] == 0.0) continue;
    const double wi = design[i];
    if (!(wi > 0.0)) throw std::invalid_argument("support column carries zero weight");
    const double partial = (norms[i] * norms[i]) / (wi * wi);
    worst = std::max(worst, std::abs(partial - target) / target);
  }
  return worst;
}

double kkt_simplex_residual(const EstimatorMatrix& X, const DesignProblem& problem) {
  if (X.rows() != problem.r() || X.cols() != problem.m())
    throw std::invalid_argument("estimator must be r x m");
  const RecoveredDesign rec = design_from_estimator(X);
  if (rec.degenerate) throw std::invalid_argument("KKT residual is undefined when Omega(X) == 0");
  return kkt_simplex_residual(X, rec.design);
}

}  // namespace aopt
