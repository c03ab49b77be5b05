#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "aopt/metrics.hpp"
#include "aopt/model.hpp"

namespace aopt {

enum class Algorithm { fb, fista, abcd_cyclic, abcd_randperm, vdm, mul };

// Command-line spelling: fb, fista, abcd-cy, abcd-rp, vdm, mul.
std::string_view to_string(Algorithm algorithm);
Algorithm parse_algorithm(std::string_view name);
const std::vector<Algorithm>& all_algorithms();

// FB, FISTA and both ABCD variants iterate on X; VDM and MUL on w.
bool is_estimator_space(Algorithm algorithm);

struct SolverConfig {
  Algorithm algorithm = Algorithm::fista;
  long max_iter = 100000;
  // Stop as soon as the duality bound eps_k <= tol. FB, FISTA and ABCD also
  // need F(X_k) - Phi(w_k) <= tol * Phi(w_k), which bounds F(X_k) - rho.
  double tol = 1e-7;
  // Backtracking multiplier (eta > 1) and initial constant L_0 > 0.
  double eta = 2.0;
  double l0 = 1.0;
  std::uint64_t seed = 0;
  // Certificates (and trace rows) every `trace_every` iterations.
  long trace_every = 1;
  // FB/FISTA only: constant step 1/trace(A Sigma A^T) instead of backtracking.
  bool fixed_step = false;
  // Wall-clock time in the trace. Off by default so traces are reproducible.
  bool record_timing = false;
  std::optional<EstimatorMatrix> warm_X;
  std::optional<Vector> warm_w;

  // Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
};

struct TraceRecord {
  long iter = 0;
  // Phi_{A_K} at the (recovered) design of this iterate.
  double objective = 0.0;
  double eps_bound = 0.0;
  // Nonzero columns of X (X-space) or positive weights (w-space).
  Index support = 0;
  // delta_{0.01}(w).
  Index delta001 = 0;
  // Current step constant L_k; 0 for methods without a line search.
  double step_L = 0.0;
  std::int64_t elapsed_ns = 0;

  bool operator==(const TraceRecord&) const = default;
};

struct SolveTrace {
  std::vector<TraceRecord> records;
};

struct SolveResult {
  Algorithm algorithm = Algorithm::fista;
  Design design = Design::uniform(1);
  // Phi_{A_K}(design).
  double objective = 0.0;
  DualityCertificate certificate;
  std::optional<EstimatorMatrix> estimator;
  // F(X) = f(X) + 2 sigma2N g(X) at the final estimator (X-space only).
  std::optional<double> composite;
  SolveTrace trace;
  // Largest certified lower bound Phi(w_k)(1 - eps_k) seen during the run.
  double rho_hint = 0.0;
  long iterations = 0;
  bool converged = false;
  // Final X had Omega(X) == 0, so `design` is the uniform placeholder.
  bool degenerate = false;
};

// Per-iteration view handed to observers. Pointers are only valid during the
// callback; `design` and `certificate` are null on iterations where no
// certificate was computed.
struct IterateInfo {
  long iter = 0;
  const EstimatorMatrix* X = nullptr;
  const Design* design = nullptr;
  const DualityCertificate* certificate = nullptr;
  // F(X_k) for X-space solvers, NaN otherwise.
  double composite = 0.0;
  double step_L = 0.0;
};

// ABCD single-block update: `X` already holds the new column `block`,
// `previous` is the column it replaced.
struct BlockEvent {
  long pass = 0;
  Index block = 0;
  const EstimatorMatrix& X;
  const Vector& previous;
};

struct SolveHooks {
  std::function<void(const IterateInfo&)> on_iterate;
  std::function<void(const BlockEvent&)> on_block;
};

// F(X) = f(X) + sigma2N * Omega(X)^2.
double composite_objective(const DesignProblem& problem, const EstimatorMatrix& X);

struct BacktrackResult {
  EstimatorMatrix P;
  double L = 0.0;
  int doublings = 0;
};

// One forward-backward step with backtracking: the smallest i such that
// L = eta^i L_prev and P = prox_{2 sigma2N g / L}(X - grad f(X) / L) satisfy
//   F(P) <= f(X) + <grad f(X), P - X> + 2 sigma2N g(P) + L/2 ||P - X||^2.
// Since f is quadratic the test is evaluated as curvature(P - X) <=
// L/2 ||P - X||^2, which is the same inequality without cancellation.
// Throws NumericalFailure after 100 doublings.
BacktrackResult backtrack_step(const DesignProblem& problem, const EstimatorMatrix& X_base,
                               double L_prev, double eta);
BacktrackResult backtrack_step(const DesignProblem& problem, const EstimatorMatrix& X_base,
                               const Matrix& grad, double L_prev, double eta);

// FISTA momentum: t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2.
double fista_next_t(double t);

struct FistaState {
  double t = 1.0;
  EstimatorMatrix Y;
  EstimatorMatrix X_prev;
};

// Data for minimizing F over column i with the other columns frozen.
struct BlockContext {
  // sum_{j != i} x_j a_j^T - K^T (r x n).
  Matrix R;
  // sum_{j != i} ||x_j||.
  double beta = 0.0;
};

// Exact minimizer of h_i(x) = ||(x a_i^T + R) Sigma^{1/2}||_F^2
//                            + sigma2N (||x|| + beta)^2.
Vector block_minimize(const DesignProblem& problem, Index i, const BlockContext& ctx);

// Same minimizer from the precomputed pieces g = R Sigma a_i and
// leverage = a_i^T Sigma a_i.
Vector block_minimizer(const Vector& g, double leverage, double beta, double sigma2N);

// w+ = (w .* d) / (w^T d), renormalized to sum exactly to one.
// Throws DegenerateInstance when w^T d == 0.
Vector mul_update(const Vector& w, const Vector& d);

SolveResult solve_fb(const DesignProblem& problem, const SolverConfig& config,
                     const SolveHooks& hooks = {});
SolveResult solve_fista(const DesignProblem& problem, const SolverConfig& config,
                        const SolveHooks& hooks = {});
SolveResult solve_abcd(const DesignProblem& problem, const SolverConfig& config,
                       const SolveHooks& hooks = {});
SolveResult solve_vdm(const DesignProblem& problem, const SolverConfig& config,
                      const SolveHooks& hooks = {});
SolveResult solve_mul(const DesignProblem& problem, const SolverConfig& config,
                      const SolveHooks& hooks = {});

// Dispatch on config.algorithm.
SolveResult solve(const DesignProblem& problem, const SolverConfig& config,
                  const SolveHooks& hooks = {});

}  // namespace aopt
