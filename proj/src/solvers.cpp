#include "aopt/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "aopt/errors.hpp"
#include "aopt/penalty.hpp"
#include "aopt/random.hpp"

namespace aopt {

namespace {

constexpr int kMaxDoublings = 100;

struct AlgorithmName {
  Algorithm algorithm;
  std::string_view name;
};

constexpr AlgorithmName kAlgorithmNames[] = {
    {Algorithm::fb, "fb"},           {Algorithm::fista, "fista"},
    {Algorithm::abcd_cyclic, "abcd-cy"}, {Algorithm::abcd_randperm, "abcd-rp"},
    {Algorithm::vdm, "vdm"},         {Algorithm::mul, "mul"},
};

class Stopwatch {
 public:
  explicit Stopwatch(bool enabled) : enabled_(enabled), start_(std::chrono::steady_clock::now()) {}
  std::int64_t elapsed_ns() const {
    if (!enabled_) return 0;
    return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() -
                                                                start_)
        .count();
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

void require_algorithm(const SolverConfig& config, std::initializer_list<Algorithm> allowed,
                       const char* solver) {
  config.validate();
  for (Algorithm a : allowed)
    if (config.algorithm == a) return;
  throw std::invalid_argument(std::string(solver) + " called with algorithm " +
                              std::string(to_string(config.algorithm)));
}

EstimatorMatrix initial_estimator(const DesignProblem& problem, const SolverConfig& config) {
  if (!config.warm_X) return Matrix::Zero(problem.r(), problem.m());
  if (config.warm_X->rows() != problem.r() || config.warm_X->cols() != problem.m())
    throw std::invalid_argument("warm-start X must be r x m");
  if (!config.warm_X->allFinite()) throw std::invalid_argument("warm-start X must be finite");
  return *config.warm_X;
}

Design initial_design(const DesignProblem& problem, const SolverConfig& config) {
  if (!config.warm_w) return Design::uniform(problem.m());
  if (config.warm_w->size() != problem.m())
    throw std::invalid_argument("warm-start w must have length m");
  return Design::renormalized(*config.warm_w);
}

bool certificate_due(long k, const SolverConfig& config) {
  return k % config.trace_every == 0 || k == config.max_iter;
}

// Shared driver for FB, FISTA and ABCD. `step(X, k)` advances X by one
// iteration in place and returns the step constant to report.
template <class Step>
SolveResult run_estimator_solver(const DesignProblem& problem, const SolverConfig& config,
                                 const SolveHooks& hooks, EstimatorMatrix X, Step&& step) {
  const Stopwatch clock(config.record_timing);
  SolveResult result;
  result.algorithm = config.algorithm;
  std::optional<RecoveredDesign> recovered;
  std::optional<DualityCertificate> cert;
  double best_lower = 0.0;

  long k = 1;
  for (;; ++k) {
    const double step_L = step(X, k);
    const bool due = certificate_due(k, config);
    if (due) {
      recovered = design_from_estimator(X);
      cert = certificate(problem, recovered->design);
      // The recovery is undefined at Omega(X) == 0: no certificate unless
      // the instance is trivial.
      if (recovered->degenerate && cert->phi > 0.0) cert->eps = 1.0;
      best_lower = std::max(best_lower, cert->lower_bound());
      result.trace.records.push_back({k, cert->phi, cert->eps, nonzero_columns(X),
                                      support_size(recovered->design), step_L,
                                      clock.elapsed_ns()});
    }
    if (hooks.on_iterate) {
      IterateInfo info;
      info.iter = k;
      info.X = &X;
      info.design = due ? &recovered->design : nullptr;
      info.certificate = due ? &*cert : nullptr;
      info.composite = composite_objective(problem, X);
      info.step_L = step_L;
      hooks.on_iterate(info);
    }
    // A certified design is not enough here: scaling X leaves w unchanged,
    // so also require F(X) to have come down to Phi(w) >= rho.
    if (due && cert->eps <= config.tol &&
        composite_objective(problem, X) - cert->phi <= config.tol * cert->phi) {
      result.converged = true;
      break;
    }
    if (k >= config.max_iter) break;
  }

  result.iterations = k;
  result.design = recovered->design;
  result.degenerate = recovered->degenerate;
  result.certificate = std::move(*cert);
  result.objective = result.certificate.phi;
  result.composite = composite_objective(problem, X);
  result.estimator = std::move(X);
  result.rho_hint = best_lower;
  return result;
}

// Shared driver for VDM and MUL. `update(w, eval, cert)` replaces w by the
// next iterate and returns the step constant to report.
template <class Update>
SolveResult run_design_solver(const DesignProblem& problem, const SolverConfig& config,
                              const SolveHooks& hooks, Update&& update) {
  const Stopwatch clock(config.record_timing);
  SolveResult result;
  result.algorithm = config.algorithm;

  Design w = initial_design(problem, config);
  DesignEvaluation eval = evaluate_design(problem, w);
  DualityCertificate cert = certificate_from(eval, w);
  double best_lower = cert.lower_bound();
  double step_L = 0.0;

  long k = 1;
  for (;; ++k) {
    // An already certified design is kept as is.
    if (cert.eps > config.tol) {
      step_L = update(w, eval, cert);
      eval = evaluate_design(problem, w);
      cert = certificate_from(eval, w);
      best_lower = std::max(best_lower, cert.lower_bound());
    }
    const bool done = cert.eps <= config.tol || k >= config.max_iter;
    if (certificate_due(k, config) || done) {
      result.trace.records.push_back({k, cert.phi, cert.eps,
                                      (w.weights().array() > 0.0).count(), support_size(w),
                                      step_L, clock.elapsed_ns()});
    }
    if (hooks.on_iterate) {
      IterateInfo info;
      info.iter = k;
      info.design = &w;
      info.certificate = &cert;
      info.composite = std::numeric_limits<double>::quiet_NaN();
      info.step_L = step_L;
      hooks.on_iterate(info);
    }
    if (done) {
      result.converged = cert.eps <= config.tol;
      break;
    }
  }

  result.iterations = k;
  result.design = std::move(w);
  result.certificate = std::move(cert);
  result.objective = result.certificate.phi;
  result.rho_hint = best_lower;
  return result;
}

// Fixed step: L = trace(A Sigma A^T), no search.
BacktrackResult fixed_step(const DesignProblem& problem, const EstimatorMatrix& X_base,
                           const Matrix& grad, double L) {
  BacktrackResult out;
  out.L = L;
  out.P = prox_g(X_base - grad / L, 2.0 * problem.sigma2N() / L).X;
  return out;
}

double lipschitz_or_throw(const DesignProblem& problem) {
  const double L = lipschitz_L(problem);
  if (!(L > 0.0)) throw std::invalid_argument("fixed step requires trace(A Sigma A^T) > 0");
  return L;
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  for (const auto& entry : kAlgorithmNames)
    if (entry.algorithm == algorithm) return entry.name;
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (const auto& entry : kAlgorithmNames)
    if (entry.name == name) return entry.algorithm;
  throw std::invalid_argument("unknown algorithm '" + std::string(name) +
                              "' (expected fb, fista, abcd-cy, abcd-rp, vdm or mul)");
}

const std::vector<Algorithm>& all_algorithms() {
  static const std::vector<Algorithm> all = {Algorithm::fb,          Algorithm::fista,
                                             Algorithm::abcd_cyclic, Algorithm::abcd_randperm,
                                             Algorithm::vdm,         Algorithm::mul};
  return all;
}

bool is_estimator_space(Algorithm algorithm) {
  return algorithm != Algorithm::vdm && algorithm != Algorithm::mul;
}

void SolverConfig::validate() const {
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(tol >= 0.0)) throw std::invalid_argument("tol must be >= 0");
  if (!(eta > 1.0) || !std::isfinite(eta)) throw std::invalid_argument("eta must be > 1");
  if (!(l0 > 0.0) || !std::isfinite(l0)) throw std::invalid_argument("l0 must be > 0");
  if (trace_every < 1) throw std::invalid_argument("trace_every must be >= 1");
  // Steps are alpha = 1/L; L >= 1 keeps VDM iterates on the simplex.
  if (algorithm == Algorithm::vdm && l0 < 1.0) throw std::invalid_argument("vdm requires l0 >= 1");
}

double composite_objective(const DesignProblem& problem, const EstimatorMatrix& X) {
  const double o = omega(X);
  return f_smooth(problem, X) + problem.sigma2N() * o * o;
}

BacktrackResult backtrack_step(const DesignProblem& problem, const EstimatorMatrix& X_base,
                               double L_prev, double eta) {
  return backtrack_step(problem, X_base, grad_f(problem, X_base), L_prev, eta);
}

BacktrackResult backtrack_step(const DesignProblem& problem, const EstimatorMatrix& X_base,
                               const Matrix& grad, double L_prev, double eta) {
  if (!(L_prev > 0.0)) throw std::invalid_argument("backtracking needs L_prev > 0");
  if (!(eta > 1.0)) throw std::invalid_argument("backtracking needs eta > 1");
  const double weight = 2.0 * problem.sigma2N();
  BacktrackResult out;
  double L = L_prev;
  for (int i = 0; i <= kMaxDoublings; ++i, L *= eta) {
    Matrix P = prox_g(X_base - grad / L, weight / L).X;
    const Matrix D = P - X_base;
    if (curvature(problem, D) <= 0.5 * L * D.squaredNorm()) {
      out.P = std::move(P);
      out.L = L;
      out.doublings = i;
      return out;
    }
  }
  throw NumericalFailure("backtracking line search did not terminate after " +
                         std::to_string(kMaxDoublings) + " increases");
}

double fista_next_t(double t) { return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t)); }

Vector block_minimizer(const Vector& g, double leverage, double beta, double sigma2N) {
  const double gnorm = g.norm();
  if (gnorm == 0.0) return Vector::Zero(g.size());
  const double shrink = std::max(1.0 - sigma2N * beta / gnorm, 0.0);
  if (shrink == 0.0) return Vector::Zero(g.size());
  return (-shrink / (leverage + sigma2N)) * g;
}

Vector block_minimize(const DesignProblem& problem, Index i, const BlockContext& ctx) {
  if (i < 0 || i >= problem.m()) throw std::invalid_argument("block index out of range");
  if (ctx.R.rows() != problem.r() || ctx.R.cols() != problem.n())
    throw std::invalid_argument("block context R must be r x n");
  if (!(ctx.beta >= 0.0)) throw std::invalid_argument("block context beta must be >= 0");
  const Vector g = ctx.R * problem.sigma_At().col(i);
  return block_minimizer(g, problem.leverage()[i], ctx.beta, problem.sigma2N());
}

Vector mul_update(const Vector& w, const Vector& d) {
  if (w.size() != d.size()) throw std::invalid_argument("w and d must have the same length");
  const double wd = w.dot(d);
  if (!(wd > 0.0))
    throw DegenerateInstance("multiplicative update needs w^T d > 0 (is K effectively zero?)");
  Vector next = w.cwiseProduct(d) / wd;
  next /= next.sum();
  return next;
}

SolveResult solve_fb(const DesignProblem& problem, const SolverConfig& config,
                     const SolveHooks& hooks) {
  require_algorithm(config, {Algorithm::fb}, "solve_fb");
  const double fixed_L = config.fixed_step ? lipschitz_or_throw(problem) : 0.0;
  double L = config.l0;
  return run_estimator_solver(problem, config, hooks, initial_estimator(problem, config),
                              [&](EstimatorMatrix& X, long) {
                                const Matrix grad = grad_f(problem, X);
                                BacktrackResult bt =
                                    config.fixed_step
                                        ? fixed_step(problem, X, grad, fixed_L)
                                        : backtrack_step(problem, X, grad, L, config.eta);
                                L = bt.L;
                                X = std::move(bt.P);
                                return L;
                              });
}

SolveResult solve_fista(const DesignProblem& problem, const SolverConfig& config,
                        const SolveHooks& hooks) {
  require_algorithm(config, {Algorithm::fista}, "solve_fista");
  const double fixed_L = config.fixed_step ? lipschitz_or_throw(problem) : 0.0;
  EstimatorMatrix X0 = initial_estimator(problem, config);
  FistaState state{1.0, X0, X0};
  double L = config.l0;
  return run_estimator_solver(problem, config, hooks, std::move(X0),
                              [&](EstimatorMatrix& X, long) {
                                const Matrix grad = grad_f(problem, state.Y);
                                BacktrackResult bt =
                                    config.fixed_step
                                        ? fixed_step(problem, state.Y, grad, fixed_L)
                                        : backtrack_step(problem, state.Y, grad, L, config.eta);
                                L = bt.L;
                                X = std::move(bt.P);
                                const double t_next = fista_next_t(state.t);
                                state.Y = X + ((state.t - 1.0) / t_next) * (X - state.X_prev);
                                state.X_prev = X;
                                state.t = t_next;
                                return L;
                              });
}

SolveResult solve_abcd(const DesignProblem& problem, const SolverConfig& config,
                       const SolveHooks& hooks) {
  require_algorithm(config, {Algorithm::abcd_cyclic, Algorithm::abcd_randperm}, "solve_abcd");
  const Index m = problem.m();
  const bool randomized = config.algorithm == Algorithm::abcd_randperm;
  const CounterRng rng = CounterRng(config.seed).derive(0xabcdULL);
  const Matrix& A = problem.A();
  const Matrix& SAt = problem.sigma_At();
  const Vector& lev = problem.leverage();
  const double s2 = problem.sigma2N();
  const Matrix Kt = problem.K().transpose();

  std::vector<std::size_t> order(static_cast<std::size_t>(m));
  for (Index i = 0; i < m; ++i) order[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);

  return run_estimator_solver(
      problem, config, hooks, initial_estimator(problem, config),
      [&](EstimatorMatrix& X, long pass) {
        if (randomized) order = rng.permutation(static_cast<std::size_t>(m),
                                                static_cast<std::uint64_t>(pass));
        // Running (XA - K^T) Sigma, refreshed once per pass to stop drift.
        Matrix P = (X * A - Kt) * problem.sigma();
        Vector norms = column_norms(X);
        double total = norms.sum();
        Vector previous(X.rows());
        for (std::size_t idx : order) {
          const auto i = static_cast<Index>(idx);
          previous = X.col(i);
          const Vector g = P * A.row(i).transpose() - lev[i] * previous;
          const double beta = std::max(total - norms[i], 0.0);
          const Vector next = block_minimizer(g, lev[i], beta, s2);
          P.noalias() += (next - previous) * SAt.col(i).transpose();
          const double next_norm = next.norm();
          total += next_norm - norms[i];
          norms[i] = next_norm;
          X.col(i) = next;
          if (hooks.on_block) hooks.on_block(BlockEvent{pass, i, X, previous});
        }
        return 0.0;
      });
}

SolveResult solve_vdm(const DesignProblem& problem, const SolverConfig& config,
                      const SolveHooks& hooks) {
  require_algorithm(config, {Algorithm::vdm}, "solve_vdm");
  const Matrix& A = problem.A();
  const double s2 = problem.sigma2N();
  double L = config.l0;
  return run_design_solver(
      problem, config, hooks,
      [&](Design& w, const DesignEvaluation& eval, const DualityCertificate& cert) {
        Index best = 0;
        eval.d.maxCoeff(&best);  // first maximizer on ties
        const Vector a = A.row(best).transpose();
        const Vector& weights = w.weights();
        const Matrix Gw = A.transpose() * weights.asDiagonal() * A;
        const Matrix& B = eval.MinvK;
        const Vector Bta = B.transpose() * a;
        const Matrix GwB = Gw * B;
        Vector to_vertex = -weights;
        to_vertex[best] += 1.0;
        const double dist2 = to_vertex.squaredNorm();

        for (int j = 0; j <= kMaxDoublings; ++j, L *= config.eta) {
          const double alpha = 1.0 / L;
          Matrix Mbar = problem.sigma_inv();
          Mbar.noalias() += ((1.0 - alpha) / s2) * Gw;
          Mbar.noalias() += (alpha / s2) * a * a.transpose();
          const Eigen::LLT<Matrix> chol(Mbar);
          if (chol.info() != Eigen::Success)
            throw NumericalFailure("information matrix lost positive definiteness");
          const Matrix Bbar = chol.solve(problem.K());
          // Phi(wbar) - Phi(w) = -trace(Bbar^T (Mbar - M) B) with
          // Mbar - M = alpha / s2 (a a^T - G_w); avoids cancellation.
          const double cross = (Bbar.transpose() * a).dot(Bta) -
                               (Bbar.array() * GwB.array()).sum();
          const double delta_phi = -(alpha / s2) * cross;
          const double lhs = delta_phi + alpha * cert.s;
          const double rhs = 0.5 * L * alpha * alpha * dist2;
          if (lhs <= rhs) {
            Vector next = (1.0 - alpha) * weights;
            next[best] += alpha;
            w = Design(std::move(next));
            return L;
          }
        }
        throw NumericalFailure("vdm backtracking did not terminate after " +
                               std::to_string(kMaxDoublings) + " increases");
      });
}

SolveResult solve_mul(const DesignProblem& problem, const SolverConfig& config,
                      const SolveHooks& hooks) {
  require_algorithm(config, {Algorithm::mul}, "solve_mul");
  return run_design_solver(problem, config, hooks,
                           [&](Design& w, const DesignEvaluation& eval, const DualityCertificate&) {
                             w = Design(mul_update(w.weights(), eval.d));
                             return 0.0;
                           });
}

SolveResult solve(const DesignProblem& problem, const SolverConfig& config,
                  const SolveHooks& hooks) {
  switch (config.algorithm) {
    case Algorithm::fb:
      return solve_fb(problem, config, hooks);
    case Algorithm::fista:
      return solve_fista(problem, config, hooks);
    case Algorithm::abcd_cyclic:
    case Algorithm::abcd_randperm:
      return solve_abcd(problem, config, hooks);
    case Algorithm::vdm:
      return solve_vdm(problem, config, hooks);
    case Algorithm::mul:
      return solve_mul(problem, config, hooks);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace aopt
