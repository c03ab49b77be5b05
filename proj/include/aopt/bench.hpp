#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aopt/oracle.hpp"
#include "aopt/solvers.hpp"

namespace aopt {

struct BenchOptions {
  std::vector<Algorithm> algorithms;
  long iters = 5000;
  // Early stop on eps <= tol; 0 runs the full iteration budget.
  double tol = 0.0;
  double ref_tol = 1e-11;
  double eta = 2.0;
  double l0 = 1.0;
  std::uint64_t seed = 0;
  long trace_every = 1;
  bool record_timing = false;
  // Worker threads; 0 picks min(#algorithms, AOPT_THREADS or hardware).
  unsigned threads = 0;
};

inline constexpr std::array<int, 3> kEfficiencyDigits = {2, 4, 6};

struct BenchRun {
  Algorithm algorithm = Algorithm::fista;
  SolveResult result;
  // First iteration reaching efficiency 1 - 10^-k for k = 2, 4, 6; -1 if never.
  std::array<long, 3> iters_to_efficiency{-1, -1, -1};
};

struct BenchSummary {
  ReferenceSolution reference;
  std::vector<BenchRun> runs;
};

// rho / Phi, with 0/0 read as 1 (K == 0: every design is optimal).
double trace_efficiency(double rho, double objective);

// First trace iteration with efficiency >= 1 - 10^-digits, or -1.
long iterations_to_efficiency(const SolveTrace& trace, double rho, int digits);

// Worker count: requested if nonzero, else AOPT_THREADS, else hardware
// concurrency; always within [1, jobs].
unsigned bench_threads(unsigned requested, std::size_t jobs);

// Fixed color per algorithm, shared by every panel.
std::string algorithm_color(Algorithm algorithm);

BenchSummary run_bench(const DesignProblem& problem, const BenchOptions& options);

// Writes trace_<algo>.csv per run, summary.json, summary.csv and the three
// panels efficiency.svg, duality_bound.svg, support.svg.
void write_bench_outputs(const BenchSummary& summary, const std::filesystem::path& dir);

}  // namespace aopt
