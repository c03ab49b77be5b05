#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "aopt/bench.hpp"
#include "aopt/errors.hpp"
#include "aopt/instances.hpp"
#include "aopt/io.hpp"
#include "aopt/solvers.hpp"

namespace aopt::cli {

namespace {

struct GenRandomArgs {
  long m = 0;
  long n = 0;
  std::uint64_t seed = 0;
  double sigma2N = kDefaultSigma2N;
  std::string out;
};

struct GenQuadregArgs {
  long d = 0;
  long grid = 0;
  std::uint64_t seed = 0;
  double sigma2N = kDefaultSigma2N;
  std::string out;
};

struct SolveArgs {
  std::string instance;
  std::string algo = "fista";
  double tol = 1e-7;
  long max_iter = 100000;
  double eta = 2.0;
  double l0 = 1.0;
  std::uint64_t seed = 0;
  long trace_every = 1;
  std::string trace;
  std::string result;
  bool fixed_step = false;
  bool timing = false;
};

struct BenchArgs {
  std::string instance;
  std::string algos = "fb,fista,abcd-cy,abcd-rp,vdm,mul";
  long iters = 5000;
  std::string out;
  double tol = 0.0;
  double ref_tol = 1e-11;
  double eta = 2.0;
  double l0 = 1.0;
  std::uint64_t seed = 0;
  long trace_every = 1;
  unsigned threads = 0;
  bool timing = false;
};

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path);
  file << text;
  if (!file) throw std::runtime_error("error writing " + path);
}

std::vector<Algorithm> parse_algorithm_list(const std::string& list) {
  std::vector<Algorithm> algos;
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name.empty()) continue;
    const Algorithm a = parse_algorithm(name);
    if (std::find(algos.begin(), algos.end(), a) == algos.end()) algos.push_back(a);
  }
  if (algos.empty()) throw std::invalid_argument("--algos lists no algorithm");
  return algos;
}

// Post-run sanity checks; any failure turns into a nonzero exit code.
void check_result(const SolveResult& result) {
  const auto& records = result.trace.records;
  if (records.empty()) throw NumericalFailure("solver produced an empty trace");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TraceRecord& rec = records[i];
    if (i > 0 && rec.iter <= records[i - 1].iter) throw NumericalFailure("trace iterations not increasing");
    if (!(rec.objective >= 0.0) || !(rec.eps_bound >= 0.0 && rec.eps_bound <= 1.0))
      throw NumericalFailure("trace record violates objective/eps bounds");
  }
  const DualityCertificate& cert = result.certificate;
  if (!(cert.eps >= 0.0 && cert.eps <= 1.0)) throw NumericalFailure("final eps outside [0, 1]");
  if (cert.s < -1e-12 * std::max(1.0, cert.phi)) throw NumericalFailure("negative duality gap");
  // Recovered designs are validated on construction; recheck the sum anyway.
  if (std::abs(result.design.weights().sum() - 1.0) > Design::kSumTolerance)
    throw NumericalFailure("final design left the simplex");
}

std::string provenance_of(const std::string& name, const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string p = "aopt gen " + name;
  for (const auto& [k, v] : kv) p += " --" + k + " " + v;
  return p;
}

std::string fmt_sigma(double v) { return format_double(v); }

int cmd_gen_random(const GenRandomArgs& a, std::ostream& out) {
  const DesignProblem problem = gen_random(a.m, a.n, a.seed, a.sigma2N);
  const std::string prov =
      provenance_of("random", {{"m", std::to_string(a.m)}, {"n", std::to_string(a.n)},
                               {"seed", std::to_string(a.seed)}, {"sigma2n", fmt_sigma(a.sigma2N)}});
  write_output(a.out, dump_instance(problem, prov), out);
  return 0;
}

int cmd_gen_quadreg(const GenQuadregArgs& a, std::ostream& out) {
  const DesignProblem problem = gen_quadreg(a.d, a.grid, a.seed, a.sigma2N);
  const std::string prov =
      provenance_of("quadreg", {{"d", std::to_string(a.d)}, {"grid", std::to_string(a.grid)},
                                {"seed", std::to_string(a.seed)}, {"sigma2n", fmt_sigma(a.sigma2N)}});
  write_output(a.out, dump_instance(problem, prov), out);
  return 0;
}

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  const InstanceFile inst = load_instance(a.instance);
  SolverConfig config;
  config.algorithm = parse_algorithm(a.algo);
  config.tol = a.tol;
  config.max_iter = a.max_iter;
  config.eta = a.eta;
  config.l0 = a.l0;
  config.seed = a.seed;
  config.trace_every = a.trace_every;
  config.fixed_step = a.fixed_step;
  config.record_timing = a.timing;
  const SolveResult result = solve(inst.problem, config);
  check_result(result);
  if (!a.trace.empty()) write_output(a.trace, trace_to_csv(result.trace), out);
  write_output(a.result, result_to_json(result).dump(2) + "\n", out);
  return 0;
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  const InstanceFile inst = load_instance(a.instance);
  BenchOptions options;
  options.algorithms = parse_algorithm_list(a.algos);
  options.iters = a.iters;
  options.tol = a.tol;
  options.ref_tol = a.ref_tol;
  options.eta = a.eta;
  options.l0 = a.l0;
  options.seed = a.seed;
  options.trace_every = a.trace_every;
  options.threads = a.threads;
  options.record_timing = a.timing;
  const BenchSummary summary = run_bench(inst.problem, options);
  for (const BenchRun& run : summary.runs) check_result(run.result);
  write_bench_outputs(summary, a.out);

  out << "reference rho = " << format_double(summary.reference.rho) << " (eps "
      << summary.reference.eps << ", " << summary.reference.iterations << " MUL iterations)\n";
  out << std::left << std::setw(10) << "algo" << std::right << std::setw(8) << "iters"
      << std::setw(12) << "eff>=1-1e-2" << std::setw(12) << "eff>=1-1e-4" << std::setw(12)
      << "eff>=1-1e-6" << std::setw(14) << "final eps" << '\n';
  for (const BenchRun& run : summary.runs) {
    out << std::left << std::setw(10) << to_string(run.algorithm) << std::right << std::setw(8)
        << run.result.iterations;
    for (long it : run.iters_to_efficiency) out << std::setw(12) << it;
    out << std::setw(14) << std::setprecision(3) << run.result.certificate.eps << '\n';
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayes A_K-optimal design via the squared group-lasso reformulation", "aopt"};
  app.require_subcommand(1);

  GenRandomArgs gen_random_args;
  GenQuadregArgs gen_quadreg_args;
  SolveArgs solve_args;
  BenchArgs bench_args;

  auto* gen = app.add_subcommand("gen", "Generate an instance file (JSON)");
  gen->require_subcommand(1);
  auto* gen_rand = gen->add_subcommand("random", "A with i.i.d. standard normal entries, K = Sigma = I");
  gen_rand->add_option("--m", gen_random_args.m, "Number of design points")->required();
  gen_rand->add_option("--n", gen_random_args.n, "Parameter dimension")->required();
  gen_rand->add_option("--seed", gen_random_args.seed, "Generator seed");
  gen_rand->add_option("--sigma2n", gen_random_args.sigma2N, "Noise level sigma^2 / N");
  gen_rand->add_option("-o,--out", gen_random_args.out, "Output file (default: stdout)");

  auto* gen_quad = gen->add_subcommand("quadreg", "Quadratic regression on a regular grid over [-1,1]^d");
  gen_quad->add_option("--d", gen_quadreg_args.d, "Input dimension")->required();
  gen_quad->add_option("--grid", gen_quadreg_args.grid, "Grid points per axis")->required();
  gen_quad->add_option("--seed", gen_quadreg_args.seed, "Recorded in provenance only");
  gen_quad->add_option("--sigma2n", gen_quadreg_args.sigma2N, "Noise level sigma^2 / N");
  gen_quad->add_option("-o,--out", gen_quadreg_args.out, "Output file (default: stdout)");

  auto* solve_cmd = app.add_subcommand("solve", "Run one algorithm on an instance");
  solve_cmd->add_option("--instance", solve_args.instance, "Instance JSON")->required();
  solve_cmd->add_option("--algo", solve_args.algo, "fb | fista | abcd-cy | abcd-rp | vdm | mul");
  solve_cmd->add_option("--tol", solve_args.tol, "Stop when the efficiency bound eps <= tol");
  solve_cmd->add_option("--max-iter", solve_args.max_iter, "Iteration budget");
  solve_cmd->add_option("--eta", solve_args.eta, "Backtracking multiplier");
  solve_cmd->add_option("--l0", solve_args.l0, "Initial backtracking constant");
  solve_cmd->add_option("--seed", solve_args.seed, "Seed for abcd-rp permutations");
  solve_cmd->add_option("--trace-every", solve_args.trace_every, "Certificate cadence");
  solve_cmd->add_option("--trace", solve_args.trace, "Trace CSV output");
  solve_cmd->add_option("--result", solve_args.result, "Result JSON output (default: stdout)");
  solve_cmd->add_flag("--fixed-step", solve_args.fixed_step, "FB/FISTA: constant step 1/trace(A Sigma A^T)");
  solve_cmd->add_flag("--timing", solve_args.timing, "Record wall-clock time in the trace");

  auto* bench_cmd = app.add_subcommand("bench", "Run several algorithms and plot convergence");
  bench_cmd->add_option("--instance", bench_args.instance, "Instance JSON")->required();
  bench_cmd->add_option("--algos", bench_args.algos, "Comma-separated algorithm list");
  bench_cmd->add_option("--iters", bench_args.iters, "Iterations per algorithm");
  bench_cmd->add_option("--out", bench_args.out, "Output directory")->required();
  bench_cmd->add_option("--tol", bench_args.tol, "Early stop on eps <= tol (0: full budget)");
  bench_cmd->add_option("--ref-tol", bench_args.ref_tol, "Certificate level of the reference run");
  bench_cmd->add_option("--eta", bench_args.eta, "Backtracking multiplier");
  bench_cmd->add_option("--l0", bench_args.l0, "Initial backtracking constant");
  bench_cmd->add_option("--seed", bench_args.seed, "Seed for abcd-rp permutations");
  bench_cmd->add_option("--trace-every", bench_args.trace_every, "Certificate cadence");
  bench_cmd->add_option("--threads", bench_args.threads, "Worker threads (default: AOPT_THREADS)");
  bench_cmd->add_flag("--timing", bench_args.timing, "Record wall-clock time in the traces");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*gen_rand) return cmd_gen_random(gen_random_args, out);
    if (*gen_quad) return cmd_gen_quadreg(gen_quadreg_args, out);
    if (*solve_cmd) return cmd_solve(solve_args, out);
    if (*bench_cmd) return cmd_bench(bench_args, out);
  } catch (const std::exception& e) {
    err << "aopt: error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace aopt::cli
