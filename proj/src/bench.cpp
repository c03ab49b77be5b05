#include "aopt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "aopt/io.hpp"
#include "aopt/svg.hpp"

namespace aopt {

namespace {

// Floor for log10 plots once a curve reaches machine precision.
constexpr double kLogFloor = -16.0;

double log10_floor(double value) {
  if (!(value > 0.0)) return kLogFloor;
  return std::max(std::log10(value), kLogFloor);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("error writing " + path.string());
}

std::string trace_file_name(Algorithm algorithm) {
  return "trace_" + std::string(to_string(algorithm)) + ".csv";
}

}  // namespace

double trace_efficiency(double rho, double objective) {
  if (objective == 0.0) return rho == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return rho / objective;
}

long iterations_to_efficiency(const SolveTrace& trace, double rho, int digits) {
  const double target = 1.0 - std::pow(10.0, -digits);
  for (const TraceRecord& rec : trace.records)
    if (trace_efficiency(rho, rec.objective) >= target) return rec.iter;
  return -1;
}

unsigned bench_threads(unsigned requested, std::size_t jobs) {
  unsigned threads = requested;
  if (threads == 0) {
    if (const char* env = std::getenv("AOPT_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) threads = static_cast<unsigned>(v);
    }
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto cap = static_cast<unsigned>(std::max<std::size_t>(1, jobs));
  return std::clamp(threads, 1u, cap);
}

std::string algorithm_color(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::fb: return "#1f77b4";
    case Algorithm::fista: return "#ff7f0e";
    case Algorithm::abcd_cyclic: return "#2ca02c";
    case Algorithm::abcd_randperm: return "#d62728";
    case Algorithm::vdm: return "#9467bd";
    case Algorithm::mul: return "#8c564b";
  }
  return "#000000";
}

BenchSummary run_bench(const DesignProblem& problem, const BenchOptions& options) {
  if (options.algorithms.empty()) throw std::invalid_argument("bench needs at least one algorithm");
  BenchSummary summary;
  summary.reference = reference_rho(problem, options.ref_tol);
  summary.runs.resize(options.algorithms.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= options.algorithms.size()) return;
      try {
        SolverConfig config;
        config.algorithm = options.algorithms[job];
        config.max_iter = options.iters;
        config.tol = options.tol;
        config.eta = options.eta;
        config.l0 = options.l0;
        config.seed = options.seed;
        config.trace_every = options.trace_every;
        config.record_timing = options.record_timing;
        BenchRun& run = summary.runs[job];
        run.algorithm = config.algorithm;
        run.result = solve(problem, config);
        for (std::size_t k = 0; k < kEfficiencyDigits.size(); ++k)
          run.iters_to_efficiency[k] = iterations_to_efficiency(
              run.result.trace, summary.reference.rho, kEfficiencyDigits[k]);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const unsigned threads = bench_threads(options.threads, options.algorithms.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return summary;
}

void write_bench_outputs(const BenchSummary& summary, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const double rho = summary.reference.rho;

  nlohmann::ordered_json doc;
  doc["rho"] = rho;
  doc["rho_lower"] = summary.reference.rho_lower;
  doc["reference_eps"] = summary.reference.eps;
  doc["reference_iterations"] = summary.reference.iterations;
  doc["runs"] = nlohmann::ordered_json::array();

  std::string csv =
      "algorithm,iterations,final_phi,final_eps,final_efficiency,iters_to_eff_1e-2,"
      "iters_to_eff_1e-4,iters_to_eff_1e-6,nonzero_columns,delta001\n";

  PlotPanel eff{"Efficiency", "iteration", "1 - efficiency", true, {}};
  PlotPanel bound{"Duality bound", "iteration", "eps (efficiency >= 1 - eps)", true, {}};
  PlotPanel support{"Support size", "iteration", "delta_0.01 (weights > 0.01/m)", false, {}};

  for (const BenchRun& run : summary.runs) {
    const SolveResult& res = run.result;
    write_text(dir / trace_file_name(run.algorithm), trace_to_csv(res.trace));

    const double final_eff = trace_efficiency(rho, res.objective);
    nlohmann::ordered_json entry = result_to_json(res);
    entry["efficiency"] = final_eff;
    for (std::size_t k = 0; k < kEfficiencyDigits.size(); ++k)
      entry["iters_to_eff_1e-" + std::to_string(kEfficiencyDigits[k])] = run.iters_to_efficiency[k];
    entry["trace"] = trace_file_name(run.algorithm);
    entry.erase("w");
    doc["runs"].push_back(std::move(entry));

    const long nonzero = res.estimator ? static_cast<long>(nonzero_columns(*res.estimator))
                                       : static_cast<long>((res.design.weights().array() > 0.0).count());
    csv += std::string(to_string(run.algorithm)) + ',' + std::to_string(res.iterations) + ',' +
           format_double(res.objective) + ',' + format_double(res.certificate.eps) + ',' +
           format_double(final_eff) + ',' + std::to_string(run.iters_to_efficiency[0]) + ',' +
           std::to_string(run.iters_to_efficiency[1]) + ',' +
           std::to_string(run.iters_to_efficiency[2]) + ',' + std::to_string(nonzero) + ',' +
           std::to_string(support_size(res.design)) + '\n';

    const std::string label(to_string(run.algorithm));
    const std::string color = algorithm_color(run.algorithm);
    PlotSeries e{label, color, {}, {}}, b{label, color, {}, {}}, s{label, color, {}, {}};
    for (const TraceRecord& rec : res.trace.records) {
      const auto x = static_cast<double>(rec.iter);
      e.x.push_back(x);
      e.y.push_back(log10_floor(1.0 - trace_efficiency(rho, rec.objective)));
      b.x.push_back(x);
      b.y.push_back(log10_floor(rec.eps_bound));
      s.x.push_back(x);
      s.y.push_back(static_cast<double>(rec.delta001));
    }
    eff.series.push_back(std::move(e));
    bound.series.push_back(std::move(b));
    support.series.push_back(std::move(s));
  }

  write_text(dir / "summary.json", doc.dump(2) + "\n");
  write_text(dir / "summary.csv", csv);
  write_text(dir / "efficiency.svg", render_svg(eff));
  write_text(dir / "duality_bound.svg", render_svg(bound));
  write_text(dir / "support.svg", render_svg(support));
}

}  // namespace aopt
