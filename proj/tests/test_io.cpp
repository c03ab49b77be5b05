#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "aopt/bench.hpp"
#include "aopt/errors.hpp"
#include "aopt/instances.hpp"
#include "aopt/io.hpp"
#include "aopt/solvers.hpp"
#include "aopt/svg.hpp"
#include "cli.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace aopt {
namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("aopt_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::vector<std::string>& args, std::string* out = nullptr,
            std::string* err = nullptr) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

TEST(FormatDouble, RoundTrips) {
  std::mt19937_64 gen(91);
  std::uniform_real_distribution<double> unif(-1e300, 1e300);
  for (int i = 0; i < 1000; ++i) {
    const double x = i % 2 ? unif(gen) : unif(gen) * 1e-310;
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(InstanceJson, RoundTripIsExact) {
  std::mt19937_64 gen(92);
  const DesignProblem p = testing::random_problem(7, 3, 2, 0.037, gen);
  const InstanceFile back = instance_from_json(nlohmann::json::parse(dump_instance(p, "unit")));
  EXPECT_EQ(back.problem.A(), p.A());
  EXPECT_EQ(back.problem.K(), p.K());
  EXPECT_EQ(back.problem.sigma(), p.sigma());
  EXPECT_EQ(back.problem.sigma2N(), p.sigma2N());
  EXPECT_EQ(back.provenance, "unit");

  const DesignProblem id = gen_random(5, 2, 1);
  const nlohmann::ordered_json doc = instance_to_json(id, "");
  EXPECT_FALSE(doc.contains("K"));
  EXPECT_FALSE(doc.contains("Sigma"));
  EXPECT_EQ(instance_from_json(nlohmann::json::parse(doc.dump())).problem.K(),
            Matrix::Identity(2, 2));
}

TEST(InstanceJson, RejectsBadDocuments) {
  auto parse = [](const std::string& text) {
    return instance_from_json(nlohmann::json::parse(text));
  };
  EXPECT_THROW(parse("[]"), std::invalid_argument);
  EXPECT_THROW(parse(R"({"schema_version":2,"m":1,"n":1,"r":1,"sigma2N":1,"A":[1]})"),
               std::invalid_argument);
  EXPECT_THROW(parse(R"({"schema_version":1,"m":2,"n":1,"r":1,"sigma2N":1,"A":[1]})"),
               std::invalid_argument);
  EXPECT_THROW(parse(R"({"schema_version":1,"m":1,"n":1,"r":1,"sigma2N":-1,"A":[1]})"),
               InvalidProblem);
  EXPECT_NO_THROW(parse(R"({"schema_version":1,"m":1,"n":1,"r":1,"sigma2N":1,"A":[1]})"));
}

TEST(TraceCsv, RoundTripIsLossless) {
  std::mt19937_64 gen(93);
  const DesignProblem p = testing::random_problem(8, 3, 3, 0.1, gen);
  SolverConfig c;
  c.algorithm = Algorithm::fista;
  c.max_iter = 40;
  c.tol = 0.0;
  c.record_timing = true;
  const SolveResult r = solve(p, c);
  std::istringstream in(trace_to_csv(r.trace));
  const SolveTrace back = read_trace_csv(in);
  EXPECT_EQ(back.records, r.trace.records);
  EXPECT_EQ(trace_to_csv(r.trace).substr(0, std::string(kTraceHeader).size()), kTraceHeader);

  std::istringstream bad("iter,objective\n1,2\n");
  EXPECT_THROW(read_trace_csv(bad), std::invalid_argument);
}

TEST(Svg, EscapesAndDrawsLegend) {
  EXPECT_EQ(xml_escape("a<b & \"c\">"), "a&lt;b &amp; &quot;c&quot;&gt;");
  PlotPanel panel{"t", "iteration", "y", true, {}};
  panel.series.push_back({"fista", "#ff7f0e", {1, 2, 3}, {-1, -2, -3}});
  panel.series.push_back({"mul", "#8c564b", {1, 2}, {0, std::nan("")}});
  const std::string svg = render_svg(panel);
  EXPECT_EQ(svg.rfind("<svg", 0) == 0 || svg.rfind("<?xml", 0) == 0, true);
  EXPECT_NE(svg.find(">fista<"), std::string::npos);
  EXPECT_NE(svg.find(">mul<"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Bench, EfficiencyHelpers) {
  EXPECT_EQ(trace_efficiency(0.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(trace_efficiency(1.0, 2.0), 0.5);
  SolveTrace t;
  t.records.push_back({1, 2.0, 0.5, 3, 3, 0, 0});
  t.records.push_back({5, 1.001, 0.1, 3, 3, 0, 0});
  t.records.push_back({9, 1.0000001, 0.1, 3, 3, 0, 0});
  EXPECT_EQ(iterations_to_efficiency(t, 1.0, 2), 5);
  EXPECT_EQ(iterations_to_efficiency(t, 1.0, 6), 9);
  EXPECT_EQ(iterations_to_efficiency(t, 1.0, 8), -1);
  EXPECT_EQ(bench_threads(3, 2), 2u);
  EXPECT_EQ(bench_threads(0, 1), 1u);
}

TEST(Cli, GenerateIsDeterministic) {
  TempDir dir;
  const std::string a = (dir / "a.json").string(), b = (dir / "b.json").string();
  ASSERT_EQ(run_cli({"gen", "random", "--m", "100", "--n", "10", "--seed", "7", "-o", a}), 0);
  ASSERT_EQ(run_cli({"gen", "random", "--m", "100", "--n", "10", "--seed", "7", "-o", b}), 0);
  EXPECT_EQ(slurp(a), slurp(b));
  const InstanceFile inst = load_instance(a);
  EXPECT_EQ(inst.problem.A(), gen_random(100, 10, 7).A());

  std::string out;
  ASSERT_EQ(run_cli({"gen", "quadreg", "--d", "2", "--grid", "3"}, &out), 0);
  const auto doc = nlohmann::json::parse(out);
  EXPECT_EQ(doc.at("m"), 9);
  EXPECT_EQ(doc.at("n"), 6);
}

TEST(Cli, SolveWritesDeterministicTrace) {
  TempDir dir;
  const std::string inst = (dir / "i.json").string();
  ASSERT_EQ(run_cli({"gen", "random", "--m", "20", "--n", "3", "--seed", "1", "-o", inst}), 0);
  for (const char* algo : {"fista", "abcd-rp", "vdm"}) {
    const std::string t1 = (dir / "t1.csv").string(), t2 = (dir / "t2.csv").string();
    const std::vector<std::string> base = {"solve", "--instance", inst, "--algo", algo,
                                           "--max-iter", "60", "--tol", "0", "--seed", "3",
                                           "--result", (dir / "r.json").string()};
    auto with_trace = [&](const std::string& t) {
      auto args = base;
      args.insert(args.end(), {"--trace", t});
      return args;
    };
    ASSERT_EQ(run_cli(with_trace(t1)), 0) << algo;
    ASSERT_EQ(run_cli(with_trace(t2)), 0) << algo;
    EXPECT_EQ(slurp(t1), slurp(t2)) << algo;
    std::ifstream in(t1);
    EXPECT_EQ(read_trace_csv(in).records.size(), 60u);
    const auto result = nlohmann::json::parse(slurp(dir / "r.json"));
    EXPECT_EQ(result.at("algorithm"), algo);
  }
}

TEST(Cli, ZeroTargetGivesSingleRow) {
  TempDir dir;
  const std::string inst = (dir / "z.json").string();
  Matrix A(2, 2);
  A << 1, 2, 3, 4;
  save_instance(inst, DesignProblem(A, Matrix::Zero(2, 1), Matrix::Identity(2, 2), 0.01), "zero");
  const std::string trace = (dir / "t.csv").string();
  ASSERT_EQ(run_cli({"solve", "--instance", inst, "--algo", "fb", "--trace", trace, "--result",
                     (dir / "r.json").string()}),
            0);
  std::ifstream in(trace);
  const SolveTrace t = read_trace_csv(in);
  ASSERT_EQ(t.records.size(), 1u);
  EXPECT_EQ(t.records[0].objective, 0.0);
}

TEST(Cli, BenchOnZeroTargetIsFlat) {
  TempDir dir;
  const std::string inst = (dir / "z.json").string();
  Matrix A(3, 2);
  A << 1, 2, 3, 4, 5, 6;
  save_instance(inst, DesignProblem(A, Matrix::Zero(2, 2), Matrix::Identity(2, 2), 0.01), "");
  const std::string out = (dir / "bench").string();
  ASSERT_EQ(run_cli({"bench", "--instance", inst, "--algos", "fista,mul", "--iters", "20", "--out",
                     out, "--threads", "1"}),
            0);
  for (const char* algo : {"fista", "mul"}) {
    std::ifstream in(fs::path(out) / (std::string("trace_") + algo + ".csv"));
    for (const TraceRecord& r : read_trace_csv(in).records) EXPECT_EQ(r.objective, 0.0);
  }
  const std::string svg = slurp(fs::path(out) / "efficiency.svg");
  EXPECT_NE(svg.find(">fista<"), std::string::npos);
  EXPECT_NE(svg.find(">mul<"), std::string::npos);
  const auto summary = nlohmann::json::parse(slurp(fs::path(out) / "summary.json"));
  EXPECT_EQ(summary.at("rho"), 0.0);
}

TEST(Cli, ErrorsGiveNonzeroExit) {
  std::string err;
  EXPECT_NE(run_cli({"solve", "--instance", "/nonexistent.json"}, nullptr, &err), 0);
  EXPECT_NE(err.find("error"), std::string::npos);
  EXPECT_NE(run_cli({"frobnicate"}, nullptr, &err), 0);
  EXPECT_NE(run_cli({"gen", "random", "--m", "0", "--n", "2"}, nullptr, &err), 0);

  TempDir dir;
  const std::string inst = (dir / "i.json").string();
  ASSERT_EQ(run_cli({"gen", "random", "--m", "5", "--n", "2", "-o", inst}), 0);
  EXPECT_NE(run_cli({"solve", "--instance", inst, "--algo", "newton"}, nullptr, &err), 0);
  EXPECT_NE(run_cli({"solve", "--instance", inst, "--eta", "0.5"}, nullptr, &err), 0);
}

}  // namespace
}  // namespace aopt
