#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "aopt/model.hpp"
#include "aopt/solvers.hpp"

namespace aopt {

inline constexpr int kInstanceSchemaVersion = 1;

struct InstanceFile {
  DesignProblem problem;
  std::string provenance;
};

// Instance JSON: schema_version, m, n, r, sigma2N, A (row-major), optional K
// and Sigma (row-major, omitted when they are the identity), provenance.
nlohmann::ordered_json instance_to_json(const DesignProblem& problem,
                                        const std::string& provenance);
// Throws std::invalid_argument on schema violations and InvalidProblem on
// invalid data.
InstanceFile instance_from_json(const nlohmann::json& doc);

std::string dump_instance(const DesignProblem& problem, const std::string& provenance);
void save_instance(const std::filesystem::path& path, const DesignProblem& problem,
                   const std::string& provenance);
InstanceFile load_instance(const std::filesystem::path& path);

// Shortest-free fixed format: 17 significant digits ("%.17g"), which
// round-trips every double.
std::string format_double(double value);

inline constexpr const char* kTraceHeader =
    "iter,objective,eps_bound,support,delta001,step_L,elapsed_ns";

void write_trace_csv(std::ostream& out, const SolveTrace& trace);
std::string trace_to_csv(const SolveTrace& trace);
// Throws std::invalid_argument on a malformed header or row.
SolveTrace read_trace_csv(std::istream& in);

nlohmann::ordered_json result_to_json(const SolveResult& result);

}  // namespace aopt
