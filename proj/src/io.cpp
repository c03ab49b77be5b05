#include "aopt/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace aopt {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json row_major(const Matrix& M) {
  ordered_json out = ordered_json::array();
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j) out.push_back(M(i, j));
  return out;
}

Matrix read_row_major(const json& doc, const char* key, Index rows, Index cols) {
  const json& arr = doc.at(key);
  if (!arr.is_array()) throw std::invalid_argument(std::string(key) + " must be an array");
  if (static_cast<Index>(arr.size()) != rows * cols)
    throw std::invalid_argument(std::string(key) + " has " + std::to_string(arr.size()) +
                                " entries, expected " + std::to_string(rows * cols));
  Matrix M(rows, cols);
  std::size_t k = 0;
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) {
      const json& v = arr[k++];
      if (!v.is_number()) throw std::invalid_argument(std::string(key) + " entries must be numbers");
      M(i, j) = v.get<double>();
    }
  return M;
}

Index read_dim(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw std::invalid_argument(std::string(key) + " must be a positive integer");
  return static_cast<Index>(v.get<long long>());
}

bool is_identity(const Matrix& M) {
  return M.rows() == M.cols() && M == Matrix::Identity(M.rows(), M.cols());
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <class T>
T parse_field(const std::string& text, const char* what) {
  std::istringstream in(text);
  in.imbue(std::locale::classic());
  T value{};
  in >> value;
  if (in.fail() || !in.eof()) throw std::invalid_argument(std::string("malformed ") + what + ": " + text);
  return value;
}

double parse_double(const std::string& text) {
  // stod understands inf/nan spellings that printf produces.
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed number: " + text);
  }
  if (used != text.size()) throw std::invalid_argument("malformed number: " + text);
  return value;
}

}  // namespace

ordered_json instance_to_json(const DesignProblem& problem, const std::string& provenance) {
  ordered_json doc;
  doc["schema_version"] = kInstanceSchemaVersion;
  doc["m"] = problem.m();
  doc["n"] = problem.n();
  doc["r"] = problem.r();
  doc["sigma2N"] = problem.sigma2N();
  doc["A"] = row_major(problem.A());
  if (!is_identity(problem.K())) doc["K"] = row_major(problem.K());
  if (!is_identity(problem.sigma())) doc["Sigma"] = row_major(problem.sigma());
  doc["provenance"] = provenance;
  return doc;
}

InstanceFile instance_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("instance must be a JSON object");
  const json& version = doc.at("schema_version");
  if (!version.is_number_integer() || version.get<int>() != kInstanceSchemaVersion)
    throw std::invalid_argument("unsupported instance schema_version");
  const Index m = read_dim(doc, "m");
  const Index n = read_dim(doc, "n");
  const Index r = read_dim(doc, "r");
  if (!doc.at("sigma2N").is_number()) throw std::invalid_argument("sigma2N must be a number");
  const double sigma2N = doc.at("sigma2N").get<double>();

  Matrix A = read_row_major(doc, "A", m, n);
  Matrix K;
  if (doc.contains("K")) {
    K = read_row_major(doc, "K", n, r);
  } else {
    if (r != n) throw std::invalid_argument("K may only be omitted when r == n");
    K = Matrix::Identity(n, n);
  }
  Matrix Sigma = doc.contains("Sigma") ? read_row_major(doc, "Sigma", n, n)
                                       : Matrix(Matrix::Identity(n, n));
  std::string provenance;
  if (doc.contains("provenance")) {
    if (!doc.at("provenance").is_string()) throw std::invalid_argument("provenance must be a string");
    provenance = doc.at("provenance").get<std::string>();
  }
  return {DesignProblem(std::move(A), std::move(K), std::move(Sigma), sigma2N),
          std::move(provenance)};
}

std::string dump_instance(const DesignProblem& problem, const std::string& provenance) {
  return instance_to_json(problem, provenance).dump() + "\n";
}

void save_instance(const std::filesystem::path& path, const DesignProblem& problem,
                   const std::string& provenance) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << dump_instance(problem, provenance);
  if (!out) throw std::runtime_error("error writing " + path.string());
}

InstanceFile load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
  try {
    return instance_from_json(doc);
  } catch (const json::exception& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_trace_csv(std::ostream& out, const SolveTrace& trace) {
  out << kTraceHeader << '\n';
  for (const TraceRecord& rec : trace.records) {
    out << rec.iter << ',' << format_double(rec.objective) << ',' << format_double(rec.eps_bound)
        << ',' << rec.support << ',' << rec.delta001 << ',' << format_double(rec.step_L) << ','
        << rec.elapsed_ns << '\n';
  }
}

std::string trace_to_csv(const SolveTrace& trace) {
  std::ostringstream out;
  write_trace_csv(out, trace);
  return out.str();
}

SolveTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader)
    throw std::invalid_argument("trace CSV header mismatch");
  SolveTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 7) throw std::invalid_argument("trace CSV row needs 7 fields: " + line);
    TraceRecord rec;
    rec.iter = parse_field<long>(f[0], "iter");
    rec.objective = parse_double(f[1]);
    rec.eps_bound = parse_double(f[2]);
    rec.support = parse_field<Index>(f[3], "support");
    rec.delta001 = parse_field<Index>(f[4], "delta001");
    rec.step_L = parse_double(f[5]);
    rec.elapsed_ns = parse_field<std::int64_t>(f[6], "elapsed_ns");
    trace.records.push_back(rec);
  }
  return trace;
}

ordered_json result_to_json(const SolveResult& result) {
  ordered_json doc;
  doc["algorithm"] = std::string(to_string(result.algorithm));
  doc["iterations"] = result.iterations;
  doc["converged"] = result.converged;
  doc["degenerate"] = result.degenerate;
  doc["phi"] = result.objective;
  doc["eps"] = result.certificate.eps;
  doc["gap"] = result.certificate.s;
  doc["rho_lower_bound"] = result.certificate.lower_bound();
  doc["rho_hint"] = result.rho_hint;
  if (result.composite) doc["composite_objective"] = *result.composite;
  if (result.estimator) doc["nonzero_columns"] = nonzero_columns(*result.estimator);
  doc["delta001"] = support_size(result.design);
  ordered_json w = ordered_json::array();
  for (Index i = 0; i < result.design.size(); ++i) w.push_back(result.design[i]);
  doc["w"] = std::move(w);
  return doc;
}

}  // namespace aopt
