#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "aopt/bench.hpp"
#include "aopt/errors.hpp"
#include "aopt/instances.hpp"
#include "aopt/io.hpp"
#include "aopt/metrics.hpp"
#include "aopt/model.hpp"
#include "aopt/oracle.hpp"
#include "aopt/penalty.hpp"
#include "aopt/solvers.hpp"

namespace py = pybind11;
using namespace aopt;

namespace {

Algorithm algorithm_arg(const std::string& name) { return parse_algorithm(name); }

SolverConfig make_config(const std::string& algo, double tol, long max_iter, double eta,
                         double l0, std::uint64_t seed, long trace_every, bool fixed_step,
                         std::optional<Matrix> warm_X, std::optional<Vector> warm_w) {
  SolverConfig config;
  config.algorithm = algorithm_arg(algo);
  config.tol = tol;
  config.max_iter = max_iter;
  config.eta = eta;
  config.l0 = l0;
  config.seed = seed;
  config.trace_every = trace_every;
  config.fixed_step = fixed_step;
  config.warm_X = std::move(warm_X);
  config.warm_w = std::move(warm_w);
  return config;
}

py::dict trace_to_dict(const SolveTrace& trace) {
  std::vector<long> iter;
  std::vector<double> objective, eps, step;
  std::vector<Index> support, delta;
  for (const TraceRecord& r : trace.records) {
    iter.push_back(r.iter);
    objective.push_back(r.objective);
    eps.push_back(r.eps_bound);
    support.push_back(r.support);
    delta.push_back(r.delta001);
    step.push_back(r.step_L);
  }
  py::dict out;
  out["iter"] = iter;
  out["objective"] = objective;
  out["eps_bound"] = eps;
  out["support"] = support;
  out["delta001"] = delta;
  out["step_L"] = step;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Bayes A_K-optimal experimental design solvers";

  py::register_exception<InvalidProblem>(mod, "InvalidProblem", PyExc_ValueError);
  py::register_exception<DegenerateInstance>(mod, "DegenerateInstance", PyExc_RuntimeError);
  py::register_exception<NumericalFailure>(mod, "NumericalFailure", PyExc_RuntimeError);

  py::class_<DesignProblem>(mod, "DesignProblem")
      .def(py::init<Matrix, Matrix, Matrix, double>(), py::arg("A"), py::arg("K"),
           py::arg("Sigma"), py::arg("sigma2N"))
      .def_property_readonly("m", &DesignProblem::m)
      .def_property_readonly("n", &DesignProblem::n)
      .def_property_readonly("r", &DesignProblem::r)
      .def_property_readonly("A", &DesignProblem::A)
      .def_property_readonly("K", &DesignProblem::K)
      .def_property_readonly("Sigma", &DesignProblem::sigma)
      .def_property_readonly("sigma2N", &DesignProblem::sigma2N);

  mod.def("phi", [](const DesignProblem& p, const Vector& w) { return phi_ak(p, Design(w)); },
          py::arg("problem"), py::arg("w"));
  mod.def("grad_phi", [](const DesignProblem& p, const Vector& w) { return grad_phi(p, Design(w)); },
          py::arg("problem"), py::arg("w"), "Returns d = -grad Phi(w).");
  mod.def("f_smooth", &f_smooth, py::arg("problem"), py::arg("X"));
  mod.def("grad_f", &grad_f, py::arg("problem"), py::arg("X"));
  mod.def("composite_objective", &composite_objective, py::arg("problem"), py::arg("X"));
  mod.def("lipschitz_L", &lipschitz_L, py::arg("problem"));
  mod.def("estimator_for_design",
          [](const DesignProblem& p, const Vector& w) { return estimator_for_design(p, Design(w)); },
          py::arg("problem"), py::arg("w"));

  mod.def("omega", &omega, py::arg("X"));
  mod.def("prox_g",
          [](const Matrix& V, double t) {
            ProxResult r = prox_g(V, t);
            return py::make_tuple(r.X, r.diagnostics.k, r.diagnostics.threshold);
          },
          py::arg("V"), py::arg("t"), "Returns (X, k, threshold).");
  mod.def("prox_oracle", &prox_oracle, py::arg("V"), py::arg("t"));

  mod.def("certificate",
          [](const DesignProblem& p, const Vector& w) {
            DualityCertificate c = certificate(p, Design(w));
            py::dict out;
            out["phi"] = c.phi;
            out["s"] = c.s;
            out["eps"] = c.eps;
            out["d"] = c.d;
            return out;
          },
          py::arg("problem"), py::arg("w"));
  mod.def("design_from_estimator",
          [](const Matrix& X) {
            RecoveredDesign r = design_from_estimator(X);
            return py::make_tuple(Vector(r.design.weights()), r.degenerate);
          },
          py::arg("X"), "Returns (w, degenerate).");
  mod.def("support_size",
          [](const Vector& w, double c) { return support_size(Design(w), c); }, py::arg("w"),
          py::arg("threshold_factor") = 0.01);

  mod.def("gen_random", &gen_random, py::arg("m"), py::arg("n"), py::arg("seed"),
          py::arg("sigma2N") = kDefaultSigma2N);
  mod.def("gen_quadreg", &gen_quadreg, py::arg("d"), py::arg("points_per_dim"),
          py::arg("seed") = 0, py::arg("sigma2N") = kDefaultSigma2N);
  mod.def("quadreg_features", &quadreg_features, py::arg("x"));
  mod.def("imse_to_K",
          [](const Matrix& points, const Vector& weights, double rank_tol) {
            return imse_to_K(QuadratureSpec{points, weights}, rank_tol);
          },
          py::arg("points"), py::arg("weights"), py::arg("rank_tol") = 1e-12);

  mod.def("load_instance", [](const std::filesystem::path& path) { return load_instance(path).problem; },
          py::arg("path"));
  mod.def("save_instance", &save_instance, py::arg("path"), py::arg("problem"),
          py::arg("provenance") = "");

  mod.def("algorithms", [] {
    std::vector<std::string> names;
    for (Algorithm a : all_algorithms()) names.emplace_back(to_string(a));
    return names;
  });

  mod.def(
      "solve",
      [](const DesignProblem& p, const std::string& algo, double tol, long max_iter, double eta,
         double l0, std::uint64_t seed, long trace_every, bool fixed_step,
         std::optional<Matrix> warm_X, std::optional<Vector> warm_w) {
        const SolverConfig config = make_config(algo, tol, max_iter, eta, l0, seed, trace_every,
                                                fixed_step, std::move(warm_X), std::move(warm_w));
        SolveResult r;
        {
          py::gil_scoped_release release;
          r = solve(p, config);
        }
        py::dict out;
        out["algorithm"] = std::string(to_string(r.algorithm));
        out["w"] = Vector(r.design.weights());
        out["phi"] = r.objective;
        out["eps"] = r.certificate.eps;
        out["gap"] = r.certificate.s;
        out["iterations"] = r.iterations;
        out["converged"] = r.converged;
        out["degenerate"] = r.degenerate;
        out["rho_hint"] = r.rho_hint;
        out["X"] = r.estimator ? py::cast(*r.estimator) : py::none();
        out["composite"] = r.composite ? py::cast(*r.composite) : py::none();
        out["trace"] = trace_to_dict(r.trace);
        return out;
      },
      py::arg("problem"), py::arg("algo") = "fista", py::arg("tol") = 1e-7,
      py::arg("max_iter") = 100000, py::arg("eta") = 2.0, py::arg("l0") = 1.0,
      py::arg("seed") = 0, py::arg("trace_every") = 1, py::arg("fixed_step") = false,
      py::arg("warm_X") = py::none(), py::arg("warm_w") = py::none());

  mod.def(
      "reference_rho",
      [](const DesignProblem& p, double tol, long max_iter) {
        ReferenceSolution ref;
        {
          py::gil_scoped_release release;
          ref = reference_rho(p, tol, max_iter);
        }
        py::dict out;
        out["rho"] = ref.rho;
        out["rho_lower"] = ref.rho_lower;
        out["eps"] = ref.eps;
        out["iterations"] = ref.iterations;
        out["w_star"] = Vector(ref.w_star.weights());
        out["X_star"] = ref.X_star;
        return out;
      },
      py::arg("problem"), py::arg("tol") = 1e-11, py::arg("max_iter") = 10'000'000);
}
