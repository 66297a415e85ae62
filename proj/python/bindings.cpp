#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "aoicache/error.hpp"
#include "aoicache/experiments.hpp"
#include "aoicache/lambert_w.hpp"
#include "aoicache/models.hpp"
#include "aoicache/sim.hpp"
#include "aoicache/solver.hpp"

namespace py = pybind11;
using namespace aoicache;

namespace {

Catalog make_catalog(const std::vector<double>& popularity, const std::vector<UpdateModel>& models) {
  if (popularity.size() != models.size()) throw ArgumentError("popularity and models differ in length");
  std::vector<FileSpec> files;
  for (std::size_t n = 0; n < models.size(); ++n) files.push_back({popularity[n], models[n]});
  return Catalog(std::move(files));
}

}  // namespace

PYBIND11_MODULE(aoicache, m) {
  m.doc() = "Age-of-information cache refresh: update models, utilization solvers and a scheduling simulator.";

  py::enum_<ModelKind>(m, "ModelKind")
      .value("Constant", ModelKind::Constant)
      .value("Exponential", ModelKind::Exponential)
      .value("Rational", ModelKind::Rational);

  py::class_<UpdateModel>(m, "UpdateModel")
      .def_static("constant", &UpdateModel::constant, py::arg("B"))
      .def_static("exponential", &UpdateModel::exponential, py::arg("B"), py::arg("eps"), py::arg("beta"))
      .def_static("rational", &UpdateModel::rational, py::arg("B"), py::arg("eps"))
      .def_property_readonly("kind", &UpdateModel::kind)
      .def_property_readonly("size", &UpdateModel::size)
      .def("f", &UpdateModel::f, py::arg("t"))
      .def("f_prime", &UpdateModel::f_prime, py::arg("t"))
      .def("g", &UpdateModel::g, py::arg("t"))
      .def("g_inverse", &UpdateModel::g_inverse, py::arg("lam"))
      .def("h", &UpdateModel::h, py::arg("lam"))
      .def("h_prime", &UpdateModel::h_prime, py::arg("lam"))
      .def("__repr__", &UpdateModel::describe);

  py::class_<Catalog>(m, "Catalog")
      .def(py::init(&make_catalog), py::arg("popularity"), py::arg("models"))
      .def("__len__", &Catalog::size)
      .def_property_readonly("popularities", &Catalog::popularities)
      .def("model", [](const Catalog& c, std::size_t n) { return c.files().at(n).model; }, py::arg("index"));

  py::class_<Policy>(m, "Policy")
      .def_readonly("lambdas", &Policy::lambdas)
      .def_readonly("target_intervals", &Policy::target_intervals);

  py::class_<SolverReport>(m, "SolverReport")
      .def_readonly("policy", &SolverReport::policy)
      .def_readonly("objective", &SolverReport::objective)
      .def_readonly("waterlevel", &SolverReport::waterlevel)
      .def_readonly("iterations", &SolverReport::iterations)
      .def_readonly("feasibility_gap", &SolverReport::feasibility_gap)
      .def_readonly("certified", &SolverReport::certified)
      .def_readonly("optimality_gap", &SolverReport::optimality_gap)
      .def_property_readonly("method", [](const SolverReport& r) { return std::string(to_string(r.method)); });

  m.def("lambert_w", &lambert_w0, py::arg("z"), "Principal branch W0");
  m.def("lambert_wm1", &lambert_wm1, py::arg("z"), "Lower branch W-1");
  m.def("zipf_popularity", &zipf_popularity, py::arg("n"), py::arg("alpha"));
  m.def("make_policy", &make_policy, py::arg("catalog"), py::arg("lambdas"));
  m.def("policy_objective", py::overload_cast<const Catalog&, const Policy&>(&policy_objective), py::arg("catalog"),
        py::arg("policy"));
  m.def(
      "solve_kkt",
      [](const Catalog& c, double tolerance) {
        KktOptions options;
        options.tolerance = tolerance;
        return solve_kkt(c, options);
      },
      py::arg("catalog"), py::arg("tolerance") = 1e-12);
  m.def(
      "solve_brb",
      [](const Catalog& c, double eta, double delta) { return solve_brb(c, {.eta = eta, .delta = delta}); },
      py::arg("catalog"), py::arg("eta") = 1e-3, py::arg("delta") = 1e-4);
  m.def("solve_sqrt_weighted", &solve_sqrt_weighted, py::arg("catalog"));
  m.def("solve_sqrt_baseline", &solve_sqrt_baseline, py::arg("catalog"));

  py::class_<PolicyMeasurement>(m, "PolicyMeasurement")
      .def_readonly("simulated_aoi", &PolicyMeasurement::simulated_aoi)
      .def_readonly("relaxed_objective", &PolicyMeasurement::relaxed_objective)
      .def_readonly("relative_gap", &PolicyMeasurement::relative_gap)
      .def_property_readonly("busy_fraction", [](const PolicyMeasurement& p) { return p.trace.busy_fraction; })
      .def_property_readonly("updates", [](const PolicyMeasurement& p) {
        std::vector<std::size_t> counts;
        for (const auto& f : p.trace.files) counts.push_back(f.updates);
        return counts;
      });
  m.def(
      "measure_policy",
      [](const Catalog& c, const Policy& policy, double horizon, const std::string& scheduler) {
        if (scheduler != "urgency" && scheduler != "roundrobin") throw ArgumentError("unknown scheduler " + scheduler);
        return measure_policy(c, policy, horizon, scheduler == "urgency" ? Scheduler::Urgency : Scheduler::RoundRobin);
      },
      py::arg("catalog"), py::arg("policy"), py::arg("horizon") = 1e5, py::arg("scheduler") = "urgency");

  m.def(
      "build_scenario",
      [](const std::string& name, std::size_t n) {
        const auto scenario = parse_scenario(name);
        if (!scenario) throw ArgumentError("unknown scenario " + name);
        return build_scenario(default_scenario(*scenario), n);
      },
      py::arg("scenario"), py::arg("n"));
}
