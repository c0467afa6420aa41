// Python bindings: a thin JSON-in/JSON-out veneer over the analysis driver.
// Structured inputs and reports keep their canonical serialized forms, so
// the module, the command-line tool, and stored fixtures all speak the same
// format; sweep summaries come back as native Python values.
#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "orbifoldkit/driver.hpp"
#include "orbifoldkit/errors.hpp"
#include "orbifoldkit/serialization.hpp"

namespace py = pybind11;

namespace {

using namespace orbifoldkit;

// File-level options first, then explicit keyword arguments, mirroring how
// the command-line flags override the instance file.
RunOptions merge_options(const InstanceSpec& spec, std::optional<int> samples,
                         std::optional<int> marked_depth,
                         std::optional<unsigned long long> seed) {
  RunOptions opt = resolve_options(spec.options);
  if (samples) {
    if (*samples < 0 || *samples > 1000000)
      throw InputError("samples must be an integer in [0, 1000000]");
    opt.samples = *samples;
  }
  if (marked_depth) {
    if (*marked_depth < 0 || *marked_depth > 6)
      throw InputError("marked_depth must be an integer in [0, 6]");
    opt.marked_depth = *marked_depth;
  }
  if (seed) opt.seed = *seed;
  return opt;
}

SweepOptions merge_sweep_options(const std::vector<int>& orders,
                                 long long det_max, int entry_max,
                                 bool precompose_identity, bool precompose_f,
                                 int jobs, unsigned long long seed) {
  SweepOptions opt;
  opt.orders = orders;
  opt.det_max = det_max;
  opt.entry_max = entry_max;
  opt.precompose_identity = precompose_identity;
  opt.precompose_f = precompose_f;
  opt.jobs = jobs;
  opt.seed = seed;
  return opt;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Exact-arithmetic analysis of sphere maps obtained from affine torus "
      "endomorphisms modulo a finite rotation group";

  // Library errors: bad input maps to ValueError, violated internal
  // invariants to RuntimeError.  Registration order matters: the most
  // specific translator must be registered last.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InternalCheckFailure>(m, "InternalCheckFailure",
                                               PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);

  m.def(
      "analyze",
      [](const std::string& instance_json, std::optional<int> samples,
         std::optional<int> marked_depth,
         std::optional<unsigned long long> seed) {
        const InstanceSpec spec = instance_from_json(instance_json);
        const RunOptions opt =
            merge_options(spec, samples, marked_depth, seed);
        py::gil_scoped_release release;
        return run_analyze(spec, opt).report;
      },
      py::arg("instance_json"), py::kw_only(), py::arg("samples") = py::none(),
      py::arg("marked_depth") = py::none(), py::arg("seed") = py::none(),
      "Full single-instance analysis; returns the JSON report text.");

  m.def(
      "quotient",
      [](const std::string& instance_json, std::optional<int> samples,
         std::optional<int> marked_depth,
         std::optional<unsigned long long> seed) {
        const InstanceSpec spec = instance_from_json(instance_json);
        const RunOptions opt =
            merge_options(spec, samples, marked_depth, seed);
        py::gil_scoped_release release;
        return run_quotient(spec, opt).report;
      },
      py::arg("instance_json"), py::kw_only(), py::arg("samples") = py::none(),
      py::arg("marked_depth") = py::none(), py::arg("seed") = py::none(),
      "Analysis plus the reduction trace that makes the projection "
      "injective; returns the JSON report text.");

  m.def(
      "portrait",
      [](const std::string& portrait_json) {
        const RamifiedPortrait p = portrait_from_json(portrait_json);
        py::gil_scoped_release release;
        return run_portrait(p).report;
      },
      py::arg("portrait_json"),
      "Orbifold data of an abstract portrait; returns the JSON report "
      "text.");

  m.def(
      "sweep",
      [](const std::vector<int>& orders, long long det_max, int entry_max,
         bool precompose_identity, bool precompose_f, int jobs,
         unsigned long long seed) {
        const SweepOptions opt =
            merge_sweep_options(orders, det_max, entry_max,
                                precompose_identity, precompose_f, jobs, seed);
        SweepOutcome out;
        {
          py::gil_scoped_release release;
          out = run_sweep(opt);
        }
        py::dict d;
        d["instances"] = out.instances;
        d["failures"] = out.failures;
        d["table"] = out.table;
        d["failure_lines"] = out.failure_lines;
        return d;
      },
      py::kw_only(), py::arg("orders") = std::vector<int>{2, 3, 4, 6},
      py::arg("det_max") = 10, py::arg("entry_max") = 2,
      py::arg("precompose_identity") = true, py::arg("precompose_f") = true,
      py::arg("jobs") = 1, py::arg("seed") = 20260819ULL,
      "Exact checks over the enumerated instance family; returns a dict "
      "with instances, failures, table, and failure_lines.");

  m.def(
      "enumerate_sweep",
      [](const std::vector<int>& orders, long long det_max, int entry_max,
         bool precompose_identity, bool precompose_f) {
        const SweepOptions opt = merge_sweep_options(
            orders, det_max, entry_max, precompose_identity, precompose_f, 1,
            20260819ULL);
        std::vector<std::string> out;
        py::gil_scoped_release release;
        for (const InstanceSpec& spec : enumerate_sweep_instances(opt))
          out.push_back(instance_to_json(spec));
        return out;
      },
      py::kw_only(), py::arg("orders") = std::vector<int>{2, 3, 4, 6},
      py::arg("det_max") = 10, py::arg("entry_max") = 2,
      py::arg("precompose_identity") = true, py::arg("precompose_f") = true,
      "The validated instance family in canonical order, one canonical JSON "
      "text per instance.");

  m.def(
      "figure",
      [](const std::string& instance_json, std::optional<int> samples,
         std::optional<unsigned long long> seed) {
        const InstanceSpec spec = instance_from_json(instance_json);
        const RunOptions opt =
            merge_options(spec, samples, std::nullopt, seed);
        py::gil_scoped_release release;
        return emit_figure(spec, opt);
      },
      py::arg("instance_json"), py::kw_only(), py::arg("samples") = py::none(),
      py::arg("seed") = py::none(),
      "Schematic SVG of the instance as a string.");

  m.def(
      "canonical_instance",
      [](const std::string& instance_json) {
        return instance_to_json(instance_from_json(instance_json));
      },
      py::arg("instance_json"),
      "Canonical re-emission of an instance; this form is the instance's "
      "identity for deduplication and derived seeding.");
}
