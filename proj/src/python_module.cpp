#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kergen/cli.hpp"
#include "kergen/magnus.hpp"

namespace py = pybind11;
using kergen::cli::json;

namespace {

std::string run_job_text(const std::string& job_text, unsigned jobs, std::uint64_t budget, std::size_t cap) {
  kergen::cli::GlobalOptions o;
  o.jobs = jobs;
  o.budget_prefixes = budget;
  o.cap_order = cap;
  json job;
  try {
    job = json::parse(job_text);
  } catch (const json::exception& e) {
    throw kergen::InvalidInput(std::string("malformed job: ") + e.what());
  }
  json rep;
  {
    py::gil_scoped_release release;
    rep = kergen::cli::run_job(job, o);
  }
  return rep.dump();
}

}  // namespace

PYBIND11_MODULE(_kergen, m) {
  m.doc() = "Bindings for the kergen engine";
  py::register_exception<kergen::Error>(m, "KergenError");

  m.attr("schema_version") = kergen::cli::kSchemaVersion;
  m.def("commands", &kergen::cli::known_commands);
  m.def("run_job_json", &run_job_text, py::arg("job"), py::arg("jobs") = 1u,
        py::arg("budget_prefixes") = kergen::kDefaultPrefixBudget, py::arg("cap_order") = kergen::kDefaultClosureCap,
        "Run one job given as JSON text and return the report as JSON text.");

  m.def("lyndon_words", &kergen::lyndon_words, py::arg("k"), py::arg("n"));
  m.def("lyndon_count", &kergen::lyndon_count, py::arg("k"), py::arg("n"));
  m.def("tau", &kergen::tau, py::arg("word"));
  m.def(
      "magnus_component",
      [](const kergen::FreeWord& w, unsigned k, unsigned p, unsigned deg, unsigned d) {
        return kergen::magnus_image(w, k, p, deg).component(d);
      },
      py::arg("word"), py::arg("k"), py::arg("p"), py::arg("deg"), py::arg("degree"));
  m.def(
      "zassenhaus_membership",
      [](const kergen::FreeWord& w, unsigned k, unsigned p, unsigned n) {
        auto v = kergen::zassenhaus_membership(w, k, p, n);
        return py::dict(py::arg("member") = v.member(), py::arg("magnus") = v.magnus, py::arg("matrix") = v.matrix,
                        py::arg("matrix_ran") = v.matrix_ran, py::arg("tuples") = v.tuples);
      },
      py::arg("word"), py::arg("k"), py::arg("p"), py::arg("n"));
}
