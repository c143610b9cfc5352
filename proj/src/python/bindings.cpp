#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chccomp/categorizer.hpp"
#include "chccomp/frontend.hpp"
#include "chccomp/job.hpp"
#include "chccomp/normalizer.hpp"
#include "chccomp/scorer.hpp"
#include "chccomp/selector.hpp"

namespace py = pybind11;
using namespace chccomp;

namespace {

py::dict normalize_py(const std::string& text, bool merge) {
  NormalizationResult r = normalize_text(text, NormalizationOptions{merge});
  py::dict out;
  py::list transformations;
  for (auto t : r.transformations) transformations.append(to_string(t));
  out["ok"] = r.ok();
  out["transformations"] = transformations;
  out["text"] = r.ok() ? py::cast(print_script(*r.script)) : py::none();
  if (r.rejection) {
    out["rejection"] = py::make_tuple(to_string(r.rejection->kind), r.rejection->message);
  } else {
    out["rejection"] = py::none();
  }
  return out;
}

py::dict record_dict(const JobRecord& r) {
  py::dict d;
  d["benchmark"] = r.benchmark;
  d["solver"] = r.solver;
  d["configuration"] = r.configuration;
  d["status"] = to_string(r.status);
  d["result"] = to_string(r.result);
  d["cpu_time"] = r.cpu_time;
  d["wall_time"] = r.wall_time;
  return d;
}

py::list ranking_py(const std::string& csv, const std::set<std::string>& hors_concours) {
  py::list out;
  for (const auto& e : rank(score(parse_job_csv(csv), hors_concours))) {
    py::dict d;
    d["place"] = e.place ? py::cast(*e.place) : py::none();
    d["solver"] = e.score.solver;
    d["score"] = e.score.score;
    d["sat"] = e.score.sat;
    d["unsat"] = e.score.unsat;
    d["cpu_time"] = e.score.cpu_time;
    d["wall_time"] = e.score.wall_time;
    d["unique"] = e.score.unique;
    d["hors_concours"] = e.score.hors_concours;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_chccomp, m) {
  m.doc() = "CHC benchmark pipeline core";
  py::register_exception<Error>(m, "ChcCompError", PyExc_ValueError);

  m.def("format_script", [](const std::string& text) { return print_script(parse_script(text)); },
        "Parse and pretty-print an SMT-LIB script.");
  m.def("normalize", &normalize_py, py::arg("text"), py::arg("merge_queries") = true);
  m.def("categorize", [](const std::string& text) { return categorize_text(text).label(); },
        "Track label of a benchmark, or Uncategorized(reason).");
  m.def("fingerprint", [](const std::string& text) { return fingerprint(parse_script(text)); });
  m.def("read_job_csv", [](const std::string& csv) {
    py::list out;
    for (const auto& r : parse_job_csv(csv)) out.append(record_dict(r));
    return out;
  });
  m.def("ranking", &ranking_py, py::arg("csv"), py::arg("hors_concours") = std::set<std::string>{});
  m.def("two_solver_take", [](int cap, int a, int bw, int br, int c) {
    TwoSolverTake t = two_solver_take(cap, a, bw, br, c, SelectionFractions{});
    return py::dict(py::arg("a") = t.a, py::arg("bw") = t.bw, py::arg("br") = t.br, py::arg("c") = t.c);
  });
  m.def("single_solver_take", [](int cap, int solved, int unsolved) {
    SingleSolverTake t = single_solver_take(cap, solved, unsolved, SelectionFractions{});
    return py::dict(py::arg("solved") = t.solved, py::arg("unsolved") = t.unsolved);
  });
}
