#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "microasp/benchgen.hpp"
#include "microasp/grounder.hpp"
#include "microasp/oracle.hpp"
#include "microasp/report.hpp"
#include "microasp/strategies.hpp"

namespace py = pybind11;
using namespace microasp;

namespace {

StrategyKind strategy_of(const std::string& name) {
  auto k = parse_strategy(name);
  if (!k) throw py::value_error("unknown strategy: " + name);
  return *k;
}

StrategyOptions options_of(std::uint64_t seed, std::optional<std::uint64_t> conflicts,
                           std::optional<double> timeout_s, std::optional<std::size_t> max_lazy) {
  StrategyOptions o;
  o.solver.seed = seed;
  o.solver.conflict_budget = conflicts;
  o.solver.time_budget_s = timeout_s;
  o.max_lazy_per_check = max_lazy;
  return o;
}

}  // namespace

PYBIND11_MODULE(_microasp, m) {
  m.doc() = "Ground-and-solve for normal logic programs with deferred constraints";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<GroundingError>(m, "GroundingError", PyExc_ValueError);
  py::register_exception<OracleLimitError>(m, "OracleLimitError", PyExc_OverflowError);

  m.def("normalize", [](const std::string& text) { return to_string(parse_program(text)); },
        py::arg("text"), "Parse a program and print it back in canonical form.");

  m.def("ground",
        [](const std::string& text, bool include_deferred) {
          return to_string(ground_program(parse_program(text), GroundOptions{include_deferred}));
        },
        py::arg("text"), py::arg("include_deferred") = false);

  m.def("solve_json",
        [](const std::string& text, const std::string& strategy, std::uint64_t seed,
           std::optional<std::uint64_t> conflicts, std::optional<double> timeout_s,
           std::optional<std::size_t> max_lazy_per_check) {
          Program p = parse_program(text);
          auto o = options_of(seed, conflicts, timeout_s, max_lazy_per_check);
          SolveResult r;
          {
            py::gil_scoped_release release;
            r = solve(p, strategy_of(strategy), o);
          }
          RunInfo info{"<string>", strategy, seed, conflicts, timeout_s};
          return report_json(r, info).dump();
        },
        py::arg("text"), py::arg("strategy") = "full", py::arg("seed") = 0,
        py::arg("conflicts") = py::none(), py::arg("timeout_s") = py::none(),
        py::arg("max_lazy_per_check") = py::none());

  m.def("enumerate_models",
        [](const std::string& text, const std::string& strategy, std::size_t limit, std::uint64_t seed) {
          Program p = parse_program(text);
          auto e = enumerate_models(p, strategy_of(strategy), limit, options_of(seed, {}, {}, {}));
          return py::make_tuple(e.models, status_name(e.status));
        },
        py::arg("text"), py::arg("strategy") = "full", py::arg("limit") = 0, py::arg("seed") = 0);

  m.def("oracle_models",
        [](const std::string& text) {
          GroundProgram gp = ground_program(parse_program(text), GroundOptions{true});
          return named_models(gp.atoms, enumerate_stable_models(gp));
        },
        py::arg("text"), "All stable models by exhaustive search (small programs only).");

  m.def("gen_marriage", [](int n, int k, std::uint64_t seed) { return marriage_program(make_marriage(n, k, seed)); },
        py::arg("n"), py::arg("k"), py::arg("seed") = 1);
  m.def("gen_3sat", [](int vars, double ratio, std::uint64_t seed) { return sat_program(make_3sat(vars, ratio, seed)); },
        py::arg("vars"), py::arg("ratio"), py::arg("seed") = 1);
  m.def("gen_packing",
        [](int width, int height, const std::vector<int>& sizes) {
          if (width <= 0 || height <= 0) throw py::value_error("box sides must be positive");
          return packing_program(PackingInstance{width, height, sizes});
        },
        py::arg("width"), py::arg("height"), py::arg("sizes"));

  m.attr("strategies") = std::vector<std::string>{"full", "lazy", "eager", "post"};
}
