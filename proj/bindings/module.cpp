#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dqcert/certify.hpp"
#include "dqcert/dqdimacs.hpp"
#include "dqcert/engine.hpp"
#include "dqcert/oracle.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace py = pybind11;
using namespace dqcert;

namespace {

Clause clause_from_ints(const std::vector<int64_t> &lits) {
  Clause c;
  c.reserve(lits.size());
  for (int64_t n : lits)
    c.push_back(Lit::from_dimacs(n));
  return c;
}

std::vector<int> clause_to_ints(const Clause &c) {
  std::vector<int> out;
  out.reserve(c.size());
  for (Lit l : c)
    out.push_back(l.to_dimacs());
  return out;
}

std::map<Var, bool> assignment_to_map(const Assignment &a) {
  std::map<Var, bool> out;
  for (Lit l : a.literals())
    out[l.var()] = !l.negated();
  return out;
}

EngineConfig config_from_args(const std::string &mode, bool default_value,
                              const std::string &unate,
                              const std::string &interpolation,
                              uint64_t max_iterations) {
  EngineConfig cfg;
  if (mode == "basic")
    cfg.mode = SolveMode::Basic;
  else if (mode == "cegis")
    cfg.mode = SolveMode::Cegis;
  else
    throw ContractError("unknown mode: " + mode);
  if (unate == "off")
    cfg.unate = UnateMode::Off;
  else if (unate == "syntactic")
    cfg.unate = UnateMode::Syntactic;
  else if (unate == "semantic")
    cfg.unate = UnateMode::Semantic;
  else
    throw ContractError("unknown unate mode: " + unate);
  if (interpolation == "mcmillan")
    cfg.interpolation = InterpolationSystem::McMillan;
  else if (interpolation == "pudlak")
    cfg.interpolation = InterpolationSystem::Pudlak;
  else
    throw ContractError("unknown interpolation system: " + interpolation);
  cfg.default_value = default_value;
  cfg.max_iterations = max_iterations;
  return cfg;
}

struct PySolveResult {
  bool is_true = false;
  std::optional<std::string> model;
  EngineStats stats;
};

struct PyValidation {
  bool valid = false;
  std::string reason;
  int failing_clause = -1;
  std::map<Var, bool> witness;
  std::vector<double> clause_seconds;
};

using PyTables =
    std::map<Var, std::vector<std::pair<std::map<Var, bool>, bool>>>;

struct PyOracleResult {
  bool is_true = false;
  PyTables tables;
};

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "DQBF solving, certification, and model validation";
  m.attr("__version__") = "0.1.0";

  // Base first: the translator chain tries newest registrations first, so
  // the derived types must be registered after their base.
  py::register_exception<Error>(m, "DqcertError", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<InvariantError>(m, "InvariantError",
                                         PyExc_RuntimeError);

  py::class_<Dqbf>(m, "Dqbf", "Prenex-CNF formula with explicit dependency "
                              "sets; literals are DIMACS integers.")
      .def(py::init<>())
      .def("add_universal", &Dqbf::add_universal, py::arg("v"))
      .def("add_existential", &Dqbf::add_existential, py::arg("v"),
           py::arg("deps"))
      .def(
          "add_clause",
          [](Dqbf &f, const std::vector<int64_t> &literals) {
            return f.add_clause(clause_from_ints(literals));
          },
          py::arg("literals"),
          "Appends a clause; returns False when it was a dropped tautology.")
      .def("universals",
           [](const Dqbf &f) { return f.universal_order(); })
      .def("existentials",
           [](const Dqbf &f) { return f.existential_order(); })
      .def("deps", [](const Dqbf &f, Var e) { return f.deps(e); },
           py::arg("e"))
      .def("matrix",
           [](const Dqbf &f) {
             std::vector<std::vector<int>> out;
             out.reserve(f.matrix().size());
             for (const Clause &c : f.matrix())
               out.push_back(clause_to_ints(c));
             return out;
           })
      .def_property_readonly("num_universals", &Dqbf::num_universals)
      .def_property_readonly("num_existentials", &Dqbf::num_existentials)
      .def_property_readonly("max_var", &Dqbf::max_var)
      .def("to_dqdimacs", [](const Dqbf &f) { return write_dqdimacs(f); })
      .def("__str__", [](const Dqbf &f) { return write_dqdimacs(f); })
      .def("__repr__", [](const Dqbf &f) {
        return "<dqcert.Dqbf " + std::to_string(f.num_universals()) +
               " universals, " + std::to_string(f.num_existentials()) +
               " existentials, " + std::to_string(f.matrix().size()) +
               " clauses>";
      });

  py::class_<ParsedDqbf>(m, "ParsedDqbf",
                         "Parse result: the formula plus non-fatal warnings.")
      .def_readonly("formula", &ParsedDqbf::formula)
      .def_readonly("warnings", &ParsedDqbf::warnings);

  m.def("parse_dqdimacs", &parse_dqdimacs, py::arg("text"),
        "Parses DQDIMACS text; raises ParseError on malformed input.");
  m.def("write_dqdimacs", &write_dqdimacs, py::arg("formula"));

  py::class_<EngineStats>(m, "SolveStats")
      .def_readonly("iterations", &EngineStats::iterations)
      .def_readonly("arbiter_vars", &EngineStats::arbiter_vars)
      .def_readonly("arbiter_pairs", &EngineStats::arbiter_pairs)
      .def_readonly("arbiter_solver_clauses",
                    &EngineStats::arbiter_solver_clauses)
      .def_readonly("forcing_clauses", &EngineStats::forcing_clauses)
      .def_readonly("definability_queries",
                    &EngineStats::definability_queries)
      .def_readonly("definitions_found", &EngineStats::definitions_found)
      .def_readonly("default_retractions",
                    &EngineStats::default_retractions)
      .def_readonly("consistency_checks", &EngineStats::consistency_checks)
      .def_readonly("unate_literals", &EngineStats::unate_literals)
      .def("__repr__", [](const EngineStats &s) {
        return "<dqcert.SolveStats iterations=" +
               std::to_string(s.iterations) +
               " arbiters=" + std::to_string(s.arbiter_vars) +
               " forcing=" + std::to_string(s.forcing_clauses) + ">";
      });

  py::class_<PySolveResult>(m, "SolveResult",
                            "Verdict plus, for true formulas, the model in "
                            "the text exchange format.")
      .def_readonly("is_true", &PySolveResult::is_true)
      .def_readonly("model", &PySolveResult::model)
      .def_readonly("stats", &PySolveResult::stats)
      .def("__bool__",
           [](const PySolveResult &r) { return r.is_true; })
      .def("__repr__", [](const PySolveResult &r) {
        return std::string("<dqcert.SolveResult ") +
               (r.is_true ? "TRUE" : "FALSE") + ">";
      });

  m.def(
      "solve",
      [](const Dqbf &f, const std::string &mode, bool default_value,
         const std::string &unate, const std::string &interpolation,
         uint64_t max_iterations) {
        Verdict v = solve_dqbf(f, config_from_args(mode, default_value, unate,
                                                   interpolation,
                                                   max_iterations));
        PySolveResult r;
        r.is_true = v.is_true;
        r.stats = v.stats;
        if (v.is_true)
          r.model = emit_model(f, *v.model);
        return r;
      },
      py::arg("formula"), py::arg("mode") = "cegis",
      py::arg("default_value") = false, py::arg("unate") = "off",
      py::arg("interpolation") = "mcmillan",
      py::arg("max_iterations") = uint64_t{1'000'000},
      "Decides the formula; modes: 'basic' (define everything, then search "
      "arbiter assignments) or 'cegis' (counterexample-guided loop).");

  py::class_<PyValidation>(m, "ValidationReport")
      .def_readonly("valid", &PyValidation::valid)
      .def_readonly("reason", &PyValidation::reason)
      .def_readonly("failing_clause", &PyValidation::failing_clause)
      .def_readonly("witness", &PyValidation::witness)
      .def_readonly("clause_seconds", &PyValidation::clause_seconds)
      .def("__bool__", [](const PyValidation &r) { return r.valid; })
      .def("__repr__", [](const PyValidation &r) {
        return std::string("<dqcert.ValidationReport ") +
               (r.valid ? "valid" : "invalid: " + r.reason) + ">";
      });

  m.def(
      "validate_model",
      [](const Dqbf &f, const std::string &model_text) {
        ValidationReport rep = validate_model(f, parse_model_file(model_text));
        PyValidation out;
        out.valid = rep.valid;
        out.reason = rep.reason;
        out.failing_clause = rep.failing_clause;
        out.witness = assignment_to_map(rep.witness);
        out.clause_seconds = rep.clause_seconds;
        return out;
      },
      py::arg("formula"), py::arg("model_text"),
      "Independently checks a model in the text format against the formula: "
      "structural pass, then one entailment proof per matrix clause.");

  m.def(
      "enumerate_model_check",
      [](const Dqbf &f, const std::string &model_text, int max_universals) {
        return enumerate_model_check(f, parse_model_file(model_text),
                                     max_universals);
      },
      py::arg("formula"), py::arg("model_text"),
      py::arg("max_universals") = 14,
      "Exhaustive semantic check of a model over every universal "
      "assignment; refuses formulas with too many universals.");

  py::class_<PyOracleResult>(m, "OracleResult",
                             "Ground-truth verdict; tables maps each "
                             "existential to (dependency assignment, value) "
                             "rows when true.")
      .def_readonly("is_true", &PyOracleResult::is_true)
      .def_readonly("tables", &PyOracleResult::tables)
      .def("__bool__",
           [](const PyOracleResult &r) { return r.is_true; })
      .def("__repr__", [](const PyOracleResult &r) {
        return std::string("<dqcert.OracleResult ") +
               (r.is_true ? "TRUE" : "FALSE") + ">";
      });

  m.def(
      "brute_solve",
      [](const Dqbf &f, int max_universals) {
        OracleVerdict v = brute_solve(f, max_universals);
        PyOracleResult out;
        out.is_true = v.is_true;
        for (const auto &[e, rows] : v.tables) {
          auto &dst = out.tables[e];
          for (const auto &[key, value] : rows)
            dst.emplace_back(assignment_to_map(key), value);
        }
        return out;
      },
      py::arg("formula"), py::arg("max_universals") = 14,
      "Decides by full universal expansion; exponential, refuses formulas "
      "with too many universals.");

  m.def(
      "random_dqbf",
      [](int n_universals, int n_existentials, int max_deps, int n_clauses,
         int clause_len, uint32_t seed) {
        RandomDqbfParams p;
        p.n_universals = n_universals;
        p.n_existentials = n_existentials;
        p.max_deps = max_deps;
        p.n_clauses = n_clauses;
        p.clause_len = clause_len;
        return random_dqbf(p, seed);
      },
      py::arg("n_universals") = 3, py::arg("n_existentials") = 2,
      py::arg("max_deps") = 3, py::arg("n_clauses") = 8,
      py::arg("clause_len") = 3, py::arg("seed") = 1,
      "Deterministic random instance for differential testing.");
}
