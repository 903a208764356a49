#include "CLI11.hpp"

#include "dqcert/certify.hpp"
#include "dqcert/dqdimacs.hpp"
#include "dqcert/engine.hpp"
#include "dqcert/fuzz.hpp"
#include "dqcert/oracle.hpp"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace dqcert;

// Exit codes: 10/20 follow the solver-competition convention for TRUE and
// FALSE; 0/3 are validation results; 4 flags a fuzz divergence; 1 covers
// usage, IO, and parse problems; 2 is reserved for internal failures.
constexpr int kExitTrue = 10;
constexpr int kExitFalse = 20;
constexpr int kExitValid = 0;
constexpr int kExitInvalid = 3;
constexpr int kExitDiverged = 4;
constexpr int kExitUsage = 1;
constexpr int kExitInternal = 2;

// The brute-force oracle enumerates universal assignments; beyond this many
// universals it refuses to run, so the CLI rejects such requests up front.
constexpr int kOracleCap = 14;

/// Usage-level failure: reported plainly and mapped to exit code 1.
struct UsageError {
  std::string message;
};

std::optional<std::string> read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

Dqbf parse_formula_file(const std::string &path) {
  auto text = read_file(path);
  if (!text)
    throw UsageError{"cannot read '" + path + "'"};
  ParsedDqbf parsed = parse_dqdimacs(*text);
  for (const std::string &w : parsed.warnings)
    std::cerr << "warning: " << path << ": " << w << "\n";
  return std::move(parsed.formula);
}

struct SolveArgs {
  std::string path;
  std::string mode = "cegis";
  std::string model_path;
  std::string unate = "off";
  std::string interpolation = "mcmillan";
  std::uint64_t max_iterations = 1'000'000;
  std::uint32_t seed = 1; // accepted for uniformity; solving is deterministic
  bool default_value = false;
  bool stats = false;
  bool verbose = false;
};

int cmd_solve(const SolveArgs &a) {
  Dqbf f = parse_formula_file(a.path);

  if (a.mode == "oracle") {
    if (static_cast<int>(f.num_universals()) > kOracleCap) {
      std::cerr << "error: oracle mode enumerates universal assignments and "
                   "refuses more than "
                << kOracleCap << " universals (got " << f.num_universals()
                << ")\n";
      return kExitUsage;
    }
    if (!a.model_path.empty()) {
      std::cerr << "error: oracle mode decides the formula but does not "
                   "build model files; use --mode cegis or basic\n";
      return kExitUsage;
    }
    OracleVerdict v = brute_solve(f, kOracleCap);
    std::cout << (v.is_true ? "s TRUE" : "s FALSE") << "\n";
    return v.is_true ? kExitTrue : kExitFalse;
  }

  EngineConfig cfg;
  cfg.mode = a.mode == "basic" ? SolveMode::Basic : SolveMode::Cegis;
  cfg.default_value = a.default_value;
  cfg.max_iterations = a.max_iterations;
  if (a.unate == "syntactic")
    cfg.unate = UnateMode::Syntactic;
  else if (a.unate == "semantic")
    cfg.unate = UnateMode::Semantic;
  cfg.interpolation = a.interpolation == "pudlak"
                          ? InterpolationSystem::Pudlak
                          : InterpolationSystem::McMillan;

  Verdict v = solve_dqbf(f, cfg);

  if (v.is_true && !a.model_path.empty()) {
    std::ofstream out(a.model_path, std::ios::binary);
    if (!out || !(out << emit_model(f, *v.model)) || !out.flush()) {
      std::cerr << "error: cannot write model file '" << a.model_path
                << "'\n";
      return kExitUsage;
    }
  }

  if (a.stats || a.verbose) {
    std::cout << "c arbiters=" << v.stats.arbiter_vars << "\n";
    std::cout << "c forcing=" << v.stats.forcing_clauses << "\n";
    std::cout << "c iterations=" << v.stats.iterations << "\n";
  }
  if (a.verbose) {
    std::cout << "c definitions=" << v.stats.definitions_found << "\n";
    std::cout << "c definability-queries=" << v.stats.definability_queries
              << "\n";
    std::cout << "c default-retractions=" << v.stats.default_retractions
              << "\n";
    std::cout << "c consistency-checks=" << v.stats.consistency_checks
              << "\n";
    std::cout << "c unate-literals=" << v.stats.unate_literals << "\n";
  }
  std::cout << (v.is_true ? "s TRUE" : "s FALSE") << "\n";
  return v.is_true ? kExitTrue : kExitFalse;
}

int cmd_validate(const std::string &formula_path,
                 const std::string &model_path) {
  Dqbf f = parse_formula_file(formula_path);
  auto text = read_file(model_path);
  if (!text)
    throw UsageError{"cannot read '" + model_path + "'"};
  ParsedModel m = parse_model_file(*text);

  ValidationReport r = validate_model(f, m);
  if (r.valid) {
    std::cout << "v VALID\n";
    return kExitValid;
  }
  std::cout << "v INVALID\n";
  if (r.failing_clause >= 0) {
    // Humans count matrix clauses from 1; the report field stays 0-based.
    std::cout << "c matrix clause " << (r.failing_clause + 1)
              << " is not entailed by the model\n";
    std::cout << "c witness";
    for (Lit l : r.witness.literals())
      std::cout << " " << l.to_dimacs();
    std::cout << " 0\n";
  } else {
    std::cout << "c " << r.reason << "\n";
  }
  return kExitInvalid;
}

struct ExpandArgs {
  std::string path;
  std::string output; // empty: stdout
  int max_universals = kOracleCap;
};

/// Writes the full universal expansion as plain DIMACS: one instantiation
/// per universal assignment, duplicate clauses merged, each annotated
/// variable declared by a header comment
///   c annotated <var> <existential> <key literals> 0
int cmd_expand(const ExpandArgs &a) {
  Dqbf f = parse_formula_file(a.path);
  if (static_cast<int>(f.num_universals()) > a.max_universals) {
    std::cerr << "error: expansion would enumerate 2^" << f.num_universals()
              << " universal assignments; cap is " << a.max_universals
              << "\n";
    return kExitUsage;
  }

  AnnotationContext ctx(f);
  CNF expansion;
  const VarSet &us = f.universals();
  for (std::uint64_t bits = 0; bits < (1ull << us.size()); ++bits) {
    Assignment sigma;
    for (size_t i = 0; i < us.size(); ++i)
      sigma.assign(us[i], (bits >> i) & 1);
    CNF inst = instantiate(f, sigma, ctx);
    expansion.insert(expansion.end(), inst.begin(), inst.end());
  }
  std::sort(expansion.begin(), expansion.end());
  expansion.erase(std::unique(expansion.begin(), expansion.end()),
                  expansion.end());

  std::ostringstream out;
  for (Var av = f.max_var() + 1; av < ctx.first_free_var(); ++av) {
    const auto &[e, key] = ctx.info(av);
    out << "c annotated " << av << " " << e;
    for (Lit l : key.literals())
      out << " " << l.to_dimacs();
    out << " 0\n";
  }
  out << "p cnf " << (ctx.first_free_var() - 1) << " " << expansion.size()
      << "\n";
  for (const Clause &c : expansion) {
    for (Lit l : c)
      out << l.to_dimacs() << " ";
    out << "0\n";
  }

  if (a.output.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream file(a.output, std::ios::binary);
    if (!file || !(file << out.str()) || !file.flush()) {
      std::cerr << "error: cannot write '" << a.output << "'\n";
      return kExitUsage;
    }
  }
  return 0;
}

struct FuzzArgs {
  FuzzOptions opt;
  std::string reproducer_path = "reproducer.dqdimacs";
};

int cmd_fuzz(const FuzzArgs &a) {
  if (a.opt.profile.max_universals > kOracleCap) {
    std::cerr << "error: fuzzing checks against the brute-force oracle, "
                 "which refuses more than "
              << kOracleCap << " universals\n";
    return kExitUsage;
  }
  FuzzReport rep = run_fuzz(a.opt);
  std::cout << "c fuzz instances=" << rep.instances
            << " true=" << rep.n_true << " false=" << rep.n_false << "\n";
  if (!rep.divergence) {
    std::cout << "c fuzz agreement\n";
    return 0;
  }
  const Divergence &d = *rep.divergence;
  std::ofstream out(a.reproducer_path, std::ios::binary);
  std::string body = "c " + d.detail + "\nc seed " + std::to_string(d.seed) +
                     "\n" + write_dqdimacs(d.reproducer);
  if (!out || !(out << body) || !out.flush()) {
    std::cerr << "error: cannot write reproducer '" << a.reproducer_path
              << "'\n";
    return kExitUsage;
  }
  std::cout << "c fuzz divergence seed=" << d.seed << "\n";
  std::cout << "c fuzz detail " << d.detail << "\n";
  std::cout << "c fuzz reproducer " << a.reproducer_path << "\n";
  return kExitDiverged;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"dqcert: a certifying DQBF solver"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  CLI::App *solve = app.add_subcommand(
      "solve", "Decide a DQDIMACS formula; exit 10 for TRUE, 20 for FALSE");
  solve->add_option("file", solve_args.path, "DQDIMACS input")->required();
  solve->add_option("--mode", solve_args.mode,
                    "Solving mode (default: cegis). The oracle decides by "
                    "full expansion and suits only small universal sets")
      ->check(CLI::IsMember({"cegis", "basic", "oracle"}));
  solve->add_option("--model", solve_args.model_path,
                    "Write the Skolem model here on a TRUE verdict");
  solve->add_flag("--default-value", solve_args.default_value,
                  "Assume undefined existentials true instead of false");
  solve->add_option("--unate", solve_args.unate,
                    "Unate literal reduction before solving (default: off)")
      ->check(CLI::IsMember({"off", "syntactic", "semantic"}));
  solve->add_option("--interpolation", solve_args.interpolation,
                    "Interpolation system for definition extraction")
      ->check(CLI::IsMember({"mcmillan", "pudlak"}));
  solve->add_option("--max-iterations", solve_args.max_iterations,
                    "Abort with an internal error beyond this many passes");
  solve->add_option("--seed", solve_args.seed,
                    "Accepted for interface uniformity; solving itself is "
                    "deterministic");
  solve->add_flag("--stats", solve_args.stats,
                  "Print c-line statistics before the verdict");
  solve->add_flag("-v,--verbose", solve_args.verbose,
                  "Print extended statistics");

  std::string validate_formula, validate_model_path;
  CLI::App *validate = app.add_subcommand(
      "validate", "Check a model file against a formula; exit 0 valid, "
                  "3 invalid");
  validate->add_option("formula", validate_formula, "DQDIMACS input")
      ->required();
  validate->add_option("model", validate_model_path, "Model file")
      ->required();

  ExpandArgs expand_args;
  CLI::App *expand = app.add_subcommand(
      "expand", "Write the full universal expansion as annotated DIMACS");
  expand->add_option("file", expand_args.path, "DQDIMACS input")->required();
  expand->add_option("-o,--output", expand_args.output,
                     "Output path (default: stdout)");
  expand->add_option("--max-universals", expand_args.max_universals,
                     "Refuse formulas with more universals than this");

  FuzzArgs fuzz_args;
  CLI::App *fuzz = app.add_subcommand(
      "fuzz", "Differential testing against the brute-force oracle; exit 0 "
              "on agreement, 4 with a reproducer file on divergence");
  fuzz->add_option("--seed", fuzz_args.opt.first_seed,
                   "Seed of the first instance; instance i adds i");
  fuzz->add_option("--count", fuzz_args.opt.count, "Number of instances")
      ->check(CLI::NonNegativeNumber);
  fuzz->add_option("--max-universals", fuzz_args.opt.profile.max_universals,
                   "Sampled instances use at most this many universals")
      ->check(CLI::PositiveNumber);
  fuzz->add_option("--max-existentials",
                   fuzz_args.opt.profile.max_existentials,
                   "Upper bound on existential variables")
      ->check(CLI::NonNegativeNumber);
  fuzz->add_option("--max-clauses", fuzz_args.opt.profile.max_clauses,
                   "Upper bound on clauses")
      ->check(CLI::NonNegativeNumber);
  fuzz->add_option("--max-clause-len", fuzz_args.opt.profile.max_clause_len,
                   "Upper bound on literals per clause")
      ->check(CLI::PositiveNumber);
  fuzz->add_option("--reproducer", fuzz_args.reproducer_path,
                   "Where to write a minimized diverging instance");
  fuzz->add_flag("--inject-flip", fuzz_args.opt.flip_basic_verdict,
                 "Self-test hook: report the basic-mode verdict inverted, "
                 "which must trip the divergence path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (solve->parsed())
      return cmd_solve(solve_args);
    if (validate->parsed())
      return cmd_validate(validate_formula, validate_model_path);
    if (expand->parsed())
      return cmd_expand(expand_args);
    return cmd_fuzz(fuzz_args);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.message << "\n";
    return kExitUsage;
  } catch (const ParseError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
