#include "doctest.h"

#ifdef DQCERT_CLI_PATH

#include "dqcert/dqdimacs.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>
#include <sys/wait.h>
#include <unistd.h>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

/// Runs the installed binary with the given arguments, capturing stdout.
/// stderr is dropped: the tests assert exit codes and stdout bytes.
RunResult run_cli(const std::string &args) {
  std::string cmd = std::string(DQCERT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE *pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0)
    out.append(buf, n);
  int status = pclose(pipe);
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = std::move(out);
  return r;
}

std::string data(const std::string &name) {
  return std::string(DQCERT_TEST_DATA_DIR) + "/" + name;
}

/// Per-process scratch file that cleans up after itself.
struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string &stem) {
    path = std::filesystem::temp_directory_path() /
           (stem + "." + std::to_string(getpid()));
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
  void write(const std::string &content) const {
    std::ofstream out(path, std::ios::binary);
    out << content;
  }
  std::string read() const {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in),
            std::istreambuf_iterator<char>()};
  }
  std::string str() const { return path.string(); }
};

} // namespace

TEST_CASE("cli: solve verdicts and exit codes") {
  RunResult t = run_cli("solve " + data("i1.dqdimacs"));
  CHECK(t.exit_code == 10);
  CHECK(t.out == "s TRUE\n");

  RunResult f = run_cli("solve " + data("i2.dqdimacs"));
  CHECK(f.exit_code == 20);
  CHECK(f.out == "s FALSE\n");

  CHECK(run_cli("solve /nonexistent.dqdimacs").exit_code == 1);
}

TEST_CASE("cli: statistics precede the verdict line") {
  RunResult r = run_cli("solve --stats " + data("i1.dqdimacs"));
  CHECK(r.exit_code == 10);
  CHECK(r.out == "c arbiters=0\nc forcing=0\nc iterations=1\ns TRUE\n");

  RunResult basic =
      run_cli("solve --stats --mode basic " + data("i3.dqdimacs"));
  CHECK(basic.exit_code == 10);
  CHECK(basic.out == "c arbiters=1\nc forcing=0\nc iterations=1\ns TRUE\n");

  RunResult verbose = run_cli("solve -v " + data("i3.dqdimacs"));
  CHECK(verbose.exit_code == 10);
  CHECK(verbose.out.find("c forcing=1\n") != std::string::npos);
  CHECK(verbose.out.find("c definitions=1\n") != std::string::npos);
  CHECK(verbose.out.find("c consistency-checks=1\n") != std::string::npos);
  // The verdict stays last.
  CHECK(verbose.out.substr(verbose.out.size() - 7) == "s TRUE\n");
}

TEST_CASE("cli: model emission and validation round trip") {
  TempFile model("dqcert_cli_model");
  RunResult solve = run_cli("solve --mode basic --model " + model.str() +
                            " " + data("i3.dqdimacs"));
  REQUIRE(solve.exit_code == 10);
  CHECK(model.read() == "c skolem 2 depends 0\n"
                        "c aux-range 3 2\n"
                        "p cnf 2 1\n"
                        "2 0\n");

  RunResult ok = run_cli("validate " + data("i3.dqdimacs") + " " +
                         model.str());
  CHECK(ok.exit_code == 0);
  CHECK(ok.out == "v VALID\n");

  // A FALSE verdict must not leave a model file behind.
  TempFile none("dqcert_cli_nomodel");
  RunResult f = run_cli("solve --model " + none.str() + " " +
                        data("i2.dqdimacs"));
  CHECK(f.exit_code == 20);
  CHECK_FALSE(std::filesystem::exists(none.path));
}

TEST_CASE("cli: validation failures name the clause 1-based") {
  TempFile wrong("dqcert_cli_wrong");
  wrong.write("c skolem 2 depends 1 0\nc aux-range 3 2\n"
              "p cnf 2 2\n2 1 0\n-2 -1 0\n");
  RunResult r = run_cli("validate " + data("i1.dqdimacs") + " " +
                        wrong.str());
  CHECK(r.exit_code == 3);
  CHECK(r.out == "v INVALID\n"
                 "c matrix clause 1 is not entailed by the model\n"
                 "c witness 1 -2 0\n");

  TempFile truncated("dqcert_cli_trunc");
  truncated.write("c skolem 2 depends 1 0\n");
  CHECK(run_cli("validate " + data("i1.dqdimacs") + " " + truncated.str())
            .exit_code == 1);
}

TEST_CASE("cli: oracle mode") {
  CHECK(run_cli("solve --mode oracle " + data("i1.dqdimacs")).exit_code ==
        10);
  CHECK(run_cli("solve --mode oracle " + data("i5.dqdimacs")).exit_code ==
        20);

  // Oracle mode enumerates universal assignments; too many is a usage
  // error, detected before any solving.
  TempFile wide("dqcert_cli_wide");
  {
    std::string text = "p cnf 16 1\na";
    for (int u = 1; u <= 15; ++u)
      text += " " + std::to_string(u);
    text += " 0\nd 16 0\n16 0\n";
    wide.write(text);
  }
  CHECK(run_cli("solve --mode oracle " + wide.str()).exit_code == 1);
  CHECK(run_cli("solve " + wide.str()).exit_code == 10);

  TempFile model("dqcert_cli_oracle_model");
  CHECK(run_cli("solve --mode oracle --model " + model.str() + " " +
                data("i1.dqdimacs"))
            .exit_code == 1);
}

TEST_CASE("cli: usage errors") {
  CHECK(run_cli("").exit_code == 1);               // subcommand required
  CHECK(run_cli("solve").exit_code == 1);          // file required
  CHECK(run_cli("solve --bogus x").exit_code == 1);
  CHECK(run_cli("solve --mode wat x").exit_code == 1);

  TempFile bad("dqcert_cli_badinput");
  bad.write("p cnf two clauses\n");
  CHECK(run_cli("solve " + bad.str()).exit_code == 1);

  RunResult help = run_cli("--help");
  CHECK(help.exit_code == 0);
  for (const char *sub : {"solve", "validate", "expand", "fuzz"})
    CHECK(help.out.find(sub) != std::string::npos);
}

TEST_CASE("cli: internal invariant failures exit with 2") {
  // i3 in cegis mode needs two passes; a cap of one trips the internal
  // iteration guard, which is not a usage error.
  CHECK(run_cli("solve --max-iterations 1 " + data("i3.dqdimacs"))
            .exit_code == 2);
}

TEST_CASE("cli: expansion dump") {
  RunResult r = run_cli("expand " + data("i2.dqdimacs"));
  CHECK(r.exit_code == 0);
  CHECK(r.out == "c annotated 4 3 -1 0\n"
                 "c annotated 5 3 1 0\n"
                 "p cnf 5 4\n"
                 "4 0\n"
                 "-4 0\n"
                 "5 0\n"
                 "-5 0\n");

  TempFile out("dqcert_cli_expansion");
  RunResult to_file =
      run_cli("expand -o " + out.str() + " " + data("i2.dqdimacs"));
  CHECK(to_file.exit_code == 0);
  CHECK(out.read() == r.out);

  CHECK(run_cli("expand --max-universals 1 " + data("i2.dqdimacs"))
            .exit_code == 1);
}

TEST_CASE("cli: fuzz agreement and self-test divergence") {
  RunResult ok = run_cli("fuzz --count 30 --seed 5");
  CHECK(ok.exit_code == 0);
  CHECK(ok.out.find("c fuzz instances=30 ") == 0);
  CHECK(ok.out.find("c fuzz agreement\n") != std::string::npos);

  RunResult empty = run_cli("fuzz --count 0");
  CHECK(empty.exit_code == 0);
  CHECK(empty.out.find("c fuzz instances=0 true=0 false=0\n") == 0);

  // The injected verdict flip must be caught immediately and produce a
  // parseable reproducer.
  TempFile repro("dqcert_cli_repro");
  RunResult bad = run_cli("fuzz --count 5 --inject-flip --reproducer " +
                          repro.str());
  CHECK(bad.exit_code == 4);
  CHECK(bad.out.find("c fuzz divergence seed=1\n") != std::string::npos);
  CHECK(bad.out.find("c fuzz reproducer ") != std::string::npos);
  REQUIRE(std::filesystem::exists(repro.path));
  CHECK_NOTHROW(dqcert::parse_dqdimacs(repro.read()));

  CHECK(run_cli("fuzz --max-universals 30").exit_code == 1);
}

TEST_CASE("cli: identical invocations produce identical bytes") {
  const std::vector<std::string> commands = {
      "solve --stats --mode basic " + data("i5.dqdimacs"),
      "fuzz --count 25 --seed 11",
      "expand " + data("i5.dqdimacs"),
  };
  for (const std::string &cmd : commands) {
    RunResult a = run_cli(cmd);
    RunResult b = run_cli(cmd);
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.out == b.out);
  }
}

#else

TEST_CASE("cli: binary not built" * doctest::skip()) {}

#endif
