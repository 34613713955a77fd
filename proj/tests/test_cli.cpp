#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "pml/base.hpp"

// End-to-end runs of the command line tool against fixture files.  The
// binary path arrives in PML_BIN.

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exitCode;
  std::string out;
};

RunResult run(const std::string& args) {
  const char* bin = std::getenv("PML_BIN");
  REQUIRE(bin != nullptr);
  std::string cmd = std::string(bin) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

struct Fixtures {
  fs::path dir;
  Fixtures() {
    dir = fs::temp_directory_path() /
          ("pml_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    write("two.km", "worlds 2\nrel R/2 : (0,1)\nprop p : 1\n");
    write("loop.km", "worlds 1\nrel R/2 : (0,0)\n");
    write("four.km", "worlds 4\nrel R/2 : (0,1) (2,3)\n");
    write("phi.f", "<R>(p)\n");
  }
  ~Fixtures() { fs::remove_all(dir); }
  void write(const std::string& name, const std::string& content) {
    std::ofstream f(dir / name);
    f << content;
  }
  std::string path(const std::string& name) const {
    return (dir / name).string();
  }
};

}  // namespace

TEST_CASE("check: truth sets, engines, --expect and exit codes") {
  Fixtures fx;
  auto r = run("check " + fx.path("two.km") + " \"<R>(p)\"");
  CHECK(r.exitCode == 0);
  CHECK(r.out == "{0}\n");
  auto naive = run("check " + fx.path("two.km") + " \"<R>(p)\" --naive");
  CHECK(naive.out == "{0}\n");
  auto fromFile =
      run("check " + fx.path("two.km") + " @" + fx.path("phi.f"));
  CHECK(fromFile.out == "{0}\n");
  CHECK(run("check " + fx.path("two.km") + " \"<R>(p)\" --expect 0").exitCode == 0);
  CHECK(run("check " + fx.path("two.km") + " \"<R>(p)\" --expect 1").exitCode == 1);
  auto machine = run("check " + fx.path("two.km") + " \"<!R>(p)\" --machine");
  CHECK(machine.out == "engine labeling\ntruthset 1\ncount 1\n");
}

TEST_CASE("check: usage and format errors exit 2") {
  Fixtures fx;
  CHECK(run("check " + fx.path("two.km") + " \"<R>(p\"").exitCode == 2);
  CHECK(run("check /nonexistent.km \"p\"").exitCode == 2);
  CHECK(run("check " + fx.path("two.km") + " \"<Q>(p)\"").exitCode == 2);
  CHECK(run("nonsense").exitCode == 2);
}

TEST_CASE("encode: golden bytes") {
  Fixtures fx;
  auto r = run("encode " + fx.path("four.km"));
  CHECK(r.exitCode == 0);
  CHECK(r.out == "1111>0001#1011\nsize 12\n");
  auto m = run("encode " + fx.path("two.km") + " --machine");
  CHECK(m.out == "bytes 11>01\nsize 4\n");
}

TEST_CASE("tables: listing with indices") {
  auto r = run("tables --vocab R/2 --arity 2");
  CHECK(r.exitCode == 0);
  CHECK(r.out ==
        "1: {R, sR}\n2: {R, !sR}\n3: {!R, sR}\n4: {!R, !sR}\n");
  auto m = run("tables --vocab R/2 --arity 2 --machine");
  CHECK(m.out.find("table 1 +01R +10R") != std::string::npos);
  CHECK(m.out.find("count 4") != std::string::npos);
}

TEST_CASE("normalize-term") {
  auto r = run("normalize-term \"!(R & !S)\"");
  CHECK(r.exitCode == 0);
  CHECK(r.out == "!(R \\ S)\n");
  auto m = run("normalize-term \"swp(!R)\" --machine");
  CHECK(m.out.find("normalized !swp(R)") != std::string::npos);
  CHECK(m.out.find("negated yes") != std::string::npos);
}

TEST_CASE("sat: verdicts, witness files and exit codes") {
  Fixtures fx;
  auto unsat = run("sat \"(p & ~p)\" --max-worlds 3");
  CHECK(unsat.exitCode == 1);
  CHECK(unsat.out == "exhausted 3\n");
  std::string witness = fx.path("w.km");
  auto sat = run("sat \"<R>(p)\" --max-worlds 3 --witness " + witness);
  CHECK(sat.exitCode == 0);
  auto check = run("check " + witness + " \"<R>(p)\"");
  CHECK(check.out.find("{") == 0);
  CHECK(check.out != "{}\n");
}

TEST_CASE("sat: budget cap exits 3") {
  // an unbounded run would grind through the ternary space; the budget from
  // the environment turns it into exit 3
  const char* bin = std::getenv("PML_BIN");
  std::string cmd = std::string("PML_BUDGET_MS=50 ") + bin +
                    " sat \"(<T>(p, q) & ~<T>(p, q))\" --max-worlds 4 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::string out;
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
  int status = pclose(pipe);
  CHECK(WEXITSTATUS(status) == 3);
  CHECK(out.find("kind=budget") != std::string::npos);
}

TEST_CASE("reduce-neg: stats and deterministic output") {
  auto r = run("reduce-neg \"(<R>(p) & <!R>(q))\"");
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("theta: ((<R_1>(p) & <R_2>(q)) &") != std::string::npos);
  CHECK(r.out.find("conjuncts(eta) = 1") != std::string::npos);
  auto m1 = run("reduce-neg \"(<R>(p) & <!R>(q))\" --machine");
  auto m2 = run("reduce-neg \"(<R>(p) & <!R>(q))\" --machine");
  CHECK(m1.out == m2.out);  // byte-identical reruns
  CHECK(m1.out.find("eta-conjuncts 1") != std::string::npos);
  CHECK(run("reduce-neg \"<(R & S)>(p)\"").exitCode == 2);
}

TEST_CASE("reduce-tables: stats and table map") {
  Fixtures fx;
  auto r = run("reduce-tables \"<(R & swp(R))>(q)\"");
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("table T2_1 = {R, sR}") != std::string::npos);
  CHECK(r.out.find("xi1=256") != std::string::npos);
  std::string out = fx.path("theta.f");
  auto m = run("reduce-tables \"<R>(q)\" --machine --out " + out);
  CHECK(m.exitCode == 0);
  CHECK(m.out.find("psi-range") != std::string::npos);
  CHECK(std::ifstream(out).good());
}

TEST_CASE("verify-reduction: both kinds pass end to end") {
  auto neg = run("verify-reduction \"(<R>(p) & <!R>(q))\" --kind neg "
                 "--max-worlds 2 --machine");
  CHECK(neg.exitCode == 0);
  CHECK(neg.out.find("transfer PASS") != std::string::npos);
  auto tab = run("verify-reduction \"<R>(q)\" --kind tables --max-worlds 2 "
                 "--machine");
  CHECK(tab.exitCode == 0);
  CHECK(tab.out.find("backward-phi-star PASS") != std::string::npos);
  auto unsat = run("verify-reduction \"(p & ~p)\" --kind neg --max-worlds 2");
  CHECK(unsat.exitCode == 1);
}
