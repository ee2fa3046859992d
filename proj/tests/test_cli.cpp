#include "catch_amalgamated.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Result run(const std::string& args) {
  static int n = 0;
  fs::path err = fs::temp_directory_path() / ("solmine_cli_err_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
  std::string cmd = std::string("'") + SOLMINE_CLI + "' " + args + " 2>'" + err.string() + "'";
  Result r;
  FILE* p = ::popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  fs::remove(err);
  return r;
}

std::string fixture(const std::string& name) { return "'" + std::string(SOLMINE_FIXTURES) + "/" + name + "'"; }

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) { fs::remove_all(path); }
  ~TempDir() { fs::remove_all(path); }
  std::string q(const std::string& sub = {}) const { return "'" + (sub.empty() ? path : path / sub).string() + "'"; }
};

bool has(const std::string& hay, const std::string& needle) { return hay.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("sol prints the record fields", "[cli]") {
  auto r = run("sol A5 '()'");
  CHECK(r.code == 0);
  CHECK(has(r.out, "|Sol_G(x)|: 60\n"));
  CHECK(has(r.out, "Probability(Sol_G(x)): 1\n"));
  CHECK(has(r.out, "Sol_G(x) is a subgroup: true"));

  r = run("sol 'PSL(3,2)' '(2,3,5,4,7,8,6)'");
  CHECK(r.code == 0);
  CHECK(has(r.out, "Group: PSL(3,2) (order 168)"));
  CHECK(has(r.out, "Element: (2,3,5,4,7,8,6) of order 7"));
  CHECK(has(r.out, "Prime divisors of |Sol_G(x)|: [3, 7]"));

  r = run("sol A5 '(1,2)'");
  CHECK(r.code == 2);
  CHECK(has(r.err, "not an element of A5"));
  r = run("sol Q8 '()'");
  CHECK(r.code == 2);
  CHECK(has(r.err, "unknown group"));
  r = run("sol A5 '(1,2'");
  CHECK(r.code == 2);
}

TEST_CASE("check exit codes follow the outcome", "[cli]") {
  auto r = run("check " + fixture("dsl/order_divides.sol") + " --conjugacy-reduction");
  CHECK(r.code == 0);
  CHECK(r.out == "No Counter-examples!\n");

  r = run("check " + fixture("dsl/two_primes.sol"));
  CHECK(r.code == 1);
  CHECK(r.out.starts_with("Conjecture failed for group: PSL(3,2)\n"));
  CHECK(has(r.out, "prime divisors [3, 7]"));

  r = run("check " + fixture("dsl/empty.sol"));
  CHECK(r.code == 2);
  r = run("check " + fixture("dsl/syntax_error.sol"));
  CHECK(r.code == 2);
  CHECK(has(r.err, "1:54"));
  r = run("check /nonexistent/file.sol");
  CHECK(r.code == 2);

  // A budget that runs out is unverifiable, not a pass.
  r = run("check " + fixture("dsl/order_divides.sol") + " --max-checks 3");
  CHECK(r.code == 2);
  CHECK(has(r.err, "E_BUDGET"));
}

TEST_CASE("emit-gap", "[cli]") {
  auto r = run("emit-gap " + fixture("dsl/two_primes.sol") + " --max-order 200");
  CHECK(r.code == 0);
  CHECK(has(r.out, "Conjecture failed for group: "));
  CHECK(has(r.out, "No Counter-examples!"));
}

TEST_CASE("mine writes a replayable archive", "[cli]") {
  TempDir a("solmine_cli_mine_a"), b("solmine_cli_mine_b");
  auto r = run("mine -q " + fixture("mine_fixture.cfg") + " -o " + a.q());
  REQUIRE(r.code == 0);
  CHECK(has(r.out, "Unique Conjectures: 4\nTotal Output: 5\nNo Counter-Examples: 1\nCouldn't Execute Code: 1\n"
                   "Conjecture Failed: 2\n"));
  r = run("mine -q " + fixture("mine_fixture.cfg") + " -o " + b.q());
  REQUIRE(r.code == 0);
  CHECK(slurp(a.path / "ledger.jsonl") == slurp(b.path / "ledger.jsonl"));

  // Refuses to overwrite.
  r = run("mine -q " + fixture("mine_fixture.cfg") + " -o " + a.q());
  CHECK(r.code == 2);
  CHECK(has(r.err, "already holds a run"));

  auto before = slurp(a.path / "report.md");
  r = run("report " + a.q());
  CHECK(r.code == 0);
  CHECK(r.out == before);
  CHECK(slurp(a.path / "report.md") == before);
}

TEST_CASE("mine rejects bad configs before any provider call", "[cli]") {
  TempDir d("solmine_cli_mine_bad");
  auto r = run("mine " + fixture("zero_iterations.cfg") + " -o " + d.q());
  CHECK(r.code == 2);
  CHECK(has(r.err, "iterations must be at least 1"));
  CHECK_FALSE(fs::exists(d.path));

  r = run("mine " + fixture("key_in_config.cfg") + " -o " + d.q());
  CHECK(r.code == 2);
  CHECK(has(r.err, "environment"));
  CHECK_FALSE(has(r.err, "sk-should-never-be-here"));
  CHECK_FALSE(fs::exists(d.path));

  r = run("mine " + fixture("live_missing_key.cfg") + " -o " + d.q());
  CHECK(r.code == 2);
  CHECK(has(r.err, "SOLMINE_TEST_KEY_THAT_IS_NEVER_SET"));
  CHECK_FALSE(fs::exists(d.path));

  r = run("mine --config-help");
  CHECK(r.code == 0);
  CHECK(has(r.out, "api_key_env"));
}

TEST_CASE("reproduce", "[cli]") {
  auto r = run("reproduce gemini-two-primes gemini-probability gpt-conjugacy");
  CHECK(r.code == 0);
  CHECK(has(r.out, "gemini-two-primes: PASS"));
  CHECK(has(r.out, "[ok] Probability(Radical(G)) = 1/60"));
  CHECK(has(r.out, "gpt-conjugacy: PASS"));
  CHECK_FALSE(has(r.out, "FAILED"));

  r = run("reproduce no-such-case");
  CHECK(r.code == 2);
  CHECK(has(r.err, "gemini-two-primes"));
}

TEST_CASE("similarity over a ledger", "[cli]") {
  TempDir run_dir("solmine_cli_sim_run"), out("solmine_cli_sim_out");
  REQUIRE(run("mine -q " + fixture("mine_fixture.cfg") + " -o " + run_dir.q()).code == 0);

  auto r = run("similarity " + run_dir.q("ledger.jsonl") + " " + out.q());
  CHECK(r.code == 0);
  CHECK(has(r.out, "Max"));
  CHECK(has(r.out, "1.0000"));
  CHECK(fs::exists(out.path / "similarity.csv"));

  // One conjecture: a 1x1 matrix and a clear refusal to summarise it.
  std::string first = slurp(run_dir.path / "ledger.jsonl");
  first = first.substr(0, first.find('\n') + 1);
  fs::create_directories(out.path);
  std::ofstream(out.path / "one.jsonl", std::ios::binary) << first;
  r = run("similarity " + out.q("one.jsonl") + " " + out.q("one"));
  CHECK(r.code == 2);
  CHECK(has(r.err, "at least two"));
  CHECK(slurp(out.path / "one" / "similarity.csv") == "\"\",#1\r\n#1,1\r\n");

  // A literature document sharing no tokens gives a minimum of 0.
  std::ofstream(out.path / "lit.txt") << "# unrelated\nzebra quagga okapi\n\nsolubilizer radical\n";
  r = run("similarity " + run_dir.q("ledger.jsonl") + " " + out.q("lit") + " --against " + out.q("lit.txt"));
  CHECK(r.code == 0);
  CHECK(has(r.out, "against 2 documents"));
  CHECK(has(r.out, "0.0000"));
}

TEST_CASE("catalog list and show", "[cli]") {
  auto r = run("catalog list --max-order 200");
  CHECK(r.code == 0);
  CHECK(has(r.out, "A5"));
  CHECK(has(r.out, "PSL(2,7)"));
  CHECK_FALSE(has(r.out, "A6"));
  r = run("catalog show 'PSL(3,2)'");
  CHECK(r.code == 0);
  CHECK(has(r.out, "order = 168"));
  r = run("catalog show nope");
  CHECK(r.code == 2);
  r = run("");
  CHECK(r.code == 2);
  r = run("--help");
  CHECK(r.code == 0);
}
