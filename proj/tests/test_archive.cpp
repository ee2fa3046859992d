#include "catch_amalgamated.hpp"
#include "solmine/archive.hpp"
#include "solmine/llm/run_config.hpp"
#include "solmine/similarity.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace solmine;
using namespace solmine::archive;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) { fs::remove_all(path); }
  ~TempDir() { fs::remove_all(path); }
};

// Runs the five-step fixture into `dir`, checking the ledger after each step.
std::vector<llm::MineRecord> write_fixture_run(const fs::path& dir) {
  auto cfg = llm::load_run_config(fs::path(SOLMINE_FIXTURES) / "mine_fixture.cfg");
  auto settings = llm::make_settings(cfg);
  auto state = llm::make_prompt_state(cfg);
  llm::TransportPool pool(cfg.base_dir);
  llm::LogicalClock clock;
  RunWriter w(dir, cfg.source);
  llm::mine_run(state, settings, cfg.iterations, pool, clock, [&](const llm::MineRecord& r, const llm::PromptState& s) {
    w.append(r, s);
    // Everything so far is already on disk.
    CHECK(read_ledger(dir / kLedgerFile).size() == r.id);
    std::size_t lines = 0;
    std::istringstream f(slurp(dir / kFalsifiedFile));
    for (std::string l; std::getline(f, l);) ++lines;
    CHECK(lines == s.falsified.size());
  });
  w.finish();
  return w.records();
}

}  // namespace

TEST_CASE("a run directory holds the five artifacts", "[archive]") {
  TempDir t("solmine_archive_a");
  auto records = write_fixture_run(t.path);
  for (const char* f : {kConfigFile, kLedgerFile, kFalsifiedFile, kSimilarityFile, kReportFile})
    CHECK(fs::exists(t.path / f));
  CHECK_FALSE(fs::exists(t.path / kLockFile));
  CHECK(slurp(t.path / kConfigFile) == slurp(fs::path(SOLMINE_FIXTURES) / "mine_fixture.cfg"));

  auto back = read_ledger(t.path / kLedgerFile);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < back.size(); ++i) CHECK(llm::to_json_line(back[i]) == llm::to_json_line(records[i]));

  auto report = slurp(t.path / kReportFile);
  CHECK(report.find("| Source | Unique Conjectures | Total Output | No Counter-Examples | Couldn't Execute Code | "
                    "Conjecture Failed |") != std::string::npos);
  CHECK(report.find("| openai / scripted-conjecturer | 4 | 5 | 1 | 1 | 2 |") != std::string::npos);
  CHECK(report == render_report(back));

  std::ifstream csv(t.path / kSimilarityFile);
  auto m = sim::read_csv(csv);
  CHECK(m.rows() == 5);
  CHECK(m.at(0, 4) == Catch::Approx(1.0));
  CHECK(m.row_labels[0] == "#1");
}

TEST_CASE("report regeneration is idempotent and bit-exact", "[archive]") {
  TempDir t("solmine_archive_b");
  write_fixture_run(t.path);
  auto report = slurp(t.path / kReportFile), csv = slurp(t.path / kSimilarityFile);
  fs::remove(t.path / kReportFile);
  regenerate(t.path);
  CHECK(slurp(t.path / kReportFile) == report);
  CHECK(slurp(t.path / kSimilarityFile) == csv);
  regenerate(t.path);
  CHECK(slurp(t.path / kReportFile) == report);
}

TEST_CASE("reruns of the fixture give byte-identical ledgers", "[archive]") {
  TempDir a("solmine_archive_c1"), b("solmine_archive_c2");
  write_fixture_run(a.path);
  write_fixture_run(b.path);
  CHECK(slurp(a.path / kLedgerFile) == slurp(b.path / kLedgerFile));
  CHECK(slurp(a.path / kReportFile) == slurp(b.path / kReportFile));
  CHECK(slurp(a.path / kFalsifiedFile) == slurp(b.path / kFalsifiedFile));
}

TEST_CASE("one writer per run directory", "[archive]") {
  TempDir t("solmine_archive_d");
  fs::create_directories(t.path);
  {
    RunLock lock(t.path);
    CHECK(fs::exists(t.path / kLockFile));
    CHECK_THROWS_WITH(RunLock(t.path), Catch::Matchers::ContainsSubstring("locked"));
    CHECK_THROWS_AS(RunWriter(t.path, "x"), ArchiveError);
  }
  CHECK_FALSE(fs::exists(t.path / kLockFile));
  {
    RunWriter w(t.path, "iterations = 1\n");
    w.finish();
  }
  // A finished run is not overwritten.
  CHECK_THROWS_WITH(RunWriter(t.path, "x"), Catch::Matchers::ContainsSubstring("already holds a run"));
}

TEST_CASE("ledger validation", "[archive]") {
  TempDir t("solmine_archive_e");
  write_fixture_run(t.path);
  auto lines = slurp(t.path / kLedgerFile);
  std::vector<std::string> ls;
  std::istringstream in(lines);
  for (std::string l; std::getline(in, l);) ls.push_back(l);
  REQUIRE(ls.size() == 5);

  auto write = [&](const std::string& text) {
    std::ofstream(t.path / "bad.jsonl", std::ios::binary) << text;
    return t.path / "bad.jsonl";
  };
  CHECK_THROWS_WITH(read_ledger(write(ls[0] + "\n" + ls[2] + "\n")),
                    Catch::Matchers::ContainsSubstring("expected id 2, found 3"));
  CHECK_THROWS_WITH(read_ledger(write(ls[1] + "\n")), Catch::Matchers::ContainsSubstring("expected id 1"));
  CHECK_THROWS_WITH(read_ledger(write(ls[0] + "\n{not json\n")), Catch::Matchers::ContainsSubstring(":2:"));
  CHECK(read_ledger(write("")).empty());
  CHECK_THROWS_AS(read_ledger(t.path / "missing.jsonl"), ArchiveError);
}

TEST_CASE("report buckets are recomputable from the ledger", "[archive]") {
  TempDir t("solmine_archive_f");
  auto records = write_fixture_run(t.path);
  auto b = llm::tally(read_ledger(t.path / kLedgerFile));
  std::ostringstream row;
  row << "| 4 | 5 | " << b.no_counterexamples << " | " << b.unverifiable << " | " << b.failed << " |";
  CHECK(slurp(t.path / kReportFile).find(row.str()) != std::string::npos);
  CHECK(render_report({}).find("Fewer than two") != std::string::npos);
}
