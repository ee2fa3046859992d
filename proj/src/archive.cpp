#include "solmine/archive.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <map>
#include <sstream>

#include "solmine/similarity.hpp"

namespace solmine::archive {

namespace fs = std::filesystem;

namespace {

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw ArchiveError("cannot write " + p.string());
  out << text;
  if (!out.flush()) throw ArchiveError("write failed: " + p.string());
}

std::string cell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += "\\|";
    else if (c == '\n' || c == '\r') out += ' ';
    else out += c;
  }
  return out;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::string> texts(std::span<const llm::MineRecord> records) {
  std::vector<std::string> t;
  for (const auto& r : records) t.push_back(r.conjecture);
  return t;
}

std::vector<std::string> labels(std::span<const llm::MineRecord> records) {
  std::vector<std::string> l;
  for (const auto& r : records) l.push_back("#" + std::to_string(r.id));
  return l;
}

void write_similarity(const fs::path& dir, std::span<const llm::MineRecord> records) {
  auto m = sim::self_matrix(texts(records), labels(records));
  std::ostringstream csv;
  sim::write_csv(m, csv);
  write_file(dir / kSimilarityFile, csv.str());
}

std::string kind_label(dsl::OutcomeKind k) {
  switch (k) {
    case dsl::OutcomeKind::CounterexampleFound: return "Conjecture Failed";
    case dsl::OutcomeKind::NoCounterexamples: return "No Counter-Examples";
    case dsl::OutcomeKind::Unverifiable: return "Couldn't Execute Code";
  }
  return "?";
}

}  // namespace

RunLock::RunLock(const fs::path& dir) : path_(dir / kLockFile) {
  int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
  if (fd < 0) {
    if (errno == EEXIST)
      throw ArchiveError("run directory " + dir.string() + " is locked by another writer (remove " +
                         path_.string() + " if no run is active)");
    throw ArchiveError("cannot create " + path_.string() + ": " + std::strerror(errno));
  }
  std::string pid = std::to_string(::getpid()) + "\n";
  [[maybe_unused]] auto n = ::write(fd, pid.data(), pid.size());
  ::close(fd);
}

RunLock::~RunLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

static const fs::path& prepare(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ArchiveError("cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

RunWriter::RunWriter(const fs::path& dir, const std::string& config_snapshot)
    : dir_(dir), lock_(prepare(dir)) {
  if (fs::exists(dir_ / kLedgerFile))
    throw ArchiveError(dir_.string() + " already holds a run; choose a fresh output directory");
  write_file(dir_ / kConfigFile, config_snapshot);
  write_file(dir_ / kFalsifiedFile, "");
  ledger_.open(dir_ / kLedgerFile, std::ios::binary | std::ios::app);
  if (!ledger_) throw ArchiveError("cannot open " + (dir_ / kLedgerFile).string());
}

void RunWriter::append(const llm::MineRecord& r, const llm::PromptState& state) {
  ledger_ << llm::to_json_line(r) << '\n';
  ledger_.flush();
  if (!ledger_) throw ArchiveError("ledger write failed");
  records_.push_back(r);
  std::string falsified;
  for (const auto& f : state.falsified) falsified += f + "\n";
  write_file(dir_ / kFalsifiedFile, falsified);
}

void RunWriter::finish() {
  write_similarity(dir_, records_);
  write_file(dir_ / kReportFile, render_report(records_));
}

std::vector<llm::MineRecord> read_ledger(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArchiveError("cannot read " + path.string());
  std::vector<llm::MineRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(llm::record_from_json(line));
    } catch (const std::exception& e) {
      throw ArchiveError(path.string() + ":" + std::to_string(n) + ": malformed record: " + e.what());
    }
    if (out.back().id != out.size())
      throw ArchiveError(path.string() + ":" + std::to_string(n) + ": expected id " + std::to_string(out.size()) +
                         ", found " + std::to_string(out.back().id));
  }
  return out;
}

std::string render_report(std::span<const llm::MineRecord> records) {
  std::ostringstream out;
  out << "# Mining run report\n\n";

  // Rows per provider/model, then the whole run.
  std::map<std::string, std::vector<llm::MineRecord>> by_model;
  for (const auto& r : records) by_model[r.provider + " / " + r.model].push_back(r);
  out << "## Classification of outputs\n\n";
  out << "| Source | Unique Conjectures | Total Output | No Counter-Examples | Couldn't Execute Code | Conjecture Failed |\n";
  out << "|---|---:|---:|---:|---:|---:|\n";
  auto row = [&](const std::string& name, const llm::Buckets& b) {
    out << "| " << cell(name) << " | " << b.unique << " | " << b.total << " | " << b.no_counterexamples << " | "
        << b.unverifiable << " | " << b.failed << " |\n";
  };
  // Duplicates are judged against the whole run, so per-model rows reuse the
  // run-level marks rather than recomputing them.
  for (const auto& [name, rs] : by_model) row(name, llm::tally(rs));
  auto all = llm::tally(records);
  if (by_model.size() != 1) row("all", all);
  out << "\n" << all.duplicates << " duplicate(s) marked; " << all.exact_unique
      << " unique by exact text comparison alone.\n\n";

  std::vector<std::string> t = texts(records);
  out << "## Similarity\n\n";
  if (records.size() < 2) {
    out << "Fewer than two conjectures; no off-diagonal statistics.\n\n";
  } else {
    auto st = sim::similarity_stats(sim::self_matrix(t, labels(records)), true);
    out << "| Max | Min | Mean | Median |\n|---:|---:|---:|---:|\n";
    out << "| " << fixed(st.max) << " | " << fixed(st.min) << " | " << fixed(st.mean) << " | " << fixed(st.median)
        << " |\n\n";
  }

  out << "## Records\n\n";
  out << "| # | Outcome | Witness | Repairs | Duplicate of | Conjecture |\n";
  out << "|---:|---|---|---:|---|---|\n";
  for (const auto& r : records) {
    std::string witness = r.outcome.group_display;
    if (!r.outcome.bindings.empty()) witness += " at " + r.outcome.bindings[0];
    if (r.outcome.kind == dsl::OutcomeKind::Unverifiable) witness = r.outcome.reason;
    out << "| " << r.id << " | " << kind_label(r.outcome.kind) << " | " << cell(witness) << " | " << r.repairs
        << " | " << (r.duplicate_of ? "#" + std::to_string(*r.duplicate_of) : "") << " | " << cell(r.conjecture)
        << " |\n";
  }
  return out.str();
}

void regenerate(const fs::path& dir) {
  auto records = read_ledger(dir / kLedgerFile);
  write_similarity(dir, records);
  write_file(dir / kReportFile, render_report(records));
}

}  // namespace solmine::archive
