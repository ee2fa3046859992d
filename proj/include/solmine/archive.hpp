#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "solmine/llm/pipeline.hpp"

namespace solmine::archive {

// Files inside a run directory.
inline constexpr const char* kConfigFile = "config.txt";
inline constexpr const char* kLedgerFile = "ledger.jsonl";
inline constexpr const char* kFalsifiedFile = "falsified.txt";
inline constexpr const char* kSimilarityFile = "similarity.csv";
inline constexpr const char* kReportFile = "report.md";
inline constexpr const char* kLockFile = ".lock";

class ArchiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exclusive writer lock on a run directory; released on destruction.
class RunLock {
 public:
  explicit RunLock(const std::filesystem::path& dir);
  ~RunLock();
  RunLock(const RunLock&) = delete;
  RunLock& operator=(const RunLock&) = delete;

 private:
  std::filesystem::path path_;
};

// Writes an archive as a run progresses. The ledger is appended and flushed
// per record so an interrupted run keeps everything up to the last step.
class RunWriter {
 public:
  // Refuses a directory that already holds a ledger.
  RunWriter(const std::filesystem::path& dir, const std::string& config_snapshot);

  void append(const llm::MineRecord& r, const llm::PromptState& state);
  // similarity.csv and report.md from everything appended so far.
  void finish();

  const std::filesystem::path& dir() const { return dir_; }
  const std::vector<llm::MineRecord>& records() const { return records_; }

 private:
  std::filesystem::path dir_;
  RunLock lock_;
  std::ofstream ledger_;
  std::vector<llm::MineRecord> records_;
};

// Throws ArchiveError on malformed lines or ids that are not 1, 2, 3, ...
std::vector<llm::MineRecord> read_ledger(const std::filesystem::path& path);

std::string render_report(std::span<const llm::MineRecord> records);

// Rebuilds similarity.csv and report.md from the ledger alone.
void regenerate(const std::filesystem::path& dir);

}  // namespace solmine::archive
