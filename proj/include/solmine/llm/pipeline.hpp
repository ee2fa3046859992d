#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "solmine/catalog.hpp"
#include "solmine/dsl/evaluator.hpp"
#include "solmine/llm/prompts.hpp"
#include "solmine/llm/provider.hpp"

namespace solmine::llm {

inline constexpr int kMaxRepairs = 2;

// What the ledger keeps of an Outcome.
struct OutcomeSummary {
  dsl::OutcomeKind kind = dsl::OutcomeKind::Unverifiable;
  std::string reason;      // Unverifiable: "provider: ...", "parse: ...", "budget: ..."
  std::string error_code;  // E_SYNTAX, E_TYPE, E_LEX, E_BUDGET, or empty
  std::string group;       // witness group, catalog name
  std::string group_display;
  std::vector<std::string> bindings;     // "x = (1,2,3)"
  std::vector<std::string> diagnostics;  // "card(sol(x)) = 21 (primes [3, 7])"
  std::size_t groups_checked = 0;
  std::size_t groups_skipped = 0;

  static OutcomeSummary from(const dsl::Outcome& o);
};

struct MineRecord {
  std::size_t id = 0;  // dense, from 1
  std::string conjecture;
  std::string dsl;  // final encoding attempt
  int repairs = 0;
  std::vector<std::string> parse_errors;  // one per rejected attempt
  OutcomeSummary outcome;
  std::string provider;
  std::string model;
  std::string started;
  std::string finished;
  std::optional<std::size_t> duplicate_of;        // by the run's dedup mode
  std::optional<std::size_t> exact_duplicate_of;  // after whitespace and case folding
  double max_similarity = 0;                      // against earlier conjectures
};

std::string to_json_line(const MineRecord& r);  // no trailing newline
MineRecord record_from_json(const std::string& line);

// Timestamps for records. The logical clock makes runs replayable.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::string now() = 0;
};

class LogicalClock : public Clock {
 public:
  std::string now() override;

 private:
  std::size_t tick_ = 0;
};

class WallClock : public Clock {
 public:
  std::string now() override;  // ISO 8601, UTC, milliseconds
};

enum class DedupMode { cosine, exact };

struct MineSettings {
  ProviderConfig conjecture;  // default temperature 1.0
  ProviderConfig code;        // default temperature 0.1
  std::vector<CatalogEntry> catalog;
  dsl::EvalBudget budget;
  dsl::EvalOptions options;
  double dedup_threshold = 0.95;
  DedupMode dedup_mode = DedupMode::cosine;
  Sleeper sleep;  // retry backoff; default sleeps for real
};

struct StepResult {
  MineRecord record;
  PromptState state;
};

// One round: conjecture, encoding with up to two repairs, evaluation, and
// the falsified list grows if a counterexample was found. Provider failures
// become Unverifiable records; nothing here throws for them.
StepResult mine_step(const PromptState& state, const MineSettings& settings, Transport& conj,
                     Transport& code, Clock& clock, std::size_t id);

// Marks record `i` against records [0, i) of `texts`: the most similar
// earlier conjecture (cosine over a vectorizer fitted on texts[0..i]) and
// the first exact match.
struct DuplicateCheck {
  std::optional<std::size_t> similar_to;  // index of the most similar earlier text
  double similarity = 0;
  std::optional<std::size_t> exact_of;
};
DuplicateCheck check_duplicate(const std::vector<std::string>& texts, std::size_t i);

using RecordSink = std::function<void(const MineRecord&, const PromptState&)>;

// Runs `iterations` steps in order, calling `sink` after each.
std::vector<MineRecord> mine_run(PromptState& state, const MineSettings& settings, std::size_t iterations,
                                 TransportPool& transports, Clock& clock, const RecordSink& sink = {});

struct Buckets {
  std::size_t total = 0;
  std::size_t unique = 0;
  std::size_t duplicates = 0;
  std::size_t failed = 0;              // counterexample found
  std::size_t no_counterexamples = 0;
  std::size_t unverifiable = 0;        // could not be checked
  std::size_t exact_unique = 0;        // unique by exact matching alone
};

// Over unique records only; failed + no_counterexamples + unverifiable == unique.
Buckets tally(std::span<const MineRecord> records);

}  // namespace solmine::llm
