#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "solmine/catalog.hpp"
#include "solmine/dsl/evaluator.hpp"

namespace solmine::repro {

struct Case {
  std::string name;
  std::string summary;
  std::string dsl;
};

// gemini-two-primes, gemini-probability, gpt-conjugacy,
// claude-derived-fitting, frattini-containment.
const std::vector<Case>& cases();

struct Check {
  std::string what;
  bool ok = false;
  std::string detail;
};

struct Report {
  std::string name;
  std::string dsl;
  dsl::Outcome outcome;          // whole-catalog outcome for the pinned encoding
  std::vector<std::string> notes;  // per-group lines for property cases
  std::vector<Check> checks;

  bool passed() const;
};

// Throws std::invalid_argument for an unknown case name.
Report run(std::string_view name, std::span<const CatalogEntry> catalog, const dsl::EvalOptions& options = {});

std::string format(const Report& r);

}  // namespace solmine::repro
