#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "solmine/catalog.hpp"
#include "solmine/dsl/ast.hpp"
#include "solmine/solubilizer.hpp"

namespace solmine::dsl {

struct EvalBudget {
  std::size_t max_group_order = 1000;          // larger groups are skipped
  std::size_t max_solvability_checks = 5'000'000;  // per group
  std::chrono::milliseconds wall_timeout{120'000};
};

struct EvalOptions {
  bool all_witnesses = false;        // keep going after the first counterexample
  std::size_t max_witnesses = 200;
  bool conjugacy_reduction = false;  // first quantifier over G walks class representatives
  bool parallel = false;             // groups evaluated concurrently; result unchanged
  Limits limits;
};

enum class OutcomeKind { CounterexampleFound, NoCounterexamples, Unverifiable };

std::string_view kind_name(OutcomeKind k);

struct Binding {
  std::string var;
  Type type = Type::element;
  Elem element = 0;                 // element variables
  std::optional<ElementSet> subgroup;  // subgroup variables
  std::string text;                 // cycle notation, or a subgroup summary
};

// The value of one subterm at a witness.
struct TermValue {
  std::string term;  // canonical rendering
  Type type = Type::integer;
  std::string text;  // human-readable value
  bool truth = false;
  std::int64_t integer = 0;
  std::size_t cardinality = 0;
  std::vector<std::size_t> primes;  // of the integer, or of the set's size
  Rational fraction;                // |S| / |G| for sets
};

struct Witness {
  std::string group;          // catalog name
  std::string group_display;  // name used in reports
  std::size_t group_order = 0;
  std::vector<Binding> bindings;  // outermost universal bindings that fail
  std::vector<TermValue> diagnostics;
  bool verified = false;  // the formula re-evaluates to false at these bindings

  const TermValue* value_of(std::string_view term) const;
};

struct Outcome {
  OutcomeKind kind = OutcomeKind::NoCounterexamples;
  std::optional<Witness> witness;
  std::vector<Witness> all_witnesses;  // only with EvalOptions::all_witnesses
  std::size_t groups_checked = 0;
  std::size_t groups_skipped = 0;  // above max_group_order
  std::string reason;              // for Unverifiable
  std::string error_code;          // "E_BUDGET" when a budget ran out
};

// Evaluates `c` over the catalog in order. The nonsolvable(maxorder=N)
// domain is realised as the catalog entries of order <= N. Never throws on
// well-typed input.
Outcome evaluate(const Conjecture& c, std::span<const CatalogEntry> catalog,
                 const EvalBudget& budget = {}, const EvalOptions& options = {});

// Re-evaluates the formula beneath the witness bindings; true when it is
// false there, i.e. the witness really is a counterexample.
bool witness_refutes(const Conjecture& c, const CatalogEntry& entry, const Witness& w,
                     const Limits& limits = {});

}  // namespace solmine::dsl
