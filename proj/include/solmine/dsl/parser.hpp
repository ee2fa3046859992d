#pragma once

#include <optional>
#include <string_view>

#include "solmine/dsl/ast.hpp"
#include "solmine/dsl/diagnostic.hpp"

namespace solmine::dsl {

struct ParseResult {
  std::optional<Conjecture> ast;
  std::optional<Diagnostic> error;

  explicit operator bool() const { return ast.has_value(); }
};

// Never throws on bad input: every failure is a positioned Diagnostic.
// Propositions accept both call form `and(p, q)` and infix `p and q`
// (`implies` binds loosest and associates to the right, then `or`, `and`,
// prefix `not`).
ParseResult parse(std::string_view text);

// Throws DslError.
Conjecture parse_or_throw(std::string_view text);

}  // namespace solmine::dsl
