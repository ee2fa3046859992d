#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "solmine/catalog.hpp"
#include "solmine/dsl/ast.hpp"

namespace solmine::dsl {

// Largest order the GAP small-groups library covers for the
// nonsolvable(maxorder=N) domain.
inline constexpr std::uint64_t kGapSmallGroupsLimit = 2000;

// A GAP script that checks `c` and prints either
// "Conjecture failed for group: <name>" or "No Counter-examples!".
// The catalog domain is written out as explicit permutation groups.
// Throws DslError(E_UNSUPPORTED_EMIT) for constructs GAP cannot run as
// written. The script is for out-of-band cross-checking only.
std::string emit_gap_script(const Conjecture& c, std::span<const CatalogEntry> catalog);

}  // namespace solmine::dsl
