#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "solmine/perm_group.hpp"

namespace solmine {

// A subset of a group's elements, kept together with the ambient order so
// that fractions can be reported.
struct SubsetHandle {
  std::shared_ptr<const CayleyTable> table;
  ElementSet members;
  std::size_t ambient_order = 0;

  std::size_t size() const { return members.size(); }
  bool contains(Elem e) const { return members.contains(e); }
  std::vector<Permutation> elements() const;
};

SubsetHandle subset_of(const PermGroup& ambient, ElementSet members);
SubsetHandle whole(const PermGroup& g);

struct SolubilizerResult {
  SubsetHandle subset;
  bool via_radical_shortcut = false;
  bool is_subgroup = false;
  std::size_t cardinality = 0;
  std::size_t checks = 0;  // two-generated subgroups examined
};

class SolvabilityBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Optional ceiling on two-generated solvability checks. The counter may be
// shared by several calls (e.g. all solubilizers computed for one group).
struct SolvabilityBudget {
  std::size_t limit = 0;  // 0 = unlimited
  std::atomic<std::size_t>* used = nullptr;
};

// Sol_G(x) = { y in G : <x, y> is soluble }. When x lies in the soluble
// radical the whole group is returned without per-element work. Throws
// MembershipError unless x is in G.
SolubilizerResult solubilizer(const PermGroup& g, const Permutation& x,
                              const SolvabilityBudget& budget = {}, const Limits& limits = {});
SolubilizerResult solubilizer(const PermGroup& g, Elem x, const SolvabilityBudget& budget = {},
                              const Limits& limits = {});

// Same set, always checking every y (no radical shortcut).
SolubilizerResult solubilizer_by_definition(const PermGroup& g, Elem x);

// Descends through maximal subgroups containing x, stopping at soluble
// ones, and returns the union of those. Needs the subgroup lattice.
SolubilizerResult solubilizer_via_maximal(const PermGroup& g, Elem x, const Limits& limits = {});

bool is_subgroup(const SubsetHandle& s);

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Rational make(std::uint64_t num, std::uint64_t den);
  std::string str() const;  // "1", "1/60"
  friend bool operator==(const Rational&, const Rational&) = default;
  friend bool operator<(const Rational& a, const Rational& b);
};

struct SubsetStats {
  std::size_t cardinality = 0;
  std::vector<std::size_t> prime_divisors;
  Rational fraction;
};

std::vector<std::size_t> prime_divisors(std::size_t n);
SubsetStats subset_stats(const SubsetHandle& s);

// One element per conjugacy class of g, by smallest index.
std::vector<Elem> class_representatives(const PermGroup& g);

// The soluble radical, cached per group.
PermGroup cached_radical(const PermGroup& g, const Limits& limits = {});

}  // namespace solmine
