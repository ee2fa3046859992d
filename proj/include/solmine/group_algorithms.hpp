#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "solmine/perm_group.hpp"

namespace solmine {

PermGroup group_from_generators(std::size_t degree, std::span<const Permutation> gens,
                                const Limits& limits = {});

// <x, y> inside G. Throws MembershipError unless both lie in G.
PermGroup two_generated_subgroup(const PermGroup& g, const Permutation& x, const Permutation& y);

bool is_soluble(const PermGroup& h);
bool is_nilpotent(const PermGroup& h);
bool is_abelian(const PermGroup& h);
bool is_perfect(const PermGroup& h);
bool is_simple(const PermGroup& h, const Limits& limits = {});
// h must share g's table (see PermGroup::adopt).
bool is_normal(const PermGroup& g, const PermGroup& h);

enum class SeriesKind { derived, lower_central, upper_central };

struct SeriesReport {
  SeriesKind kind;
  std::vector<PermGroup> terms;  // subgroups of the input group
  bool stabilized = false;       // a term repeated, so the series is complete

  const PermGroup& last() const { return terms.back(); }
  bool reaches_trivial() const { return !terms.empty() && terms.back().is_trivial(); }
};

// Terms run until the first repeat; the repeated term is not listed twice.
SeriesReport derived_series(const PermGroup& h);
SeriesReport lower_central_series(const PermGroup& h);
// Starts at the trivial subgroup: Z_0 = 1, Z_1 = Z(G), ...
SeriesReport upper_central_series(const PermGroup& h);

PermGroup derived_subgroup(const PermGroup& h);
PermGroup centralizer(const PermGroup& g, const Permutation& x);
PermGroup center(const PermGroup& g);
PermGroup hypercenter(const PermGroup& g);
// Largest subgroup of g normalizing h. Throws MembershipError unless h <= g.
PermGroup normalizer(const PermGroup& g, const PermGroup& h);

struct ConjugacyClass {
  Elem representative;  // smallest index in the class
  ElementSet members;

  std::size_t size() const { return members.size(); }
};

// Classes ordered by representative index; the identity class comes first.
std::vector<ConjugacyClass> conjugacy_classes(const PermGroup& g);

// Sorted by order, then by member set. Throws CapExceeded above limits.catalog_cap.
std::vector<PermGroup> normal_subgroups(const PermGroup& g, const Limits& limits = {});
PermGroup soluble_radical(const PermGroup& g, const Limits& limits = {});
PermGroup fitting_subgroup(const PermGroup& g, const Limits& limits = {});

// Every subgroup of a group, ascending by order then member set, with
// maximal subgroups of the whole group flagged.
struct SubgroupLattice {
  std::shared_ptr<const CayleyTable> table;
  std::vector<SubgroupData> subgroups;
  std::vector<bool> maximal;

  std::size_t size() const { return subgroups.size(); }
  PermGroup at(std::size_t i) const { return PermGroup(table, subgroups[i]); }
  std::vector<PermGroup> maximal_subgroups() const;

  std::optional<std::size_t> find(const ElementSet& members) const;
  // Indices of the maximal subgroups of subgroups[i].
  const std::vector<std::size_t>& maximal_below(std::size_t i) const;

  mutable std::mutex cover_mutex;
  mutable std::unordered_map<std::size_t, std::vector<std::size_t>> cover_cache;
  std::unordered_map<ElementSet, std::size_t, ElementSetHash> index;
};

// Throws LatticeUnavailable above limits.lattice_cap.
std::shared_ptr<const SubgroupLattice> subgroup_lattice(const PermGroup& g, const Limits& limits = {});
PermGroup frattini_subgroup(const PermGroup& g, const Limits& limits = {});

}  // namespace solmine
