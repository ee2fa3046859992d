#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "solmine/element_set.hpp"
#include "solmine/permutation.hpp"

namespace solmine {

// Size ceilings. All of these are configuration, not algorithmic limits.
struct Limits {
  std::size_t max_enumeration = 2000;  // elements a group table may hold
  std::size_t catalog_cap = 1000;      // normal-subgroup scans, catalog roster
  std::size_t lattice_cap = 400;       // full subgroup lattice
};

class GroupTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MembershipError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LatticeUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The fully materialized multiplication table of a finite permutation group.
// Elements are sorted by their image arrays, so index 0 is the identity and
// iteration order is reproducible.
class CayleyTable {
 public:
  static std::shared_ptr<const CayleyTable> build(std::size_t degree,
                                                  std::span<const Permutation> gens,
                                                  std::size_t max_order);

  std::size_t degree() const { return degree_; }
  std::size_t order() const { return elements_.size(); }

  static constexpr Elem identity() { return 0; }
  Elem mul(Elem a, Elem b) const { return mul_[static_cast<std::size_t>(a) * order() + b]; }
  Elem inv(Elem a) const { return inv_[a]; }
  Elem conj(Elem a, Elem g) const { return mul(mul(inv(g), a), g); }
  Elem comm(Elem a, Elem b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }
  std::size_t element_order(Elem a) const { return orders_[a]; }

  const Permutation& element(Elem a) const { return elements_[a]; }
  std::optional<Elem> find(const Permutation& p) const;

  ElementSet empty_set() const { return ElementSet(order()); }

  // Solvability verdicts for subgroups of this table, keyed by element set.
  std::optional<bool> cached_solvability(const ElementSet& h) const;
  void store_solvability(const ElementSet& h, bool soluble) const;
  std::size_t solvability_cache_size() const;

 private:
  CayleyTable() = default;

  std::size_t degree_ = 0;
  std::vector<Permutation> elements_;
  std::unordered_map<Permutation, Elem> index_;
  std::vector<Elem> mul_;
  std::vector<Elem> inv_;
  std::vector<std::size_t> orders_;

  mutable std::mutex memo_mutex_;
  mutable std::unordered_map<ElementSet, bool, ElementSetHash> memo_;
};

// A subgroup of a table: its member set and a small generating set.
struct SubgroupData {
  ElementSet members;
  std::vector<Elem> gens;
};

// Index-level kernels. All inputs must be indices of the same table.
namespace kernel {

SubgroupData trivial(const CayleyTable& t);
SubgroupData closure(const CayleyTable& t, std::span<const Elem> gens);
void extend(const CayleyTable& t, SubgroupData& h, Elem g);
SubgroupData join(const CayleyTable& t, const SubgroupData& a, const SubgroupData& b);
SubgroupData normal_closure(const CayleyTable& t, std::span<const Elem> seeds,
                            std::span<const Elem> conj_gens);
std::vector<Elem> generating_set(const CayleyTable& t, const ElementSet& members);
bool is_closed(const CayleyTable& t, const ElementSet& s);
bool is_abelian(const CayleyTable& t, const SubgroupData& h);
bool set_commutes(const CayleyTable& t, const ElementSet& s);
SubgroupData derived_subgroup(const CayleyTable& t, const SubgroupData& h);
SubgroupData commutator_subgroup(const CayleyTable& t, const SubgroupData& a,
                                 const SubgroupData& b, std::span<const Elem> normalizing);
bool is_soluble(const CayleyTable& t, const SubgroupData& h);
bool is_nilpotent(const CayleyTable& t, const SubgroupData& h);
bool normalizes(const CayleyTable& t, Elem g, const ElementSet& s);

}  // namespace kernel

struct SubgroupLattice;
struct ConjugacyClass;
class PermGroup;

namespace detail {
struct GroupCache;
}

// A finite permutation group, possibly a subgroup of a larger ambient table.
// Values are immutable; copies share the table and lazily derived data.
class PermGroup {
 public:
  PermGroup() = default;
  PermGroup(std::shared_ptr<const CayleyTable> table, SubgroupData data, std::string name = {});

  static PermGroup from_generators(std::size_t degree, std::span<const Permutation> gens,
                                   std::string name = {}, const Limits& limits = {});

  const CayleyTable& table() const { return *table_; }
  const std::shared_ptr<const CayleyTable>& table_ptr() const { return table_; }
  const ElementSet& members() const { return data_.members; }
  const SubgroupData& data() const { return data_; }
  std::span<const Elem> generator_indices() const { return data_.gens; }

  std::size_t degree() const { return table_ ? table_->degree() : 0; }
  std::size_t order() const { return data_.members.size(); }
  bool is_trivial() const { return order() == 1; }
  const std::string& name() const { return name_; }
  PermGroup with_name(std::string name) const;

  std::vector<Permutation> generators() const;
  std::vector<Permutation> elements() const;
  std::vector<Elem> element_indices() const { return data_.members.members(); }

  bool contains(const Permutation& p) const;
  bool contains(Elem e) const { return data_.members.contains(e); }
  // Index in the ambient table; throws MembershipError unless p is in this group.
  Elem index_of(const Permutation& p) const;
  const Permutation& element(Elem e) const { return table_->element(e); }

  // Same ambient table, given member set (must be closed).
  PermGroup subgroup(const ElementSet& members, std::string name = {}) const;
  PermGroup subgroup_generated(std::span<const Elem> gens, std::string name = {}) const;

  bool shares_table_with(const PermGroup& other) const { return table_ == other.table_; }
  // Re-expresses `h` inside this group's table; throws MembershipError when
  // some element of h is not in this group.
  PermGroup adopt(const PermGroup& h) const;

  bool is_subgroup_of(const PermGroup& g) const;
  friend bool operator==(const PermGroup& a, const PermGroup& b);

  detail::GroupCache& cache() const { return *cache_; }

 private:
  std::shared_ptr<const CayleyTable> table_;
  SubgroupData data_;
  std::string name_;
  std::shared_ptr<detail::GroupCache> cache_;
};

}  // namespace solmine
