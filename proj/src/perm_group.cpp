#include "solmine/perm_group.hpp"

#include <algorithm>
#include <unordered_set>

#include "solmine/detail/group_cache.hpp"

namespace solmine {

std::shared_ptr<const CayleyTable> CayleyTable::build(std::size_t degree,
                                                      std::span<const Permutation> gens,
                                                      std::size_t max_order) {
  for (const auto& g : gens) {
    if (g.degree() != degree) {
      throw PermutationError("generator " + g.to_cycles() + " has degree " +
                             std::to_string(g.degree()) + ", expected " + std::to_string(degree));
    }
  }

  std::vector<Permutation> gen_list;
  for (const auto& g : gens)
    if (!g.is_identity()) gen_list.push_back(g);

  std::unordered_set<Permutation> seen;
  std::vector<Permutation> elements;
  Permutation id(degree);
  seen.insert(id);
  elements.push_back(id);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (const auto& g : gen_list) {
      Permutation p = elements[i] * g;
      if (seen.insert(p).second) {
        elements.push_back(std::move(p));
        if (elements.size() > max_order) {
          throw GroupTooLarge("group exceeds the enumeration ceiling of " +
                              std::to_string(max_order) + " elements");
        }
      }
    }
  }
  std::sort(elements.begin(), elements.end());

  auto table = std::shared_ptr<CayleyTable>(new CayleyTable());
  table->degree_ = degree;
  const std::size_t n = elements.size();
  table->index_.reserve(n * 2);
  for (std::size_t i = 0; i < n; ++i) table->index_.emplace(elements[i], static_cast<Elem>(i));

  // Product rows via point images; avoids allocating a Permutation per entry.
  table->mul_.resize(n * n);
  std::vector<Point> buf(degree);
  Permutation scratch;
  for (std::size_t a = 0; a < n; ++a) {
    auto ia = elements[a].images();
    for (std::size_t b = 0; b < n; ++b) {
      auto ib = elements[b].images();
      for (std::size_t k = 0; k < degree; ++k) buf[k] = ib[ia[k]];
      scratch = Permutation::from_images(buf);
      table->mul_[a * n + b] = table->index_.at(scratch);
    }
  }
  table->inv_.resize(n);
  table->orders_.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (table->mul_[a * n + b] == 0) {
        table->inv_[a] = static_cast<Elem>(b);
        break;
      }
    }
    table->orders_[a] = elements[a].order();
  }
  table->elements_ = std::move(elements);
  return table;
}

std::optional<Elem> CayleyTable::find(const Permutation& p) const {
  auto it = index_.find(p);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<bool> CayleyTable::cached_solvability(const ElementSet& h) const {
  std::lock_guard lock(memo_mutex_);
  auto it = memo_.find(h);
  if (it == memo_.end()) return std::nullopt;
  return it->second;
}

void CayleyTable::store_solvability(const ElementSet& h, bool soluble) const {
  std::lock_guard lock(memo_mutex_);
  memo_[h] = soluble;
}

std::size_t CayleyTable::solvability_cache_size() const {
  std::lock_guard lock(memo_mutex_);
  return memo_.size();
}

namespace kernel {

SubgroupData trivial(const CayleyTable& t) {
  SubgroupData h{t.empty_set(), {}};
  h.members.insert(CayleyTable::identity());
  return h;
}

void extend(const CayleyTable& t, SubgroupData& h, Elem g) {
  if (h.members.contains(g)) return;
  h.gens.push_back(g);
  // Right-multiply every member by every generator until closed. Members of
  // the old subgroup are already closed under the old generators, but the
  // new generator can reach new cosets from any of them.
  std::vector<Elem> queue = h.members.members();
  for (std::size_t i = 0; i < queue.size(); ++i) {
    for (Elem s : h.gens) {
      Elem p = t.mul(queue[i], s);
      if (h.members.add(p)) queue.push_back(p);
    }
  }
}

SubgroupData closure(const CayleyTable& t, std::span<const Elem> gens) {
  SubgroupData h = trivial(t);
  for (Elem g : gens) extend(t, h, g);
  return h;
}

SubgroupData join(const CayleyTable& t, const SubgroupData& a, const SubgroupData& b) {
  SubgroupData h = a;
  for (Elem g : b.gens) extend(t, h, g);
  return h;
}

SubgroupData normal_closure(const CayleyTable& t, std::span<const Elem> seeds,
                            std::span<const Elem> conj_gens) {
  SubgroupData h = trivial(t);
  std::vector<Elem> queue(seeds.begin(), seeds.end());
  for (std::size_t i = 0; i < queue.size(); ++i) {
    Elem g = queue[i];
    if (h.members.contains(g)) continue;
    extend(t, h, g);
    for (Elem c : conj_gens) queue.push_back(t.conj(g, c));
  }
  return h;
}

std::vector<Elem> generating_set(const CayleyTable& t, const ElementSet& members) {
  SubgroupData h = trivial(t);
  // Highest-order elements first keeps the generating set short.
  std::vector<Elem> candidates = members.members();
  std::stable_sort(candidates.begin(), candidates.end(), [&](Elem a, Elem b) {
    return t.element_order(a) > t.element_order(b);
  });
  for (Elem e : candidates) {
    if (h.members.size() == members.size()) break;
    extend(t, h, e);
  }
  return h.gens;
}

bool is_closed(const CayleyTable& t, const ElementSet& s) {
  if (!s.contains(CayleyTable::identity())) return false;
  auto m = s.members();
  for (Elem a : m) {
    if (!s.contains(t.inv(a))) return false;
    for (Elem b : m)
      if (!s.contains(t.mul(a, b))) return false;
  }
  return true;
}

bool is_abelian(const CayleyTable& t, const SubgroupData& h) {
  for (std::size_t i = 0; i < h.gens.size(); ++i)
    for (std::size_t j = i + 1; j < h.gens.size(); ++j)
      if (t.mul(h.gens[i], h.gens[j]) != t.mul(h.gens[j], h.gens[i])) return false;
  return true;
}

bool set_commutes(const CayleyTable& t, const ElementSet& s) {
  auto m = s.members();
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = i + 1; j < m.size(); ++j)
      if (t.mul(m[i], m[j]) != t.mul(m[j], m[i])) return false;
  return true;
}

SubgroupData derived_subgroup(const CayleyTable& t, const SubgroupData& h) {
  return commutator_subgroup(t, h, h, h.gens);
}

// [A, B] for subgroups normalized by `normalizing` (which must generate a
// group containing A and B): normal closure of the generator commutators.
SubgroupData commutator_subgroup(const CayleyTable& t, const SubgroupData& a,
                                 const SubgroupData& b, std::span<const Elem> normalizing) {
  std::vector<Elem> seeds;
  for (Elem x : a.gens)
    for (Elem y : b.gens) {
      Elem c = t.comm(x, y);
      if (c != CayleyTable::identity()) seeds.push_back(c);
    }
  return normal_closure(t, seeds, normalizing);
}

bool is_soluble(const CayleyTable& t, const SubgroupData& h) {
  SubgroupData cur = h;
  while (cur.members.size() > 1) {
    if (is_abelian(t, cur)) return true;
    SubgroupData next = derived_subgroup(t, cur);
    if (next.members.size() == cur.members.size()) return false;
    cur = std::move(next);
  }
  return true;
}

bool is_nilpotent(const CayleyTable& t, const SubgroupData& h) {
  SubgroupData cur = h;
  while (cur.members.size() > 1) {
    SubgroupData next = commutator_subgroup(t, h, cur, h.gens);
    if (next.members.size() == cur.members.size()) return false;
    cur = std::move(next);
  }
  return true;
}

bool normalizes(const CayleyTable& t, Elem g, const ElementSet& s) {
  bool ok = true;
  s.for_each([&](Elem e) {
    if (ok && !s.contains(t.conj(e, g))) ok = false;
  });
  return ok;
}

}  // namespace kernel

PermGroup::PermGroup(std::shared_ptr<const CayleyTable> table, SubgroupData data,
                     std::string name)
    : table_(std::move(table)),
      data_(std::move(data)),
      name_(std::move(name)),
      cache_(std::make_shared<detail::GroupCache>()) {}

PermGroup PermGroup::from_generators(std::size_t degree, std::span<const Permutation> gens,
                                     std::string name, const Limits& limits) {
  auto table = CayleyTable::build(degree, gens, limits.max_enumeration);
  SubgroupData whole{ElementSet::full(table->order()), {}};
  for (const auto& g : gens) {
    Elem e = *table->find(g);
    if (e != CayleyTable::identity()) whole.gens.push_back(e);
  }
  return PermGroup(std::move(table), std::move(whole), std::move(name));
}

PermGroup PermGroup::with_name(std::string name) const {
  PermGroup copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

std::vector<Permutation> PermGroup::generators() const {
  std::vector<Permutation> out;
  for (Elem e : data_.gens) out.push_back(table_->element(e));
  return out;
}

std::vector<Permutation> PermGroup::elements() const {
  std::vector<Permutation> out;
  data_.members.for_each([&](Elem e) { out.push_back(table_->element(e)); });
  return out;
}

bool PermGroup::contains(const Permutation& p) const {
  if (!table_ || p.degree() != degree()) return false;
  auto e = table_->find(p);
  return e && data_.members.contains(*e);
}

Elem PermGroup::index_of(const Permutation& p) const {
  if (p.degree() != degree()) {
    throw MembershipError(p.to_cycles() + " has degree " + std::to_string(p.degree()) +
                          " but the group acts on " + std::to_string(degree()) + " points");
  }
  auto e = table_->find(p);
  if (!e || !data_.members.contains(*e)) {
    throw MembershipError(p.to_cycles() + " is not an element of " +
                          (name_.empty() ? std::string("the group") : name_));
  }
  return *e;
}

PermGroup PermGroup::subgroup(const ElementSet& members, std::string name) const {
  if (!members.is_subset_of(data_.members) || !kernel::is_closed(*table_, members)) {
    throw MembershipError("element set is not a subgroup");
  }
  return PermGroup(table_, SubgroupData{members, kernel::generating_set(*table_, members)},
                   std::move(name));
}

PermGroup PermGroup::subgroup_generated(std::span<const Elem> gens, std::string name) const {
  for (Elem g : gens)
    if (!data_.members.contains(g)) throw MembershipError("generator outside the group");
  return PermGroup(table_, kernel::closure(*table_, gens), std::move(name));
}

PermGroup PermGroup::adopt(const PermGroup& h) const {
  if (h.table_ == table_) {
    if (!h.members().is_subset_of(members())) throw MembershipError("not a subgroup");
    return h;
  }
  std::vector<Elem> gens;
  for (const auto& p : h.generators()) gens.push_back(index_of(p));
  SubgroupData d = kernel::closure(*table_, gens);
  if (d.members.size() != h.order()) throw MembershipError("not a subgroup");
  return PermGroup(table_, std::move(d), h.name());
}

bool PermGroup::is_subgroup_of(const PermGroup& g) const {
  if (table_ == g.table_) return data_.members.is_subset_of(g.data_.members);
  if (degree() != g.degree()) return false;
  for (Elem e : data_.gens)
    if (!g.contains(table_->element(e))) return false;
  return true;
}

bool operator==(const PermGroup& a, const PermGroup& b) {
  if (a.table_ == b.table_) return a.data_.members == b.data_.members;
  return a.order() == b.order() && a.is_subgroup_of(b);
}

}  // namespace solmine
