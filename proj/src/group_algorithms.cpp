#include "solmine/group_algorithms.hpp"

#include <algorithm>
#include <unordered_set>

#include "solmine/detail/group_cache.hpp"

namespace solmine {

namespace {

std::string label(const PermGroup& g) { return g.name().empty() ? "group" : g.name(); }

bool by_order_then_members(const SubgroupData& a, const SubgroupData& b) {
  std::size_t na = a.members.size(), nb = b.members.size();
  if (na != nb) return na < nb;
  return a.members < b.members;
}

}  // namespace

PermGroup group_from_generators(std::size_t degree, std::span<const Permutation> gens,
                                const Limits& limits) {
  return PermGroup::from_generators(degree, gens, {}, limits);
}

PermGroup two_generated_subgroup(const PermGroup& g, const Permutation& x, const Permutation& y) {
  const Elem xs[] = {g.index_of(x), g.index_of(y)};
  return g.subgroup_generated(xs);
}

bool is_soluble(const PermGroup& h) { return kernel::is_soluble(h.table(), h.data()); }
bool is_nilpotent(const PermGroup& h) { return kernel::is_nilpotent(h.table(), h.data()); }
bool is_abelian(const PermGroup& h) { return kernel::is_abelian(h.table(), h.data()); }

bool is_perfect(const PermGroup& h) {
  return kernel::derived_subgroup(h.table(), h.data()).members == h.members();
}

bool is_simple(const PermGroup& h, const Limits& limits) {
  if (h.is_trivial()) return false;
  return normal_subgroups(h, limits).size() == 2;
}

bool is_normal(const PermGroup& g, const PermGroup& h) {
  if (!h.is_subgroup_of(g)) return false;
  const PermGroup local = g.adopt(h);
  for (Elem c : g.generator_indices())
    for (Elem e : local.generator_indices())
      if (!local.contains(g.table().conj(e, c))) return false;
  return true;
}

PermGroup derived_subgroup(const PermGroup& h) {
  return PermGroup(h.table_ptr(), kernel::derived_subgroup(h.table(), h.data()));
}

SeriesReport derived_series(const PermGroup& h) {
  SeriesReport r{SeriesKind::derived, {h}, false};
  for (;;) {
    PermGroup next = derived_subgroup(r.terms.back());
    if (next.order() == r.terms.back().order()) break;
    r.terms.push_back(std::move(next));
  }
  r.stabilized = true;
  return r;
}

SeriesReport lower_central_series(const PermGroup& h) {
  SeriesReport r{SeriesKind::lower_central, {h}, false};
  for (;;) {
    const PermGroup& cur = r.terms.back();
    PermGroup next(h.table_ptr(),
                   kernel::commutator_subgroup(h.table(), h.data(), cur.data(), h.data().gens));
    if (next.order() == cur.order()) break;
    r.terms.push_back(std::move(next));
  }
  r.stabilized = true;
  return r;
}

SeriesReport upper_central_series(const PermGroup& h) {
  const CayleyTable& t = h.table();
  SeriesReport r{SeriesKind::upper_central, {}, false};
  r.terms.emplace_back(h.table_ptr(), kernel::trivial(t));
  for (;;) {
    const ElementSet& z = r.terms.back().members();
    // g Z_k is central in G / Z_k iff [g, s] lies in Z_k for every generator s.
    ElementSet next = t.empty_set();
    h.members().for_each([&](Elem g) {
      for (Elem s : h.generator_indices())
        if (!z.contains(t.comm(g, s))) return;
      next.insert(g);
    });
    if (next.size() == z.size()) break;
    r.terms.push_back(h.subgroup(next));
  }
  r.stabilized = true;
  return r;
}

PermGroup centralizer(const PermGroup& g, const Permutation& x) {
  const CayleyTable& t = g.table();
  Elem e = g.index_of(x);
  ElementSet c = t.empty_set();
  g.members().for_each([&](Elem y) {
    if (t.mul(e, y) == t.mul(y, e)) c.insert(y);
  });
  return g.subgroup(c);
}

PermGroup center(const PermGroup& g) {
  const CayleyTable& t = g.table();
  ElementSet c = t.empty_set();
  g.members().for_each([&](Elem y) {
    for (Elem s : g.generator_indices())
      if (t.mul(s, y) != t.mul(y, s)) return;
    c.insert(y);
  });
  return g.subgroup(c);
}

PermGroup hypercenter(const PermGroup& g) { return upper_central_series(g).last(); }

PermGroup normalizer(const PermGroup& g, const PermGroup& h) {
  const PermGroup local = g.adopt(h);
  const CayleyTable& t = g.table();
  ElementSet n = t.empty_set();
  g.members().for_each([&](Elem c) {
    for (Elem e : local.generator_indices())
      if (!local.contains(t.conj(e, c))) return;
    n.insert(c);
  });
  return g.subgroup(n);
}

std::vector<ConjugacyClass> conjugacy_classes(const PermGroup& g) {
  auto& cache = g.cache();
  std::lock_guard lock(cache.mutex);
  if (cache.classes) return *cache.classes;

  const CayleyTable& t = g.table();
  std::vector<ConjugacyClass> classes;
  ElementSet assigned = t.empty_set();
  g.members().for_each([&](Elem e) {
    if (assigned.contains(e)) return;
    ConjugacyClass cls{e, t.empty_set()};
    std::vector<Elem> orbit{e};
    cls.members.insert(e);
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      for (Elem s : g.generator_indices()) {
        Elem c = t.conj(orbit[i], s);
        if (cls.members.add(c)) orbit.push_back(c);
      }
    }
    assigned |= cls.members;
    classes.push_back(std::move(cls));
  });
  cache.classes = std::move(classes);
  return *cache.classes;
}

std::vector<PermGroup> normal_subgroups(const PermGroup& g, const Limits& limits) {
  if (g.order() > limits.catalog_cap) {
    throw CapExceeded("normal subgroup scan of " + label(g) + " (order " +
                      std::to_string(g.order()) + ") exceeds the cap of " +
                      std::to_string(limits.catalog_cap));
  }
  auto& cache = g.cache();
  std::lock_guard lock(cache.mutex);
  if (cache.normal_subgroups) return *cache.normal_subgroups;

  const CayleyTable& t = g.table();
  const auto classes = conjugacy_classes(g);

  // Every normal subgroup is a union of classes, hence the join of the normal
  // closures of the classes it contains.
  std::vector<SubgroupData> closures;
  for (const auto& cls : classes) {
    const Elem seed[] = {cls.representative};
    closures.push_back(kernel::normal_closure(t, seed, g.generator_indices()));
  }

  std::vector<SubgroupData> found;
  std::unordered_set<ElementSet, ElementSetHash> seen;
  auto remember = [&](SubgroupData d) {
    if (seen.insert(d.members).second) found.push_back(std::move(d));
  };
  for (auto& c : closures) remember(c);
  for (std::size_t i = 0; i < found.size(); ++i) {
    for (const auto& c : closures) {
      if (c.members.is_subset_of(found[i].members)) continue;
      remember(kernel::join(t, found[i], c));
    }
  }
  std::sort(found.begin(), found.end(), by_order_then_members);

  std::vector<PermGroup> out;
  for (auto& d : found) out.emplace_back(g.table_ptr(), std::move(d));
  cache.normal_subgroups = std::move(out);
  return *cache.normal_subgroups;
}

namespace {

PermGroup join_of(const PermGroup& g, const std::vector<const PermGroup*>& parts) {
  SubgroupData acc = kernel::trivial(g.table());
  for (const PermGroup* p : parts) acc = kernel::join(g.table(), acc, p->data());
  return PermGroup(g.table_ptr(), std::move(acc));
}

}  // namespace

PermGroup soluble_radical(const PermGroup& g, const Limits& limits) {
  const auto normals = normal_subgroups(g, limits);
  std::vector<const PermGroup*> parts;
  for (const auto& n : normals)
    if (is_soluble(n)) parts.push_back(&n);
  return join_of(g, parts);
}

PermGroup fitting_subgroup(const PermGroup& g, const Limits& limits) {
  const auto normals = normal_subgroups(g, limits);
  std::vector<const PermGroup*> parts;
  for (const auto& n : normals)
    if (is_nilpotent(n)) parts.push_back(&n);
  return join_of(g, parts);
}

std::vector<PermGroup> SubgroupLattice::maximal_subgroups() const {
  std::vector<PermGroup> out;
  for (std::size_t i = 0; i < size(); ++i)
    if (maximal[i]) out.push_back(at(i));
  return out;
}

std::optional<std::size_t> SubgroupLattice::find(const ElementSet& members) const {
  auto it = index.find(members);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::size_t>& SubgroupLattice::maximal_below(std::size_t i) const {
  std::lock_guard lock(cover_mutex);
  auto it = cover_cache.find(i);
  if (it != cover_cache.end()) return it->second;

  // Descending by order: a proper subgroup is maximal iff no maximal
  // subgroup accepted so far contains it.
  const ElementSet& top = subgroups[i].members;
  std::vector<std::size_t> maxes;
  for (std::size_t k = i; k-- > 0;) {
    const ElementSet& cand = subgroups[k].members;
    if (cand.size() == top.size() || !cand.is_subset_of(top)) continue;
    bool covered = false;
    for (std::size_t m : maxes) {
      if (cand.is_subset_of(subgroups[m].members)) {
        covered = true;
        break;
      }
    }
    if (!covered) maxes.push_back(k);
  }
  std::sort(maxes.begin(), maxes.end());
  return cover_cache.emplace(i, std::move(maxes)).first->second;
}

std::shared_ptr<const SubgroupLattice> subgroup_lattice(const PermGroup& g, const Limits& limits) {
  if (g.order() > limits.lattice_cap) {
    throw LatticeUnavailable("subgroup lattice of " + label(g) + " (order " +
                             std::to_string(g.order()) + ") exceeds the lattice cap of " +
                             std::to_string(limits.lattice_cap));
  }
  auto& cache = g.cache();
  std::lock_guard lock(cache.mutex);
  if (cache.lattice) return cache.lattice;

  const CayleyTable& t = g.table();
  std::vector<SubgroupData> found;
  std::unordered_set<ElementSet, ElementSetHash> seen;
  std::vector<Elem> cyclic_gens;
  g.members().for_each([&](Elem e) {
    const Elem gen[] = {e};
    SubgroupData c = kernel::closure(t, gen);
    if (seen.insert(c.members).second) {
      found.push_back(std::move(c));
      if (e != CayleyTable::identity()) cyclic_gens.push_back(e);
    }
  });
  // Every subgroup is generated by its cyclic subgroups, so extending each
  // known subgroup by one cyclic generator at a time reaches all of them.
  for (std::size_t i = 0; i < found.size(); ++i) {
    for (Elem c : cyclic_gens) {
      if (found[i].members.contains(c)) continue;
      SubgroupData next = found[i];
      kernel::extend(t, next, c);
      if (seen.insert(next.members).second) found.push_back(std::move(next));
    }
  }
  std::sort(found.begin(), found.end(), by_order_then_members);

  auto lattice = std::make_shared<SubgroupLattice>();
  lattice->table = g.table_ptr();
  lattice->subgroups = std::move(found);
  for (std::size_t i = 0; i < lattice->subgroups.size(); ++i)
    lattice->index.emplace(lattice->subgroups[i].members, i);
  lattice->maximal.assign(lattice->subgroups.size(), false);
  const std::size_t whole = lattice->subgroups.size() - 1;
  for (std::size_t m : lattice->maximal_below(whole)) lattice->maximal[m] = true;

  cache.lattice = std::move(lattice);
  return cache.lattice;
}

PermGroup frattini_subgroup(const PermGroup& g, const Limits& limits) {
  auto lat = subgroup_lattice(g, limits);
  ElementSet acc = g.members();
  for (std::size_t i = 0; i < lat->size(); ++i)
    if (lat->maximal[i]) acc &= lat->subgroups[i].members;
  return g.subgroup(acc);
}

}  // namespace solmine
