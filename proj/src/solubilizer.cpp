#include "solmine/solubilizer.hpp"

#include <numeric>

#include "solmine/detail/group_cache.hpp"
#include "solmine/group_algorithms.hpp"

namespace solmine {

namespace {

bool soluble_memo(const CayleyTable& t, const SubgroupData& h) {
  if (auto hit = t.cached_solvability(h.members)) return *hit;
  bool verdict = kernel::is_soluble(t, h);
  t.store_solvability(h.members, verdict);
  return verdict;
}

void charge(const SolvabilityBudget& budget) {
  if (!budget.used) return;
  std::size_t n = budget.used->fetch_add(1, std::memory_order_relaxed) + 1;
  if (budget.limit && n > budget.limit) {
    throw SolvabilityBudgetExceeded("solvability check budget of " + std::to_string(budget.limit) +
                                    " exhausted");
  }
}

SolubilizerResult finish(const PermGroup& g, ElementSet members, bool shortcut, std::size_t checks) {
  SolubilizerResult r;
  r.subset = subset_of(g, std::move(members));
  r.via_radical_shortcut = shortcut;
  r.cardinality = r.subset.size();
  r.is_subgroup = shortcut || is_subgroup(r.subset);
  r.checks = checks;
  return r;
}

SolubilizerResult scan(const PermGroup& g, Elem x, const SolvabilityBudget& budget) {
  const CayleyTable& t = g.table();
  ElementSet sol = t.empty_set();
  sol.insert(x);
  sol.insert(CayleyTable::identity());
  std::size_t checks = 0;
  g.members().for_each([&](Elem y) {
    // Anything inside a soluble subgroup already known to contain x is in.
    if (sol.contains(y)) return;
    charge(budget);
    ++checks;
    const Elem gens[] = {x, y};
    SubgroupData h = kernel::closure(t, gens);
    if (soluble_memo(t, h)) sol |= h.members;
  });
  return finish(g, std::move(sol), false, checks);
}

}  // namespace

std::vector<Permutation> SubsetHandle::elements() const {
  std::vector<Permutation> out;
  members.for_each([&](Elem e) { out.push_back(table->element(e)); });
  return out;
}

SubsetHandle subset_of(const PermGroup& ambient, ElementSet members) {
  return SubsetHandle{ambient.table_ptr(), std::move(members), ambient.order()};
}

SubsetHandle whole(const PermGroup& g) { return subset_of(g, g.members()); }

PermGroup cached_radical(const PermGroup& g, const Limits& limits) {
  auto& cache = g.cache();
  std::lock_guard lock(cache.mutex);
  if (!cache.radical) cache.radical = soluble_radical(g, limits);
  return *cache.radical;
}

SolubilizerResult solubilizer(const PermGroup& g, const Permutation& x,
                              const SolvabilityBudget& budget, const Limits& limits) {
  return solubilizer(g, g.index_of(x), budget, limits);
}

SolubilizerResult solubilizer(const PermGroup& g, Elem x, const SolvabilityBudget& budget,
                              const Limits& limits) {
  if (!g.contains(x)) throw MembershipError("element is not in the group");
  bool in_radical = false;
  try {
    in_radical = cached_radical(g, limits).contains(x);
  } catch (const CapExceeded&) {
    // Too large for a normal-subgroup scan; fall through to the plain scan.
  }
  if (in_radical) return finish(g, g.members(), true, 0);
  return scan(g, x, budget);
}

SolubilizerResult solubilizer_by_definition(const PermGroup& g, Elem x) {
  if (!g.contains(x)) throw MembershipError("element is not in the group");
  return scan(g, x, {});
}

SolubilizerResult solubilizer_via_maximal(const PermGroup& g, Elem x, const Limits& limits) {
  if (!g.contains(x)) throw MembershipError("element is not in the group");
  auto lat = subgroup_lattice(g, limits);
  if (cached_radical(g, limits).contains(x)) return finish(g, g.members(), true, 0);

  const CayleyTable& t = g.table();
  ElementSet sol = t.empty_set();
  std::vector<bool> seen(lat->size(), false);
  std::vector<std::size_t> stack{lat->size() - 1};
  std::size_t checks = 0;
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    if (seen[i]) continue;
    seen[i] = true;
    const SubgroupData& m = lat->subgroups[i];
    if (!m.members.contains(x)) continue;
    ++checks;
    if (soluble_memo(t, m)) {
      sol |= m.members;
    } else {
      for (std::size_t k : lat->maximal_below(i)) stack.push_back(k);
    }
  }
  return finish(g, std::move(sol), false, checks);
}

bool is_subgroup(const SubsetHandle& s) { return kernel::is_closed(*s.table, s.members); }

Rational Rational::make(std::uint64_t num, std::uint64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  std::uint64_t g = std::gcd(num, den);
  if (g == 0) return Rational{0, 1};
  return Rational{num / g, den / g};
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

bool operator<(const Rational& a, const Rational& b) {
  return static_cast<unsigned __int128>(a.num) * b.den < static_cast<unsigned __int128>(b.num) * a.den;
}

std::vector<std::size_t> prime_divisors(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

SubsetStats subset_stats(const SubsetHandle& s) {
  SubsetStats st;
  st.cardinality = s.size();
  st.prime_divisors = prime_divisors(st.cardinality);
  st.fraction = Rational::make(st.cardinality, s.ambient_order ? s.ambient_order : 1);
  return st;
}

std::vector<Elem> class_representatives(const PermGroup& g) {
  std::vector<Elem> out;
  for (const auto& c : conjugacy_classes(g)) out.push_back(c.representative);
  return out;
}

}  // namespace solmine
