#pragma once

// Test-only reference computations. Everything here works on raw
// Permutation values and std::set, never on the group tables, so the
// results are independent of the library's indexing and caching.

#include <set>
#include <string>
#include <vector>

#include "solmine/permutation.hpp"

namespace oracle {

using solmine::Permutation;
using PermSet = std::set<Permutation>;

inline Permutation P(const std::string& cycles, std::size_t degree) {
  return Permutation::parse(cycles, degree);
}

// Closure under all pairwise products until nothing new appears.
inline PermSet closure(const std::vector<Permutation>& gens, std::size_t degree) {
  PermSet s{Permutation(degree)};
  s.insert(gens.begin(), gens.end());
  for (;;) {
    PermSet next = s;
    for (const auto& a : s)
      for (const auto& b : s) next.insert(a * b);
    if (next.size() == s.size()) return s;
    s = std::move(next);
  }
}

inline std::size_t degree_of(const PermSet& h) { return h.begin()->degree(); }

inline PermSet derived(const PermSet& h) {
  std::vector<Permutation> comms;
  for (const auto& a : h)
    for (const auto& b : h) comms.push_back(solmine::commutator(a, b));
  return closure(comms, degree_of(h));
}

inline PermSet commutator_group(const PermSet& a, const PermSet& b) {
  std::vector<Permutation> comms;
  for (const auto& x : a)
    for (const auto& y : b) comms.push_back(solmine::commutator(x, y));
  return closure(comms, degree_of(a));
}

inline bool is_soluble(PermSet h) {
  while (h.size() > 1) {
    PermSet d = derived(h);
    if (d.size() == h.size()) return false;
    h = std::move(d);
  }
  return true;
}

inline bool is_nilpotent(const PermSet& g) {
  PermSet cur = g;
  while (cur.size() > 1) {
    PermSet next = commutator_group(g, cur);
    if (next.size() == cur.size()) return false;
    cur = std::move(next);
  }
  return true;
}

inline PermSet centralizer(const PermSet& g, const Permutation& x) {
  PermSet c;
  for (const auto& y : g)
    if (x * y == y * x) c.insert(y);
  return c;
}

inline std::vector<PermSet> classes(const PermSet& g) {
  std::vector<PermSet> out;
  PermSet done;
  for (const auto& x : g) {
    if (done.count(x)) continue;
    PermSet cls;
    for (const auto& h : g) cls.insert(x.conjugate_by(h));
    done.insert(cls.begin(), cls.end());
    out.push_back(std::move(cls));
  }
  return out;
}

inline bool is_subgroup(const PermSet& s) {
  for (const auto& a : s)
    for (const auto& b : s)
      if (!s.count(a * b.inverse())) return false;
  return !s.empty();
}

// Solubilizer straight from the definition.
inline PermSet solubilizer(const PermSet& g, const Permutation& x) {
  PermSet sol;
  for (const auto& y : g)
    if (is_soluble(closure({x, y}, x.degree()))) sol.insert(y);
  return sol;
}

// All subgroups reachable as <a, b>, then closed under pairwise joins.
inline std::set<PermSet> subgroups_by_joins(const PermSet& g) {
  std::set<PermSet> subs;
  for (const auto& a : g)
    for (const auto& b : g) subs.insert(closure({a, b}, a.degree()));
  for (bool grew = true; grew;) {
    grew = false;
    std::vector<PermSet> list(subs.begin(), subs.end());
    for (std::size_t i = 0; i < list.size(); ++i)
      for (std::size_t j = i + 1; j < list.size(); ++j) {
        std::vector<Permutation> gens(list[i].begin(), list[i].end());
        gens.insert(gens.end(), list[j].begin(), list[j].end());
        if (subs.insert(closure(gens, degree_of(g))).second) grew = true;
      }
  }
  return subs;
}

inline std::vector<PermSet> maximal_among(const std::set<PermSet>& subs, const PermSet& g) {
  std::vector<PermSet> out;
  for (const auto& h : subs) {
    if (h.size() == g.size()) continue;
    bool maximal = true;
    for (const auto& k : subs) {
      if (k.size() <= h.size() || k.size() == g.size()) continue;
      if (std::includes(k.begin(), k.end(), h.begin(), h.end())) {
        maximal = false;
        break;
      }
    }
    if (maximal) out.push_back(h);
  }
  return out;
}

}  // namespace oracle
