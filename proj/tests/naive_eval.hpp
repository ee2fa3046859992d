#pragma once

// A deliberately naive evaluator used as an oracle for the real one. It
// builds its own multiplication table from raw permutations, computes every
// primitive straight from its definition, expands every quantifier over its
// whole range and evaluates both sides of every connective.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "solmine/dsl/ast.hpp"
#include "solmine/permutation.hpp"

namespace naive {

using solmine::Permutation;
using namespace solmine::dsl;

using Set = std::vector<char>;  // membership flags over the group's elements

class World {
 public:
  World(std::string name, const std::vector<Permutation>& gens, std::size_t degree) : name_(std::move(name)) {
    std::set<Permutation> s{Permutation(degree)};
    std::vector<Permutation> frontier{Permutation(degree)};
    while (!frontier.empty()) {
      std::vector<Permutation> next;
      for (const auto& a : frontier)
        for (const auto& g : gens)
          if (s.insert(a * g).second) next.push_back(a * g);
      frontier = std::move(next);
    }
    elems_.assign(s.begin(), s.end());
    n_ = elems_.size();
    for (std::size_t i = 0; i < n_; ++i) index_[elems_[i]] = i;
    mul_.resize(n_ * n_);
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b) mul_[a * n_ + b] = index_.at(elems_[a] * elems_[b]);
    inv_.resize(n_);
    for (std::size_t a = 0; a < n_; ++a) inv_[a] = index_.at(elems_[a].inverse());
    id_ = index_.at(Permutation(degree));
    for (std::size_t a = 0; a < n_; ++a) all_gens_.push_back(a);

    sol_.resize(n_);
    for (std::size_t x = 0; x < n_; ++x) {
      sol_[x].assign(n_, 0);
      for (std::size_t y = 0; y < n_; ++y) sol_[x][y] = soluble(span(std::vector<std::size_t>{x, y}));
    }
    normals_ = normal_subgroups();
    radical_ = join_where([&](const Set& n) { return soluble(n); });
    fitting_ = join_where([&](const Set& n) { return nilpotent(n); });
    center_ = Set(n_, 0);
    for (std::size_t z = 0; z < n_; ++z) {
      bool c = true;
      for (std::size_t g = 0; g < n_; ++g) c = c && mul(z, g) == mul(g, z);
      center_[z] = c;
    }
    hyper_ = Set(n_, 0);
    hyper_[id_] = 1;
    for (;;) {
      Set next(n_, 0);
      for (std::size_t g = 0; g < n_; ++g) {
        bool in = true;
        for (std::size_t h = 0; h < n_; ++h) in = in && hyper_[comm(g, h)];
        next[g] = in;
      }
      if (next == hyper_) break;
      hyper_ = next;
    }
  }

  const std::string& name() const { return name_; }
  std::size_t order() const { return n_; }
  const Permutation& element(std::size_t i) const { return elems_[i]; }

  // Truth of the formula from quantifier `level`, with `env` binding the
  // earlier variables.
  bool holds(const Conjecture& c, std::size_t level, std::map<std::string, std::size_t>& env) const {
    if (level == c.prefix.size()) return eval(*c.body, env).truth;
    const auto& q = c.prefix[level];
    Set range = eval(*q.range, env).set;
    std::vector<bool> results;
    for (std::size_t e = 0; e < n_; ++e) {
      if (!range[e]) continue;
      env[q.var] = e;
      results.push_back(holds(c, level + 1, env));
      env.erase(q.var);
    }
    if (q.quant == Quant::forall) return std::all_of(results.begin(), results.end(), [](bool b) { return b; });
    return std::any_of(results.begin(), results.end(), [](bool b) { return b; });
  }

  // First universally failing binding of the outermost quantifier, if the
  // formula fails and that quantifier is universal.
  std::optional<std::size_t> first_failure(const Conjecture& c) const {
    std::map<std::string, std::size_t> env;
    if (holds(c, 0, env)) return std::nullopt;
    if (c.prefix.empty() || c.prefix[0].quant != Quant::forall) return std::size_t(-1);
    Set range = eval(*c.prefix[0].range, env).set;
    for (std::size_t e = 0; e < n_; ++e) {
      if (!range[e]) continue;
      env[c.prefix[0].var] = e;
      bool ok = holds(c, 1, env);
      env.erase(c.prefix[0].var);
      if (!ok) return e;
    }
    return std::size_t(-1);
  }

  std::optional<std::size_t> find(const Permutation& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

 private:
  struct Val {
    bool truth = false;
    std::size_t elem = 0;
    long long integer = 0;
    Set set;
  };

  std::string name_;
  std::vector<Permutation> elems_;
  std::map<Permutation, std::size_t> index_;
  std::size_t n_ = 0, id_ = 0;
  std::vector<std::size_t> mul_, inv_, all_gens_;
  std::vector<Set> sol_, normals_;
  Set radical_, fitting_, center_, hyper_;

  std::size_t mul(std::size_t a, std::size_t b) const { return mul_[a * n_ + b]; }
  std::size_t comm(std::size_t a, std::size_t b) const { return mul(mul(inv_[a], inv_[b]), mul(a, b)); }
  std::size_t conj(std::size_t a, std::size_t g) const { return mul(mul(inv_[g], a), g); }

  Set span(const std::vector<std::size_t>& gens) const {
    Set s(n_, 0);
    s[id_] = 1;
    std::vector<std::size_t> todo{id_};
    while (!todo.empty()) {
      std::size_t a = todo.back();
      todo.pop_back();
      for (std::size_t g : gens) {
        std::size_t p = mul(a, g);
        if (!s[p]) {
          s[p] = 1;
          todo.push_back(p);
        }
      }
    }
    return s;
  }
  Set span(const Set& s) const { return span(members(s)); }

  std::vector<std::size_t> members(const Set& s) const {
    std::vector<std::size_t> m;
    for (std::size_t i = 0; i < n_; ++i)
      if (s[i]) m.push_back(i);
    return m;
  }
  std::size_t size(const Set& s) const { return static_cast<std::size_t>(std::count(s.begin(), s.end(), 1)); }

  Set commutators(const Set& a, const Set& b) const {
    std::vector<std::size_t> c;
    for (std::size_t x : members(a))
      for (std::size_t y : members(b)) c.push_back(comm(x, y));
    return span(c);
  }

  // A few elements that generate `s`, picked greedily.
  std::vector<std::size_t> generators_of(const Set& s) const {
    std::vector<std::size_t> gens;
    Set cur = span(gens);
    for (std::size_t e : members(s))
      if (!cur[e]) {
        gens.push_back(e);
        cur = span(gens);
      }
    return gens;
  }

  // The derived subgroup of H is the normal closure in H of the commutators
  // of a generating set.
  bool soluble(Set h) const {
    for (;;) {
      if (size(h) == 1) return true;
      std::vector<std::size_t> gens = generators_of(h);
      Set conjugates(n_, 0);
      for (std::size_t a : gens)
        for (std::size_t b : gens)
          for (std::size_t g : members(h)) conjugates[conj(comm(a, b), g)] = 1;
      Set d = span(conjugates);
      if (d == h) return false;
      h = std::move(d);
    }
  }

  bool nilpotent(const Set& h) const {
    Set cur = h;
    for (;;) {
      if (size(cur) == 1) return true;
      Set next = commutators(cur, h);
      if (next == cur) return false;
      cur = std::move(next);
    }
  }

  bool closed(const Set& s) const {
    if (!s[id_]) return false;
    for (std::size_t a : members(s))
      for (std::size_t b : members(s))
        if (!s[mul(a, inv_[b])]) return false;
    return true;
  }

  std::vector<Set> normal_subgroups() const {
    std::vector<Set> closures;
    for (std::size_t x = 0; x < n_; ++x) {
      std::vector<std::size_t> cls;
      for (std::size_t g = 0; g < n_; ++g) cls.push_back(conj(x, g));
      closures.push_back(span(cls));
    }
    std::set<Set> found(closures.begin(), closures.end());
    for (bool grew = true; grew;) {
      grew = false;
      std::vector<Set> list(found.begin(), found.end());
      for (const auto& a : list)
        for (const auto& b : closures) {
          Set u = a;
          for (std::size_t i = 0; i < n_; ++i) u[i] = u[i] || b[i];
          if (found.insert(span(u)).second) grew = true;
        }
    }
    return {found.begin(), found.end()};
  }

  template <class Pred>
  Set join_where(Pred p) const {
    Set u(n_, 0);
    u[id_] = 1;
    for (const auto& n : normals_)
      if (p(n))
        for (std::size_t i = 0; i < n_; ++i) u[i] = u[i] || n[i];
    return span(u);
  }

  static long long nprimes(long long v) {
    if (v < 0) v = -v;
    long long count = 0;
    for (long long p = 2; p <= v; ++p) {
      bool prime = true;
      for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0) prime = false;
      if (prime && v % p == 0) ++count;
    }
    return count;
  }

  Val eval(const Node& n, const std::map<std::string, std::size_t>& env) const {
    Val v;
    std::vector<Val> a;
    for (const auto& arg : n.args) a.push_back(eval(*arg, env));  // no short-circuit
    switch (n.op) {
      case Op::And: v.truth = a[0].truth && a[1].truth; break;
      case Op::Or: v.truth = a[0].truth || a[1].truth; break;
      case Op::Implies: v.truth = !a[0].truth || a[1].truth; break;
      case Op::Not: v.truth = !a[0].truth; break;
      case Op::Subseteq: {
        v.truth = true;
        for (std::size_t i = 0; i < n_; ++i)
          if (a[0].set[i] && !a[1].set[i]) v.truth = false;
        break;
      }
      case Op::EqSet: v.truth = a[0].set == a[1].set; break;
      case Op::In: v.truth = a[1].set[a[0].elem]; break;
      case Op::IsSubgroup: v.truth = closed(a[0].set); break;
      case Op::IsSoluble: v.truth = soluble(span(a[0].set)); break;
      case Op::IsNilpotent: v.truth = nilpotent(span(a[0].set)); break;
      case Op::IsAbelian: {
        v.truth = true;
        for (std::size_t x : members(a[0].set))
          for (std::size_t y : members(a[0].set))
            if (mul(x, y) != mul(y, x)) v.truth = false;
        break;
      }
      case Op::Divides:
        v.truth = a[0].integer == 0 ? a[1].integer == 0 : a[1].integer % a[0].integer == 0;
        break;
      case Op::Lt: v.truth = a[0].integer < a[1].integer; break;
      case Op::Le: v.truth = a[0].integer <= a[1].integer; break;
      case Op::Gt: v.truth = a[0].integer > a[1].integer; break;
      case Op::Ge: v.truth = a[0].integer >= a[1].integer; break;
      case Op::EqI: v.truth = a[0].integer == a[1].integer; break;
      case Op::NeI: v.truth = a[0].integer != a[1].integer; break;
      case Op::EqEl: v.truth = a[0].elem == a[1].elem; break;

      case Op::Group: v.set = Set(n_, 1); break;
      case Op::SetVar: throw std::logic_error("subgroup variables are not supported by the naive oracle");
      case Op::Sol: v.set = sol_[a[0].elem]; break;
      case Op::Centralizer: {
        v.set = Set(n_, 0);
        for (std::size_t y = 0; y < n_; ++y) v.set[y] = mul(a[0].elem, y) == mul(y, a[0].elem);
        break;
      }
      case Op::Normalizer: {
        v.set = Set(n_, 0);
        for (std::size_t g = 0; g < n_; ++g) {
          Set image(n_, 0);
          for (std::size_t s : members(a[0].set)) image[conj(s, g)] = 1;
          v.set[g] = image == a[0].set;
        }
        break;
      }
      case Op::Center: v.set = center_; break;
      case Op::Radical: v.set = radical_; break;
      case Op::Fitting: v.set = fitting_; break;
      case Op::Hypercenter: v.set = hyper_; break;
      case Op::Frattini: throw std::logic_error("frattini is not supported by the naive oracle");
      case Op::Derived: v.set = commutators(a[0].set, a[0].set); break;
      case Op::Intersect: {
        v.set = Set(n_, 0);
        for (std::size_t i = 0; i < n_; ++i) v.set[i] = a[0].set[i] && a[1].set[i];
        break;
      }
      case Op::Closure: v.set = span(a[0].set); break;

      case Op::ElemVar: v.elem = env.at(n.name); break;
      case Op::Identity: v.elem = id_; break;
      case Op::Inv: v.elem = inv_[a[0].elem]; break;
      case Op::Mul: v.elem = mul(a[0].elem, a[1].elem); break;
      case Op::Conj: v.elem = conj(a[0].elem, a[1].elem); break;
      case Op::Comm: v.elem = comm(a[0].elem, a[1].elem); break;

      case Op::IntLit: v.integer = n.value; break;
      case Op::Card: v.integer = static_cast<long long>(size(a[0].set)); break;
      case Op::Order: {
        long long k = 1;
        for (std::size_t p = a[0].elem; p != id_; p = mul(p, a[0].elem)) ++k;
        v.integer = k;
        break;
      }
      case Op::NPrimes: v.integer = nprimes(a[0].integer); break;
    }
    return v;
  }
};

}  // namespace naive
