#include "solmine/dsl/evaluator.hpp"

#include <atomic>
#include <future>
#include <map>
#include <set>
#include <unordered_map>

#include "solmine/group_algorithms.hpp"

namespace solmine::dsl {

namespace {

using Clock = std::chrono::steady_clock;

struct Timeout {};

struct Value {
  Type type = Type::boolean;
  bool truth = false;
  Elem elem = 0;
  std::int64_t integer = 0;
  std::shared_ptr<const ElementSet> set;
};

Value boolean(bool b) { return Value{Type::boolean, b, 0, 0, nullptr}; }
Value element(Elem e) { return Value{Type::element, false, e, 0, nullptr}; }
Value integer(std::int64_t i) { return Value{Type::integer, false, 0, i, nullptr}; }
Value set_value(ElementSet s) {
  return Value{Type::set, false, 0, 0, std::make_shared<const ElementSet>(std::move(s))};
}
Value set_value(std::shared_ptr<const ElementSet> s) { return Value{Type::set, false, 0, 0, std::move(s)}; }

std::string join_numbers(const std::vector<std::size_t>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + std::to_string(v[i]);
  return out + "]";
}

// Evaluation state for one group. Derived sets are memoized for the life
// of the context; nothing is shared between groups except the table's
// solvability memo.
class Context {
 public:
  Context(PermGroup g, const EvalBudget& budget, const Limits& limits, Clock::time_point deadline)
      : g_(std::move(g)), t_(g_.table()), limits_(limits), deadline_(deadline),
        budget_{budget.max_solvability_checks, &checks_},
        sol_(t_.order()), cent_(t_.order()) {}

  const PermGroup& group() const { return g_; }

  void bind(const std::string& var, Value v) { env_[var] = std::move(v); }
  void unbind(const std::string& var) { env_.erase(var); }
  bool bound(const std::string& var) const { return env_.count(var) != 0; }

  void tick() {
    if ((++ticks_ & 255) == 0 && Clock::now() > deadline_) throw Timeout{};
  }

  Value eval(const Node& n) {
    switch (n.op) {
      case Op::And: return boolean(truth(*n.args[0]) && truth(*n.args[1]));
      case Op::Or: return boolean(truth(*n.args[0]) || truth(*n.args[1]));
      case Op::Implies: return boolean(!truth(*n.args[0]) || truth(*n.args[1]));
      case Op::Not: return boolean(!truth(*n.args[0]));
      case Op::Subseteq: return boolean(set(*n.args[0])->is_subset_of(*set(*n.args[1])));
      case Op::EqSet: return boolean(*set(*n.args[0]) == *set(*n.args[1]));
      case Op::In: return boolean(set(*n.args[1])->contains(elem(*n.args[0])));
      case Op::IsSubgroup: return boolean(kernel::is_closed(t_, *set(*n.args[0])));
      case Op::IsSoluble: return boolean(soluble(generated(*set(*n.args[0]))));
      case Op::IsNilpotent: {
        const auto& h = generated(*set(*n.args[0]));
        return boolean(kernel::is_nilpotent(t_, h));
      }
      case Op::IsAbelian: return boolean(kernel::set_commutes(t_, *set(*n.args[0])));
      case Op::Divides: {
        std::int64_t a = num(*n.args[0]), b = num(*n.args[1]);
        return boolean(a == 0 ? b == 0 : b % a == 0);
      }
      case Op::Lt: return boolean(num(*n.args[0]) < num(*n.args[1]));
      case Op::Le: return boolean(num(*n.args[0]) <= num(*n.args[1]));
      case Op::Gt: return boolean(num(*n.args[0]) > num(*n.args[1]));
      case Op::Ge: return boolean(num(*n.args[0]) >= num(*n.args[1]));
      case Op::EqI: return boolean(num(*n.args[0]) == num(*n.args[1]));
      case Op::NeI: return boolean(num(*n.args[0]) != num(*n.args[1]));
      case Op::EqEl: return boolean(elem(*n.args[0]) == elem(*n.args[1]));

      case Op::Group: return set_value(whole());
      case Op::SetVar:
      case Op::ElemVar: return env_.at(n.name);
      case Op::Sol: return set_value(sol(elem(*n.args[0])));
      case Op::Centralizer: return set_value(centralizer(elem(*n.args[0])));
      case Op::Normalizer: return set_value(normalizer(*set(*n.args[0])));
      case Op::Center:
        if (!center_) center_ = std::make_shared<const ElementSet>(solmine::center(g_).members());
        return set_value(center_);
      case Op::Radical:
        if (!radical_) radical_ = std::make_shared<const ElementSet>(cached_radical(g_, limits_).members());
        return set_value(radical_);
      case Op::Fitting:
        if (!fitting_)
          fitting_ = std::make_shared<const ElementSet>(fitting_subgroup(g_, limits_).members());
        return set_value(fitting_);
      case Op::Hypercenter:
        if (!hyper_) hyper_ = std::make_shared<const ElementSet>(hypercenter(g_).members());
        return set_value(hyper_);
      case Op::Frattini: return set_value(frattini(*set(*n.args[0])));
      case Op::Derived: return set_value(derived(*set(*n.args[0])));
      case Op::Intersect: return set_value(*set(*n.args[0]) & *set(*n.args[1]));
      case Op::Closure: return set_value(generated(*set(*n.args[0])).members);

      case Op::Identity: return element(CayleyTable::identity());
      case Op::Inv: return element(t_.inv(elem(*n.args[0])));
      case Op::Mul: return element(t_.mul(elem(*n.args[0]), elem(*n.args[1])));
      case Op::Conj: return element(t_.conj(elem(*n.args[0]), elem(*n.args[1])));
      case Op::Comm: return element(t_.comm(elem(*n.args[0]), elem(*n.args[1])));

      case Op::IntLit: return integer(n.value);
      case Op::Card: return integer(static_cast<std::int64_t>(set(*n.args[0])->size()));
      case Op::Order: return integer(static_cast<std::int64_t>(t_.element_order(elem(*n.args[0]))));
      case Op::NPrimes: {
        std::int64_t v = num(*n.args[0]);
        if (v < 0) v = -v;
        return integer(static_cast<std::int64_t>(prime_divisors(static_cast<std::size_t>(v)).size()));
      }
    }
    return boolean(false);
  }

  bool truth(const Node& n) { return eval(n).truth; }
  std::int64_t num(const Node& n) { return eval(n).integer; }
  Elem elem(const Node& n) { return eval(n).elem; }
  std::shared_ptr<const ElementSet> set(const Node& n) { return eval(n).set; }

  std::shared_ptr<const ElementSet> whole() {
    if (!whole_) whole_ = std::make_shared<const ElementSet>(g_.members());
    return whole_;
  }

  std::shared_ptr<const ElementSet> sol(Elem x) {
    if (!sol_[x])
      sol_[x] = std::make_shared<const ElementSet>(solubilizer(g_, x, budget_, limits_).subset.members);
    return sol_[x];
  }

  std::shared_ptr<const ElementSet> centralizer(Elem x) {
    if (!cent_[x]) {
      ElementSet c = t_.empty_set();
      g_.members().for_each([&](Elem y) {
        if (t_.mul(x, y) == t_.mul(y, x)) c.insert(y);
      });
      cent_[x] = std::make_shared<const ElementSet>(std::move(c));
    }
    return cent_[x];
  }

  ElementSet normalizer(const ElementSet& s) {
    ElementSet out = t_.empty_set();
    g_.members().for_each([&](Elem c) {
      if (kernel::normalizes(t_, c, s)) out.insert(c);
    });
    return out;
  }

  const SubgroupData& generated(const ElementSet& s) {
    auto it = closures_.find(s);
    if (it != closures_.end()) return it->second;
    auto members = s.members();
    SubgroupData h = kernel::closure(t_, members);
    h.gens = kernel::generating_set(t_, h.members);
    return closures_.emplace(s, std::move(h)).first->second;
  }

  bool soluble(const SubgroupData& h) {
    if (auto hit = t_.cached_solvability(h.members)) return *hit;
    bool v = kernel::is_soluble(t_, h);
    t_.store_solvability(h.members, v);
    return v;
  }

  ElementSet derived(const ElementSet& s) {
    if (kernel::is_closed(t_, s)) return kernel::derived_subgroup(t_, generated(s)).members;
    std::vector<Elem> comms;
    ElementSet seen = t_.empty_set();
    auto m = s.members();
    for (Elem a : m)
      for (Elem b : m)
        if (seen.add(t_.comm(a, b))) comms.push_back(t_.comm(a, b));
    return kernel::closure(t_, comms).members;
  }

  ElementSet frattini(const ElementSet& s) {
    const SubgroupData& h = generated(s);
    auto it = frattini_.find(h.members);
    if (it != frattini_.end()) return it->second;
    ElementSet phi = h.members == g_.members()
                         ? frattini_subgroup(g_, limits_).members()
                         : frattini_subgroup(PermGroup(g_.table_ptr(), h), limits_).members();
    return frattini_.emplace(h.members, std::move(phi)).first->second;
  }

  // Subgroups of G contained in s, in lattice order.
  std::vector<ElementSet> subgroups_within(const ElementSet& s) {
    auto lat = subgroup_lattice(g_, limits_);
    std::vector<ElementSet> out;
    for (const auto& h : lat->subgroups)
      if (h.members.is_subset_of(s)) out.push_back(h.members);
    return out;
  }

 private:
  PermGroup g_;
  const CayleyTable& t_;
  Limits limits_;
  Clock::time_point deadline_;
  std::atomic<std::size_t> checks_{0};
  SolvabilityBudget budget_;
  std::size_t ticks_ = 0;

  std::unordered_map<std::string, Value> env_;
  std::vector<std::shared_ptr<const ElementSet>> sol_, cent_;
  std::shared_ptr<const ElementSet> whole_, center_, radical_, fitting_, hyper_;
  std::unordered_map<ElementSet, SubgroupData, ElementSetHash> closures_;
  std::unordered_map<ElementSet, ElementSet, ElementSetHash> frattini_;
};

std::string subgroup_text(const CayleyTable& t, const ElementSet& s) {
  auto gens = kernel::generating_set(t, s);
  std::string out = "<";
  for (std::size_t i = 0; i < gens.size(); ++i) out += (i ? ", " : "") + t.element(gens[i]).to_cycles();
  return out + "> of order " + std::to_string(s.size());
}

struct Failure {
  std::vector<Binding> bindings;
};

struct GroupResult {
  enum { holds, fails, unverifiable, timeout } status = holds;
  std::vector<Failure> failures;
  std::string reason;
  bool budget = false;
};

class Runner {
 public:
  Runner(const Conjecture& c, Context& ctx, const EvalOptions& opt) : c_(c), ctx_(ctx), opt_(opt) {}

  // Returns whether the formula from quantifier `level` on holds. On a
  // universal failure, `fail` receives the failing bindings from `level`
  // down through consecutive universal quantifiers.
  bool run(std::size_t level, std::vector<Binding>& fail, std::vector<Failure>* collect = nullptr) {
    ctx_.tick();
    if (level == c_.prefix.size()) return ctx_.truth(*c_.body);
    const Quantifier& q = c_.prefix[level];
    const CayleyTable& t = ctx_.group().table();

    std::vector<Binding> candidates;
    auto range = ctx_.set(*q.range);
    if (q.kind == RangeKind::elements) {
      if (level == 0 && opt_.conjugacy_reduction && q.range->op == Op::Group) {
        for (Elem r : class_representatives(ctx_.group())) candidates.push_back(element_binding(q.var, r, t));
      } else {
        range->for_each([&](Elem e) { candidates.push_back(element_binding(q.var, e, t)); });
      }
    } else {
      for (auto& h : ctx_.subgroups_within(*range)) {
        Binding b;
        b.var = q.var;
        b.type = Type::set;
        b.text = subgroup_text(t, h);
        b.subgroup = std::move(h);
        candidates.push_back(std::move(b));
      }
    }

    bool all_ok = true;
    for (auto& b : candidates) {
      bind(b);
      std::vector<Binding> inner;
      bool ok = run(level + 1, inner);
      ctx_.unbind(q.var);
      if (q.quant == Quant::exists) {
        if (ok) return true;
        continue;
      }
      if (ok) continue;
      all_ok = false;
      std::vector<Binding> chain{b};
      chain.insert(chain.end(), inner.begin(), inner.end());
      if (collect) {
        collect->push_back(Failure{chain});
        if (collect->size() >= opt_.max_witnesses) return false;
        continue;
      }
      fail = std::move(chain);
      return false;
    }
    return q.quant == Quant::forall ? all_ok : false;
  }

  void bind(const Binding& b) {
    if (b.type == Type::set)
      ctx_.bind(b.var, set_value(*b.subgroup));
    else
      ctx_.bind(b.var, element(b.element));
  }

 private:
  const Conjecture& c_;
  Context& ctx_;
  const EvalOptions& opt_;

  static Binding element_binding(const std::string& var, Elem e, const CayleyTable& t) {
    Binding b;
    b.var = var;
    b.type = Type::element;
    b.element = e;
    b.text = t.element(e).to_cycles();
    return b;
  }
};

// Which variables a subterm mentions.
void free_vars(const Node& n, std::set<std::string>& out) {
  if (n.op == Op::SetVar || n.op == Op::ElemVar) out.insert(n.name);
  for (const auto& a : n.args) free_vars(*a, out);
}

std::vector<TermValue> diagnose(const Conjecture& c, Context& ctx) {
  std::vector<TermValue> out;
  std::set<std::string> done;
  const CayleyTable& t = ctx.group().table();
  const std::size_t gorder = ctx.group().order();
  walk(c.body, [&](const NodePtr& n) {
    if (n->op == Op::IntLit || n->op == Op::ElemVar || n->op == Op::SetVar || n->op == Op::Identity)
      return;
    std::set<std::string> vars;
    free_vars(*n, vars);
    for (const auto& v : vars)
      if (!ctx.bound(v)) return;
    std::string key = render(*n);
    if (!done.insert(key).second) return;
    TermValue tv;
    tv.term = key;
    tv.type = n->type();
    try {
      Value v = ctx.eval(*n);
      switch (tv.type) {
        case Type::boolean:
          tv.truth = v.truth;
          tv.text = v.truth ? "true" : "false";
          break;
        case Type::integer:
          tv.integer = v.integer;
          tv.primes = prime_divisors(static_cast<std::size_t>(v.integer < 0 ? -v.integer : v.integer));
          tv.text = std::to_string(v.integer);
          break;
        case Type::element:
          tv.text = t.element(v.elem).to_cycles() + " of order " + std::to_string(t.element_order(v.elem));
          break;
        case Type::set: {
          tv.cardinality = v.set->size();
          tv.primes = prime_divisors(tv.cardinality);
          tv.fraction = Rational::make(tv.cardinality, gorder);
          tv.text = "size " + std::to_string(tv.cardinality) + ", prime divisors " +
                    join_numbers(tv.primes) + ", fraction " + tv.fraction.str();
          if (kernel::is_closed(t, *v.set)) tv.text += ", subgroup " + subgroup_text(t, *v.set);
          break;
        }
      }
    } catch (const std::exception& e) {
      tv.text = std::string("unavailable: ") + e.what();
    }
    out.push_back(std::move(tv));
  });
  return out;
}

// Evaluates the formula below the witness bindings.
bool refuted_in(const Conjecture& c, Context& ctx, const std::vector<Binding>& bindings,
                const EvalOptions& opt) {
  Runner r(c, ctx, opt);
  for (const auto& b : bindings) r.bind(b);
  std::vector<Binding> ignored;
  bool holds = r.run(bindings.size(), ignored);
  for (const auto& b : bindings) ctx.unbind(b.var);
  return !holds;
}

Witness make_witness(const Conjecture& c, Context& ctx, const CatalogEntry& e, const Failure& f,
                     const EvalOptions& opt) {
  Witness w;
  w.group = e.name;
  w.group_display = e.display_name();
  w.group_order = ctx.group().order();
  w.bindings = f.bindings;
  Runner r(c, ctx, opt);
  for (const auto& b : w.bindings) r.bind(b);
  w.diagnostics = diagnose(c, ctx);
  for (const auto& b : w.bindings) ctx.unbind(b.var);
  w.verified = refuted_in(c, ctx, w.bindings, opt);
  return w;
}

struct GroupRun {
  GroupResult result;
  std::vector<Witness> witnesses;
};

GroupRun run_group(const Conjecture& c, const CatalogEntry& e, const EvalBudget& budget,
                   const EvalOptions& opt, Clock::time_point deadline) {
  GroupRun out;
  try {
    Context ctx(e.group(opt.limits), budget, opt.limits, deadline);
    Runner r(c, ctx, opt);
    std::vector<Binding> fail;
    std::vector<Failure> collected;
    bool holds = r.run(0, fail, opt.all_witnesses ? &collected : nullptr);
    if (holds) return out;
    out.result.status = GroupResult::fails;
    if (!opt.all_witnesses) collected.push_back(Failure{fail});
    for (const auto& f : collected) out.witnesses.push_back(make_witness(c, ctx, e, f, opt));
  } catch (const Timeout&) {
    out.result.status = GroupResult::timeout;
    out.result.reason = "budget: wall-clock timeout reached while evaluating " + e.name;
    out.result.budget = true;
  } catch (const SolvabilityBudgetExceeded& ex) {
    out.result.status = GroupResult::unverifiable;
    out.result.reason = "budget: " + std::string(ex.what()) + " on " + e.name;
    out.result.budget = true;
  } catch (const LatticeUnavailable& ex) {
    out.result.status = GroupResult::unverifiable;
    out.result.reason = "lattice unavailable: " + std::string(ex.what());
  } catch (const std::exception& ex) {
    out.result.status = GroupResult::unverifiable;
    out.result.reason = std::string(ex.what()) + " (" + e.name + ")";
  }
  return out;
}

}  // namespace

std::string_view kind_name(OutcomeKind k) {
  switch (k) {
    case OutcomeKind::CounterexampleFound: return "CounterexampleFound";
    case OutcomeKind::NoCounterexamples: return "NoCounterexamples";
    case OutcomeKind::Unverifiable: return "Unverifiable";
  }
  return "?";
}

const TermValue* Witness::value_of(std::string_view term) const {
  for (const auto& d : diagnostics)
    if (d.term == term) return &d;
  return nullptr;
}

Outcome evaluate(const Conjecture& c, std::span<const CatalogEntry> catalog, const EvalBudget& budget,
                 const EvalOptions& opt) {
  Outcome out;
  const auto deadline = Clock::now() + budget.wall_timeout;

  std::vector<const CatalogEntry*> todo;
  for (const auto& e : catalog) {
    if (c.domain == Domain::nonsolvable && e.expected_order > c.max_order) continue;
    if (e.expected_order > budget.max_group_order) {
      ++out.groups_skipped;
      continue;
    }
    todo.push_back(&e);
  }

  std::vector<GroupRun> runs(todo.size());
  if (opt.parallel && todo.size() > 1) {
    std::vector<std::future<GroupRun>> futs;
    for (const auto* e : todo)
      futs.push_back(std::async(std::launch::async, [&, e] { return run_group(c, *e, budget, opt, deadline); }));
    for (std::size_t i = 0; i < futs.size(); ++i) runs[i] = futs[i].get();
  }

  std::string first_unverifiable;
  bool budget_hit = false;
  for (std::size_t i = 0; i < todo.size(); ++i) {
    if (!opt.parallel || todo.size() <= 1) runs[i] = run_group(c, *todo[i], budget, opt, deadline);
    GroupRun& r = runs[i];
    switch (r.result.status) {
      case GroupResult::holds: ++out.groups_checked; break;
      case GroupResult::fails:
        ++out.groups_checked;
        if (!out.witness) out.witness = r.witnesses.front();
        if (opt.all_witnesses) {
          for (auto& w : r.witnesses) out.all_witnesses.push_back(std::move(w));
          break;
        }
        out.kind = OutcomeKind::CounterexampleFound;
        return out;
      case GroupResult::timeout:
        out.kind = OutcomeKind::Unverifiable;
        out.reason = r.result.reason;
        out.error_code = "E_BUDGET";
        if (out.witness) out.kind = OutcomeKind::CounterexampleFound;
        return out;
      case GroupResult::unverifiable:
        if (first_unverifiable.empty()) {
          first_unverifiable = r.result.reason;
          budget_hit = r.result.budget;
        }
        break;
    }
  }
  if (out.witness) {
    out.kind = OutcomeKind::CounterexampleFound;
  } else if (!first_unverifiable.empty()) {
    out.kind = OutcomeKind::Unverifiable;
    out.reason = first_unverifiable;
    if (budget_hit) out.error_code = "E_BUDGET";
  } else {
    out.kind = OutcomeKind::NoCounterexamples;
  }
  return out;
}

bool witness_refutes(const Conjecture& c, const CatalogEntry& entry, const Witness& w,
                     const Limits& limits) {
  EvalBudget budget;
  EvalOptions opt;
  opt.limits = limits;
  Context ctx(entry.group(limits), budget, limits, Clock::now() + budget.wall_timeout);
  return refuted_in(c, ctx, w.bindings, opt);
}

}  // namespace solmine::dsl
