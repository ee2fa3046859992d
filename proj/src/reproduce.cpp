#include "solmine/reproduce.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "solmine/dsl/parser.hpp"
#include "solmine/group_algorithms.hpp"
#include "solmine/solubilizer.hpp"

namespace solmine::repro {

namespace {

std::string join(const std::vector<std::size_t>& xs) {
  std::string s = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + std::to_string(xs[i]);
  return s + "]";
}

Check check(std::string what, bool ok, std::string detail = {}) { return {std::move(what), ok, std::move(detail)}; }

void expect_witness(Report& r, std::span<const CatalogEntry> catalog, std::string_view group) {
  const auto& o = r.outcome;
  r.checks.push_back(check("counterexample found", o.kind == dsl::OutcomeKind::CounterexampleFound,
                           std::string(dsl::kind_name(o.kind)) + (o.reason.empty() ? "" : ": " + o.reason)));
  if (!o.witness) return;
  const CatalogEntry* e = find_entry(catalog, o.witness->group);
  bool match = e && e->answers_to(group);
  r.checks.push_back(check("witness group is " + std::string(group), match,
                           o.witness->group + " (reported as " + o.witness->group_display + ")"));
  r.checks.push_back(check("witness re-evaluates to false", o.witness->verified));
}

const dsl::TermValue* value(const Report& r, std::string_view term) {
  return r.outcome.witness ? r.outcome.witness->value_of(term) : nullptr;
}

Elem element_of(const PermGroup&, const dsl::Binding& b) { return b.element; }

bool even(const Permutation& p) {
  std::size_t transpositions = 0;
  std::vector<bool> seen(p.degree());
  for (std::size_t i = 0; i < p.degree(); ++i) {
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = p[j], ++len) seen[j] = true;
    if (len) transpositions += len - 1;
  }
  return transpositions % 2 == 0;
}

void two_primes(Report& r, std::span<const CatalogEntry> catalog) {
  expect_witness(r, catalog, "PSL(3,2)");
  if (!r.outcome.witness) return;
  const auto& w = *r.outcome.witness;
  r.checks.push_back(check("reported as PSL(3,2)", w.group_display == "PSL(3,2)", w.group_display));
  const auto* card = value(r, "card(sol(x))");
  bool primes = card && card->primes == std::vector<std::size_t>{3, 7};
  r.checks.push_back(check("prime divisors of |Sol_G(x)| are [3, 7]", primes,
                           card ? "|Sol_G(x)| = " + card->text + ", primes " + join(card->primes) : "missing"));
  if (!w.bindings.empty()) {
    auto g = find_entry(catalog, w.group)->group();
    auto ord = g.table().element_order(element_of(g, w.bindings[0]));
    r.checks.push_back(check("x has order 7", ord == 7, w.bindings[0].text + " of order " + std::to_string(ord)));
  }
}

void probability(Report& r, std::span<const CatalogEntry> catalog) {
  expect_witness(r, catalog, "A5");
  if (!r.outcome.witness) return;
  const auto& w = *r.outcome.witness;
  r.checks.push_back(check("x is the identity", !w.bindings.empty() && w.bindings[0].text == "()",
                           w.bindings.empty() ? "no binding" : w.bindings[0].text));
  const auto* sol = value(r, "sol(x)");
  const auto* rad = value(r, "radical");
  r.checks.push_back(check("Probability(Sol_G(x)) = 1", sol && sol->fraction.str() == "1",
                           sol ? sol->fraction.str() : "missing"));
  r.checks.push_back(check("Probability(Radical(G)) = 1/60", rad && rad->fraction.str() == "1/60",
                           rad ? rad->fraction.str() : "missing"));
}

void conjugacy(Report& r, std::span<const CatalogEntry> catalog) {
  expect_witness(r, catalog, "A5");
  Permutation a = Permutation::parse("(1,2,3)", 5), b = Permutation::parse("(3,4,5)", 5);
  std::vector<Permutation> gens{a, b};
  auto h = group_from_generators(5, gens);
  r.checks.push_back(check("<(1,2,3), (3,4,5)> has order 60", h.order() == 60, std::to_string(h.order())));
  r.checks.push_back(check("<(1,2,3), (3,4,5)> is A5",
                           h.order() == 60 && std::all_of(gens.begin(), gens.end(), even),
                           "order 60 inside the even permutations of degree 5"));
  r.checks.push_back(check("<(1,2,3), (3,4,5)> is not soluble", !is_soluble(h)));
  if (!r.outcome.witness || r.outcome.witness->bindings.empty()) return;
  // Co-generator for the witness element: some y with <x, y> the whole group.
  const auto& w = *r.outcome.witness;
  auto g = find_entry(catalog, w.group)->group();
  Elem x = w.bindings[0].element;
  std::string found;
  for (Elem y : g.element_indices()) {
    std::vector<Elem> pair{x, y};
    if (g.subgroup_generated(pair).order() == g.order()) {
      found = g.element(y).to_cycles();
      break;
    }
  }
  r.checks.push_back(check("the witness element has a co-generator of the whole group", !found.empty(),
                           "x = " + w.bindings[0].text + (found.empty() ? "" : ", y = " + found)));
}

void derived_fitting(Report& r, std::span<const CatalogEntry> catalog) {
  expect_witness(r, catalog, "A5");
}

void frattini(Report& r, std::span<const CatalogEntry> catalog, const dsl::EvalOptions& options) {
  auto c = dsl::parse_or_throw(r.dsl);
  dsl::Outcome total;
  total.kind = dsl::OutcomeKind::NoCounterexamples;
  std::vector<std::string> unavailable;
  std::size_t verified = 0, bindings = 0;
  bool counterexample = false;
  for (const auto& e : catalog) {
    std::span<const CatalogEntry> one(&e, 1);
    auto o = dsl::evaluate(c, one, {}, options);
    total.groups_checked += o.groups_checked;
    total.groups_skipped += o.groups_skipped;
    std::string label = e.name + " (order " + std::to_string(e.expected_order) + "): ";
    if (o.kind == dsl::OutcomeKind::CounterexampleFound) {
      counterexample = true;
      if (!total.witness) total.witness = o.witness;
      r.notes.push_back(label + "counterexample at " +
                        (o.witness->bindings.empty() ? std::string("?") : o.witness->bindings[0].text));
      continue;
    }
    if (o.kind == dsl::OutcomeKind::Unverifiable) {
      unavailable.push_back(e.name);
      r.notes.push_back(label + "not checked, " + o.reason);
      continue;
    }
    ++verified;
    // Sol_G(x^g) = Sol_G(x)^g, so whether it is a subgroup is constant on classes.
    auto g = e.group(options.limits);
    std::size_t subgroup = 0;
    for (const auto& cls : conjugacy_classes(g))
      if (solubilizer(g, cls.representative, {}, options.limits).is_subgroup) subgroup += cls.size();
    bindings += subgroup;
    r.notes.push_back(label + "holds; Sol_G(x) is a subgroup for " + std::to_string(subgroup) + " of " +
                      std::to_string(g.order()) + " elements, " + std::to_string(g.order() - subgroup) +
                      " vacuous");
  }
  if (counterexample) total.kind = dsl::OutcomeKind::CounterexampleFound;
  else if (!unavailable.empty()) total.kind = dsl::OutcomeKind::Unverifiable;
  if (!unavailable.empty()) {
    total.reason = "lattice unavailable for";
    for (const auto& n : unavailable) total.reason += " " + n;
  }
  r.outcome = total;
  r.checks.push_back(check("no counterexample on any group with a lattice", !counterexample));
  r.checks.push_back(check("at least one group fully checked", verified > 0,
                           std::to_string(verified) + " groups checked, " + std::to_string(unavailable.size()) +
                               " without a lattice"));
  r.checks.push_back(check("some bindings are non-vacuous", bindings > 0,
                           std::to_string(bindings) + " elements with Sol_G(x) a subgroup"));
}

}  // namespace

const std::vector<Case>& cases() {
  static const std::vector<Case> all = {
      {"gemini-two-primes", "if |Sol_G(x)| has exactly two prime divisors, one of them is 2",
       "forall G in catalog: forall x in G: implies(eqi(nprimes(card(sol(x))), 2), divides(2, card(sol(x))))"},
      {"gemini-probability", "P(y in Sol_G(x)) <= P(y in R(G))",
       "forall G in catalog: forall x in G: le(card(sol(x)), card(radical))"},
      {"gpt-conjugacy", "Sol_G(x) contains a whole non-trivial conjugacy class",
       "forall G in catalog: forall x in G: exists c in G: forall g in G: "
       "and(not(eqel(c, identity)), in(conj(c, g), sol(x)))"},
      {"claude-derived-fitting", "if Sol_G(x) is a subgroup, its derived subgroup lies in F(G)",
       "forall G in catalog: forall x in G: implies(issubgroup(sol(x)), subseteq(derived(sol(x)), fitting))"},
      {"frattini-containment", "if Sol_G(x) is a subgroup, Phi(Sol_G(x)) lies in Phi(G)",
       "forall G in catalog: forall x in G: implies(issubgroup(sol(x)), subseteq(frattini(sol(x)), frattini(G)))"},
  };
  return all;
}

bool Report::passed() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
}

Report run(std::string_view name, std::span<const CatalogEntry> catalog, const dsl::EvalOptions& options) {
  auto it = std::find_if(cases().begin(), cases().end(), [&](const Case& c) { return c.name == name; });
  if (it == cases().end()) {
    std::string known;
    for (const auto& c : cases()) known += " " + c.name;
    throw std::invalid_argument("unknown case `" + std::string(name) + "`; known:" + known);
  }
  Report r;
  r.name = it->name;
  r.dsl = it->dsl;
  if (r.name == "frattini-containment") {
    frattini(r, catalog, options);
    return r;
  }
  r.outcome = dsl::evaluate(dsl::parse_or_throw(r.dsl), catalog, {}, options);
  if (r.name == "gemini-two-primes") two_primes(r, catalog);
  else if (r.name == "gemini-probability") probability(r, catalog);
  else if (r.name == "gpt-conjugacy") conjugacy(r, catalog);
  else derived_fitting(r, catalog);
  return r;
}

std::string format(const Report& r) {
  std::ostringstream out;
  out << r.name << ": " << (r.passed() ? "PASS" : "FAIL") << "\n";
  out << "  encoding: " << r.dsl << "\n";
  if (r.outcome.witness) {
    const auto& w = *r.outcome.witness;
    out << "  Conjecture failed for group: " << w.group_display << "\n";
    for (const auto& b : w.bindings) out << "  " << b.var << " = " << b.text << "\n";
  } else {
    out << "  outcome: " << dsl::kind_name(r.outcome.kind) << (r.outcome.reason.empty() ? "" : " (" + r.outcome.reason + ")")
        << "\n";
  }
  for (const auto& n : r.notes) out << "  " << n << "\n";
  for (const auto& c : r.checks)
    out << "  [" << (c.ok ? "ok" : "FAILED") << "] " << c.what << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
  return out.str();
}

}  // namespace solmine::repro
