#include "catch_amalgamated.hpp"
#include "naive_eval.hpp"
#include "oracles.hpp"
#include "random_ast.hpp"
#include "solmine/dsl/evaluator.hpp"
#include "solmine/dsl/parser.hpp"
#include "solmine/group_algorithms.hpp"

using namespace solmine;
using namespace solmine::dsl;

namespace {

const std::vector<CatalogEntry>& catalog() {
  static const auto cat = builtin_catalog();
  return cat;
}

std::vector<CatalogEntry> upto(std::size_t n) { return up_to_order(catalog(), n); }

Outcome run(const std::string& text, std::span<const CatalogEntry> cat, EvalOptions opt = {},
            EvalBudget budget = {}) {
  return evaluate(parse_or_throw(text), cat, budget, opt);
}

}  // namespace

TEST_CASE("known theorems hold on the catalog", "[dsl][evaluator]") {
  for (const char* text : {
           "forall G in catalog: forall x in G: divides(order(x), card(sol(x)))",
           "forall G in catalog: forall x in G: divides(card(centralizer(x)), card(sol(x)))",
           "forall G in catalog: forall x in G: subseteq(centralizer(x), sol(x))",
           "forall G in catalog: forall x in G: forall y in sol(x): in(inv(y), sol(x))",
       }) {
    CAPTURE(text);
    auto o = run(text, catalog(), {.conjugacy_reduction = true});
    CHECK(o.kind == OutcomeKind::NoCounterexamples);
    CHECK(o.groups_checked == catalog().size());
    CHECK_FALSE(o.witness);
  }
}

TEST_CASE("two-primes conjecture fails on PSL(2,7)", "[dsl][evaluator]") {
  auto c = parse_or_throw(
      "forall G in catalog: forall x in G: implies(eqi(nprimes(card(sol(x))), 2), divides(2, card(sol(x))))");
  auto o = evaluate(c, catalog());
  REQUIRE(o.kind == OutcomeKind::CounterexampleFound);
  const Witness& w = *o.witness;
  CHECK(w.group == "PSL(2,7)");
  CHECK(w.group_display == "PSL(3,2)");
  REQUIRE(w.bindings.size() == 1);
  auto x = Permutation::parse(w.bindings[0].text, 8);
  CHECK(x.order() == 7);
  const TermValue* card = w.value_of("card(sol(x))");
  REQUIRE(card);
  CHECK(card->integer == 21);
  CHECK(card->primes == std::vector<std::size_t>{3, 7});
  CHECK(w.verified);
  CHECK(witness_refutes(c, *find_entry(catalog(), "PSL(2,7)"), w));
  CHECK(o.groups_checked == 5);  // A5, S5, SL(2,5), A5xC2, then PSL(2,7)
}

TEST_CASE("eq(sol(x), G) fails first on A5", "[dsl][evaluator]") {
  auto o = run("forall G in catalog: forall x in G: eq(sol(x), G)", catalog());
  REQUIRE(o.kind == OutcomeKind::CounterexampleFound);
  CHECK(o.witness->group == "A5");
  auto a5 = find_entry(catalog(), "A5")->group();
  auto x = Permutation::parse(o.witness->bindings[0].text, 5);
  CHECK_FALSE(x.is_identity());
  auto all = a5.elements();
  CHECK(oracle::solubilizer({all.begin(), all.end()}, x).size() < 60);
  // The first non-identity element in the deterministic element order.
  CHECK(x == a5.element(1));
}

TEST_CASE("records from the mining runs", "[dsl][evaluator]") {
  auto prob = run("forall G in catalog: forall x in G: le(card(sol(x)), card(radical))", catalog());
  REQUIRE(prob.kind == OutcomeKind::CounterexampleFound);
  CHECK(prob.witness->group == "A5");
  CHECK(prob.witness->bindings[0].text == "()");
  CHECK(prob.witness->value_of("sol(x)")->fraction.str() == "1");
  CHECK(prob.witness->value_of("radical")->fraction.str() == "1/60");

  auto conj = run(
      "forall G in catalog: forall x in G: exists c in G: forall g in G: "
      "and(not(eqel(c, identity)), in(conj(c, g), sol(x)))",
      catalog());
  REQUIRE(conj.kind == OutcomeKind::CounterexampleFound);
  CHECK(conj.witness->group == "A5");
  CHECK(conj.witness->bindings.size() == 1);  // the existential stops the chain
  CHECK(conj.witness->verified);

  auto fit = run(
      "forall G in catalog: forall x in G: implies(issubgroup(sol(x)), subseteq(derived(sol(x)), fitting))",
      catalog());
  REQUIRE(fit.kind == OutcomeKind::CounterexampleFound);
  CHECK(fit.witness->group == "A5");
  const auto* d = fit.witness->value_of("derived(sol(x))");
  REQUIRE(d);
  CHECK(d->cardinality > 1);
}

TEST_CASE("determinism, parallel evaluation and witnesses", "[dsl][evaluator]") {
  const std::string text = "forall G in catalog: forall x in G: forall y in G: isabelian(closure(intersect(sol(x), sol(y))))";
  auto a = run(text, upto(168));
  auto b = run(text, upto(168));
  auto p = run(text, upto(168), {.parallel = true});
  REQUIRE(a.kind == OutcomeKind::CounterexampleFound);
  for (const auto* o : {&b, &p}) {
    CHECK(o->kind == a.kind);
    CHECK(o->witness->group == a.witness->group);
    REQUIRE(o->witness->bindings.size() == a.witness->bindings.size());
    for (std::size_t i = 0; i < a.witness->bindings.size(); ++i)
      CHECK(o->witness->bindings[i].text == a.witness->bindings[i].text);
  }
  CHECK(a.witness->verified);
}

TEST_CASE("all-witnesses mode", "[dsl][evaluator]") {
  auto o = run("forall G in catalog: forall x in G: eq(sol(x), G)", upto(60),
               {.all_witnesses = true, .max_witnesses = 1000});
  CHECK(o.kind == OutcomeKind::CounterexampleFound);
  CHECK(o.all_witnesses.size() == 59);
  for (const auto& w : o.all_witnesses) CHECK(w.verified);
}

TEST_CASE("conjugacy reduction agrees in kind", "[dsl][evaluator]") {
  for (const char* text : {
           "forall G in catalog: forall x in G: divides(order(x), card(sol(x)))",
           "forall G in catalog: forall x in G: eq(sol(x), G)",
           "forall G in catalog: forall x in G: implies(eqi(nprimes(card(sol(x))), 2), divides(2, card(sol(x))))",
           "forall G in catalog: forall x in G: le(card(sol(x)), card(radical))",
           "forall G in catalog: forall x in G: implies(issubgroup(sol(x)), subseteq(derived(sol(x)), fitting))",
           "forall G in catalog: exists x in G: not(issubgroup(sol(x)))",
       }) {
    CAPTURE(text);
    auto full = run(text, upto(360));
    auto reduced = run(text, upto(360), {.conjugacy_reduction = true});
    CHECK(full.kind == reduced.kind);
    if (full.witness) CHECK(full.witness->group == reduced.witness->group);
  }
}

TEST_CASE("budgets make outcomes unverifiable, never crash", "[dsl][evaluator]") {
  const std::string text = "forall G in catalog: forall x in G: divides(order(x), card(sol(x)))";
  auto skipped = run(text, catalog(), {}, {.max_group_order = 120});
  CHECK(skipped.kind == OutcomeKind::NoCounterexamples);
  CHECK(skipped.groups_checked == 4);
  CHECK(skipped.groups_skipped == catalog().size() - 4);

  auto checks = run(text, catalog(), {}, {.max_solvability_checks = 3});
  CHECK(checks.kind == OutcomeKind::Unverifiable);
  CHECK(checks.error_code == "E_BUDGET");
  CHECK_THAT(checks.reason, Catch::Matchers::StartsWith("budget"));

  auto timeout = run(text, catalog(), {}, {.wall_timeout = std::chrono::milliseconds(0)});
  CHECK(timeout.kind == OutcomeKind::Unverifiable);
  CHECK(timeout.error_code == "E_BUDGET");

  // A counterexample on an early group still wins over a later budget failure.
  auto early = run("forall G in catalog: forall x in G: eq(sol(x), G)", catalog(), {},
                   {.max_solvability_checks = 100000});
  CHECK(early.kind == OutcomeKind::CounterexampleFound);
}

TEST_CASE("lattice-gated constructs", "[dsl][evaluator]") {
  const std::string abel = "forall G in catalog: forall H in subgroups(G): implies(isabelian(H), isnilpotent(H))";
  CHECK(run(abel, upto(168)).kind == OutcomeKind::NoCounterexamples);
  auto gated = run(abel, catalog());
  CHECK(gated.kind == OutcomeKind::Unverifiable);
  CHECK_THAT(gated.reason, Catch::Matchers::ContainsSubstring("lattice"));

  auto nonab = run("forall G in catalog: forall H in subgroups(G): isabelian(H)", upto(60));
  REQUIRE(nonab.kind == OutcomeKind::CounterexampleFound);
  CHECK(nonab.witness->bindings[0].type == Type::set);
  CHECK(nonab.witness->verified);

  Limits tight;
  tight.lattice_cap = 30;
  auto phi = run("forall G in catalog: subseteq(frattini(G), fitting)", upto(60), {.limits = tight});
  CHECK(phi.kind == OutcomeKind::Unverifiable);
  CHECK(run("forall G in catalog: subseteq(frattini(G), fitting)", upto(360)).kind ==
        OutcomeKind::NoCounterexamples);
}

TEST_CASE("nonsolvable domain uses catalog groups up to the bound", "[dsl][evaluator]") {
  auto o = run("forall G in nonsolvable(maxorder=120): issubgroup(G)", catalog());
  CHECK(o.kind == OutcomeKind::NoCounterexamples);
  CHECK(o.groups_checked == 4);
  CHECK(o.groups_skipped == 0);
}

TEST_CASE("total semantics on non-subgroups", "[dsl][evaluator]") {
  // derived and frattini of an arbitrary subset act on what it generates;
  // the normalizer is the set-wise stabilizer under conjugation.
  auto a5 = upto(60);
  CHECK(run("forall G in catalog: forall x in G: subseteq(derived(sol(x)), G)", a5).kind ==
        OutcomeKind::NoCounterexamples);
  CHECK(run("forall G in catalog: forall x in G: issubgroup(normalizer(sol(x)))", a5).kind ==
        OutcomeKind::NoCounterexamples);
  CHECK(run("forall G in catalog: forall x in G: subseteq(centralizer(x), normalizer(sol(x)))", a5).kind ==
        OutcomeKind::NoCounterexamples);
  CHECK(run("forall G in catalog: forall x in G: issubgroup(frattini(sol(x)))", a5).kind ==
        OutcomeKind::NoCounterexamples);
}

TEST_CASE("random conjectures agree with the naive oracle", "[dsl][evaluator][property]") {
  auto mini = std::vector<CatalogEntry>{*find_entry(catalog(), "A5"), *find_entry(catalog(), "S5"),
                                        *find_entry(catalog(), "PSL(2,7)")};
  std::vector<naive::World> worlds;
  for (const auto& e : mini) {
    std::vector<Permutation> gens;
    for (const auto& g : e.generators) gens.push_back(Permutation::parse(g, e.degree));
    worlds.emplace_back(e.name, gens, e.degree);
  }
  randast::Options ropt;
  ropt.max_depth = 3;
  ropt.max_quantifiers = 2;
  ropt.allow_subgroup_ranges = false;
  ropt.allow_lattice_ops = false;
  randast::Generator gen(424242, ropt);

  std::map<OutcomeKind, int> kinds;
  for (int i = 0; i < 50; ++i) {
    Conjecture c = gen.conjecture();
    CAPTURE(render(c));
    auto o = evaluate(c, mini);
    ++kinds[o.kind];

    std::optional<std::size_t> failing_group;
    std::optional<std::size_t> failing_elem;
    for (std::size_t k = 0; k < mini.size(); ++k) {
      if (c.domain == Domain::nonsolvable && mini[k].expected_order > c.max_order) continue;
      auto f = worlds[k].first_failure(c);
      if (f) {
        failing_group = k;
        failing_elem = f;
        break;
      }
    }
    REQUIRE(o.kind != OutcomeKind::Unverifiable);
    CHECK((o.kind == OutcomeKind::CounterexampleFound) == failing_group.has_value());
    if (o.witness && failing_group) {
      CHECK(o.witness->group == mini[*failing_group].name);
      CHECK(o.witness->verified);
      if (!o.witness->bindings.empty() && *failing_elem != std::size_t(-1)) {
        const auto& w = worlds[*failing_group];
        CHECK(o.witness->bindings[0].text == w.element(*failing_elem).to_cycles());
      }
    }
  }
  CHECK(kinds[OutcomeKind::CounterexampleFound] > 0);
  CHECK(kinds[OutcomeKind::NoCounterexamples] > 0);
}
