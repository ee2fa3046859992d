#include <set>

#include "catch_amalgamated.hpp"
#include "oracles.hpp"
#include "solmine/catalog.hpp"
#include "solmine/group_algorithms.hpp"

using namespace solmine;

TEST_CASE("built-in roster is non-solvable and ordered", "[catalog]") {
  auto cat = builtin_catalog();
  REQUIRE(cat.size() >= 8);
  std::size_t prev = 0;
  for (const auto& e : cat) {
    CAPTURE(e.name);
    CHECK(e.expected_order >= prev);
    prev = e.expected_order;
    CHECK(e.expected_order <= 1000);
    CHECK_NOTHROW(validate_entry(e));
    CHECK(e.group().order() == e.expected_order);
    CHECK_FALSE(is_soluble(e.group()));
  }
  CHECK(cat.front().name == "A5");
  // Groups referenced by the reproduction cases.
  for (const char* n : {"A5", "S5", "SL(2,5)", "A5xC2", "PSL(2,7)", "A6", "PSL(2,8)", "PSL(2,11)"})
    CHECK(find_entry(cat, n) != nullptr);
}

TEST_CASE("simple tags agree with an independent normal-subgroup count", "[catalog]") {
  for (const auto& e : builtin_catalog(200)) {
    CAPTURE(e.name);
    auto g = e.group();
    // Normal subgroups are unions of conjugacy classes; count the classes'
    // normal closures that are proper and non-trivial.
    auto all = oracle::closure(g.generators(), g.degree());
    bool proper_normal = false;
    for (const auto& x : all) {
      if (x.is_identity()) continue;
      std::vector<Permutation> conj;
      for (const auto& c : all) conj.push_back(x.conjugate_by(c));
      if (oracle::closure(conj, g.degree()).size() < all.size()) {
        proper_normal = true;
        break;
      }
    }
    CHECK(e.has_tag("simple") == !proper_normal);
  }
}

TEST_CASE("aliases and display names", "[catalog]") {
  auto cat = builtin_catalog();
  const auto* psl = find_entry(cat, "psl(3,2)");
  REQUIRE(psl != nullptr);
  CHECK(psl->name == "PSL(2,7)");
  CHECK(psl->display_name() == "PSL(3,2)");
  // The order-7 element used by the two-primes reproduction lies in this copy.
  CHECK(psl->group().contains(Permutation::parse("(2,8,4,3,6,7,5)", 8)));
  CHECK(find_entry(cat, "A5")->display_name() == "A5");
  CHECK(find_entry(cat, "nope") == nullptr);
}

TEST_CASE("simple-only and order filters", "[catalog]") {
  auto cat = builtin_catalog();
  auto simple = simple_only(cat);
  std::set<std::string> names;
  for (const auto& e : simple) names.insert(e.name);
  CHECK(names == std::set<std::string>{"A5", "PSL(2,7)", "A6", "PSL(2,8)", "PSL(2,11)"});
  CHECK(up_to_order(cat, 120).size() == 4);
  CHECK(builtin_catalog(60).size() == 1);
}

TEST_CASE("group files", "[catalog]") {
  auto groups = parse_groups(R"(
# two small groups
name = S5
degree = 5
gens = (1,2,3,4,5) ; (1,2)
order = 120

name = Alt5     # comment after a value
alias = A5, PSL(2,5)
degree = 5
gens = (1,2,3,4,5);(1,2,3)
tags = simple, perfect
)");
  REQUIRE(groups.size() == 2);
  CHECK(groups[0].expected_order == 120);
  CHECK(groups[1].expected_order == 60);  // filled in from the generators
  CHECK(groups[1].answers_to("psl(2,5)"));
}

TEST_CASE("group file errors carry reasons and lines", "[catalog]") {
  auto line_of = [](const std::string& text) {
    try {
      parse_groups(text);
    } catch (const CatalogError& e) {
      return e.line();
    }
    return std::size_t{999};
  };
  CHECK(line_of("name = S4\ndegree = 4\ngens = (1,2,3,4);(1,2)\n") == 1);
  CHECK_THROWS_WITH(parse_groups("name = S4\ndegree = 4\ngens = (1,2,3,4);(1,2)\n"),
                    Catch::Matchers::ContainsSubstring("soluble"));
  CHECK_THROWS_WITH(parse_groups("name = A5\ndegree = 5\ngens = (1,2,3,4,5);(1,2,3)\norder = 61\n"),
                    Catch::Matchers::ContainsSubstring("declared order 61"));
  CHECK(line_of("name = X\ndegree = five\n") == 2);
  CHECK(line_of("name = X\ndegree = 5\ngens = (1,2,x)\n") == 3);
  CHECK(line_of("degree = 5\n") == 1);
  CHECK(line_of("name = X\nfoo = 1\n") == 2);
  CHECK(line_of("name = X\njust words\n") == 2);
  CHECK_THROWS_WITH(parse_groups("name = A5\ndegree = 5\ngens = (1,2,3,4,5);(1,2)\ntags = simple\n"),
                    Catch::Matchers::ContainsSubstring("tagged simple"));
  CHECK_THROWS_AS(parse_groups("# nothing\n"), CatalogError);
  CHECK_THROWS_AS(load_groups("/nonexistent/groups.txt"), CatalogError);
}

TEST_CASE("entries share the materialized group", "[catalog]") {
  auto cat = builtin_catalog(60);
  auto copy = cat.front();
  CHECK(copy.group().shares_table_with(cat.front().group()));
}
