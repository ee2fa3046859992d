#include <random>

#include "catch_amalgamated.hpp"
#include "solmine/permutation.hpp"

using solmine::Permutation;
using solmine::PermutationError;

namespace {

Permutation random_perm(std::mt19937& rng, std::size_t n) {
  std::vector<solmine::Point> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<solmine::Point>(i);
  std::shuffle(img.begin(), img.end(), rng);
  return Permutation::from_images(img);
}

}  // namespace

TEST_CASE("cycle notation parses and renders", "[permutation]") {
  auto p = Permutation::parse("(1,2,3)(4,5)", 6);
  CHECK(p.degree() == 6);
  CHECK(p[0] == 1);
  CHECK(p[2] == 0);
  CHECK(p[5] == 5);
  CHECK(p.to_cycles() == "(1,2,3)(4,5)");
  CHECK(p.order() == 6);

  CHECK(Permutation::parse(" ( 1 2 3 4 5 ) ", 5).to_cycles() == "(1,2,3,4,5)");
  CHECK(Permutation::parse("()", 4).to_cycles() == "()");
  CHECK(Permutation::parse("", 4).is_identity());
  CHECK(Permutation::parse("(2,8,4,3,6,7,5)").degree() == 8);
}

TEST_CASE("non-disjoint cycles multiply left to right", "[permutation]") {
  auto p = Permutation::parse("(1,2)(2,3)", 3);
  auto q = Permutation::parse("(1,2)", 3) * Permutation::parse("(2,3)", 3);
  CHECK(p == q);
  // Right action: 1 -> 2 under (1,2), then 2 -> 3 under (2,3).
  CHECK(p[0] == 2);
}

TEST_CASE("malformed cycle text is rejected", "[permutation]") {
  CHECK_THROWS_AS(Permutation::parse("(1,2", 3), PermutationError);
  CHECK_THROWS_AS(Permutation::parse("(1,1)", 3), PermutationError);
  CHECK_THROWS_AS(Permutation::parse("(0,1)", 3), PermutationError);
  CHECK_THROWS_AS(Permutation::parse("(1,4)", 3), PermutationError);
  CHECK_THROWS_AS(Permutation::parse("(1,,2)", 3), PermutationError);
  CHECK_THROWS_AS(Permutation::parse("1,2", 3), PermutationError);
  CHECK_THROWS_AS(Permutation::parse("(a)", 3), PermutationError);
  CHECK_THROWS_AS(Permutation::from_images({0, 0, 1}), PermutationError);
}

TEST_CASE("cross-degree products are errors", "[permutation]") {
  auto a = Permutation::parse("(1,2)", 3);
  auto b = Permutation::parse("(1,2)", 4);
  CHECK_THROWS_AS(a * b, PermutationError);
}

TEST_CASE("conjugation and commutator follow the right action", "[permutation]") {
  auto x = Permutation::parse("(1,2,3)", 5);
  auto g = Permutation::parse("(3,4,5)", 5);
  // x^g relabels the points of x by g.
  CHECK(x.conjugate_by(g).to_cycles() == "(1,2,4)");
  CHECK(solmine::commutator(x, g) == x.inverse() * g.inverse() * x * g);
}

TEST_CASE("group axioms and render/parse identity on random permutations", "[permutation][property]") {
  std::mt19937 rng(20240611);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t n = 1 + rng() % 12;
    auto a = random_perm(rng, n), b = random_perm(rng, n), c = random_perm(rng, n);
    CHECK((a * b) * c == a * (b * c));
    CHECK((a * a.inverse()).is_identity());
    CHECK((a.inverse() * a).is_identity());
    CHECK(Permutation::parse(a.to_cycles(), n) == a);
    CHECK(a.pow(static_cast<long long>(a.order())).is_identity());
    CHECK(a.pow(-1) == a.inverse());
  }
}
