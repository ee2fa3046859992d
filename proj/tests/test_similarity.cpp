#include "catch_amalgamated.hpp"
#include "solmine/similarity.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace solmine::sim;
using Catch::Approx;

namespace {

std::vector<std::string> fixture_corpus() {
  std::ifstream in(std::string(SOLMINE_FIXTURES) + "/conjecture_corpus.txt");
  REQUIRE(in);
  std::vector<std::string> docs;
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) docs.push_back(line);
  return docs;
}

}  // namespace

TEST_CASE("tokenizer keeps math tokens whole", "[similarity]") {
  CHECK(tokenize("Then |Sol_G(x)| divides p^2.") ==
        std::vector<std::string>{"then", "sol_g(x)", "divides", "p^2"});
  CHECK(tokenize("\\operatorname{Sol}_G(x) \\cap C_G(x,y)") ==
        std::vector<std::string>{"\\operatorname", "sol", "_g(x)", "\\cap", "c_g(x,y)"});
  CHECK(tokenize("x \xe2\x88\x88 G") == std::vector<std::string>{"x", "\xe2\x88\x88", "g"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("  ,;  ").empty());
}

TEST_CASE("cosine basics", "[similarity]") {
  auto m = cosine_matrix({"the solubilizer of x"}, {"the solubilizer of x", "prime power order"});
  CHECK(m.at(0, 0) == Approx(1.0).margin(1e-15));
  CHECK(m.at(0, 1) == 0.0);

  // Two documents: idf(a) = 1, idf(b) = idf(c) = ln(3/2) + 1.
  auto two = self_matrix({"a b", "a c"});
  double q = std::log(1.5) + 1.0;
  CHECK(two.at(0, 1) == Approx(1.0 / (1.0 + q * q)).epsilon(1e-12));
  CHECK(two.at(1, 0) == two.at(0, 1));

  auto empty = self_matrix({"", "a"});
  CHECK(empty.at(0, 0) == 0.0);
  CHECK(empty.at(0, 1) == 0.0);
  CHECK(empty.at(1, 1) == 1.0);
}

TEST_CASE("stats on a hand-computed four document corpus", "[similarity]") {
  // Counts a:2 b:1 | a:1 c:1 | b:1 c:2 | d:1. Every word but d has df 2, so
  // idf cancels within the first three documents: cos(0,1) = cos(1,2) = 2/sqrt(10),
  // cos(0,2) = 1/5, and the fourth document shares nothing.
  auto m = self_matrix({"a a b", "a c", "b c c", "d"});
  const double r = 2.0 / std::sqrt(10.0);
  CHECK(m.at(0, 1) == Approx(r).epsilon(1e-12));
  CHECK(m.at(1, 2) == Approx(r).epsilon(1e-12));
  CHECK(m.at(0, 2) == Approx(0.2).epsilon(1e-12));
  auto s = similarity_stats(m, true);
  CHECK(s.count == 12);
  CHECK(std::abs(s.max - r) < 1e-9);
  CHECK(s.min == 0.0);
  CHECK(std::abs(s.mean - (4 * r + 0.4) / 12.0) < 1e-9);
  CHECK(std::abs(s.median - 0.1) < 1e-9);

  auto with_diag = similarity_stats(m, false);
  CHECK(with_diag.count == 16);
  CHECK(with_diag.max == 1.0);
}

TEST_CASE("stats arithmetic and errors", "[similarity]") {
  SimilarityMatrix m{{"a", "b"}, {"a", "b"}, {1.0, 0.4, 0.4, 1.0}};
  auto s = similarity_stats(m, true);
  CHECK(s.max == 0.4);
  CHECK(s.min == 0.4);
  CHECK(s.mean == Approx(0.4));
  CHECK(s.median == 0.4);

  SimilarityMatrix three{{"a", "b", "c"}, {"x"}, {0.1, 0.6, 0.2}};
  auto t = similarity_stats(three, false);
  CHECK(t.median == 0.2);
  CHECK(t.mean == Approx(0.3));

  SimilarityMatrix one{{"a"}, {"a"}, {1.0}};
  CHECK_THROWS_AS(similarity_stats(one, true), std::invalid_argument);
}

TEST_CASE("self matrices are symmetric with unit diagonal", "[similarity][property]") {
  auto docs = fixture_corpus();
  REQUIRE(docs.size() >= 10);
  auto m = self_matrix(docs);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    CHECK(m.at(i, i) == 1.0);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      CHECK(m.at(i, j) == m.at(j, i));
      CHECK(m.at(i, j) >= 0.0);
      CHECK(m.at(i, j) <= 1.0);
    }
  }

  // Doubling every document doubles every count and changes no cosine.
  std::vector<std::string> doubled;
  for (const auto& d : docs) doubled.push_back(d + " " + d);
  auto m2 = self_matrix(doubled);
  for (std::size_t k = 0; k < m.values.size(); ++k) CHECK(m2.values[k] == Approx(m.values[k]).margin(1e-12));
}

TEST_CASE("literature against a corpus can reach zero", "[similarity]") {
  auto docs = fixture_corpus();
  std::vector<std::string> literature = {
      "Let G be a group. Then o(x) divides |Sol_G(x)| for all x in G.",
      "Let G be a group. Then |C_G(x)| divides |Sol_G(x)| for all x in G.",
  };
  docs.push_back("zebra quokka marmalade");  // shares no token with the literature
  auto m = cosine_matrix(literature, docs);
  auto s = similarity_stats(m, false);
  CHECK(s.min == 0.0);
  CHECK(s.max > 0.0);
  CHECK(s.max <= 1.0);
}

TEST_CASE("CSV export and re-import", "[similarity]") {
  auto dir = std::filesystem::temp_directory_path() / "solmine_sim_test";
  std::filesystem::create_directories(dir);

  SimilarityMatrix one{{"only"}, {"only"}, {1.0}};
  export_heatmap(one, dir / "one.csv");
  std::ifstream f1(dir / "one.csv");
  std::stringstream buf;
  buf << f1.rdbuf();
  CHECK(buf.str() == "\"\",only\r\n" "only,1\r\n");

  auto m = self_matrix(fixture_corpus(), {"first, with comma", "say \"hi\""});
  export_heatmap(m, dir / "m.csv", true, 17);
  std::ifstream f2(dir / "m.csv");
  auto back = read_csv(f2);
  CHECK(back.row_labels == m.row_labels);
  CHECK(back.col_labels == m.col_labels);
  REQUIRE(back.values.size() == m.values.size());
  for (std::size_t k = 0; k < m.values.size(); ++k) CHECK(std::abs(back.values[k] - m.values[k]) <= 1e-12);
  CHECK(std::filesystem::exists(dir / "m.svg"));

  // Default precision is six significant digits.
  std::ostringstream six;
  write_csv(SimilarityMatrix{{"r"}, {"c"}, {0.123456789}}, six);
  CHECK(six.str() == "\"\",c\r\nr,0.123457\r\n");
  std::filesystem::remove_all(dir);
}

TEST_CASE("a 420 by 420 export is fast", "[similarity][performance]") {
  std::mt19937 rng(5);
  std::vector<std::string> words = {"sol", "x", "g", "subgroup", "divides", "order", "prime", "radical",
                                    "nilpotent", "fitting", "frattini", "normalizer", "centralizer"};
  std::vector<std::string> docs;
  for (int i = 0; i < 420; ++i) {
    std::string d;
    for (int k = 0; k < 20; ++k) d += words[rng() % words.size()] + " ";
    docs.push_back(d);
  }
  auto dir = std::filesystem::temp_directory_path() / "solmine_sim_perf";
  std::filesystem::create_directories(dir);
  auto t0 = std::chrono::steady_clock::now();
  auto m = self_matrix(docs);
  export_heatmap(m, dir / "big.csv", true);
  auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(secs < 5.0);
  std::filesystem::remove_all(dir);
}
