#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace solmine {

using Point = std::uint16_t;

// Thrown for malformed cycle text, non-bijective image lists and
// operations that mix permutations of different degree.
class PermutationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A bijection on {0, ..., degree-1}. Externally points are 1-indexed and
// written in cycle notation, "(1,2,3)(4,5)"; the identity renders as "()".
//
// Products follow the right-action convention: i^(p*q) = (i^p)^q, so
// conjugation x^g is g^-1 * x * g and comm(a, b) = a^-1 * b^-1 * a * b.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::size_t degree);

  static Permutation from_images(std::vector<Point> images);

  // Parses cycle notation. Separators inside a cycle may be commas or
  // whitespace. Cycles need not be disjoint: "(1,2)(2,3)" is their product.
  // Points above `degree` are rejected.
  static Permutation parse(std::string_view text, std::size_t degree);

  // As above, with the degree taken as the largest point mentioned.
  static Permutation parse(std::string_view text);

  std::size_t degree() const { return images_.size(); }
  std::span<const Point> images() const { return images_; }
  Point operator[](std::size_t point) const { return images_[point]; }

  Permutation operator*(const Permutation& rhs) const;
  Permutation inverse() const;
  Permutation conjugate_by(const Permutation& g) const;  // g^-1 * this * g
  Permutation pow(long long exponent) const;

  bool is_identity() const;
  std::size_t order() const;

  std::string to_cycles() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend std::strong_ordering operator<=>(const Permutation& a,
                                          const Permutation& b) {
    return a.images_ <=> b.images_;
  }

 private:
  explicit Permutation(std::vector<Point> images) : images_(std::move(images)) {}

  void require_same_degree(const Permutation& other) const;

  std::vector<Point> images_;
};

Permutation commutator(const Permutation& a, const Permutation& b);

}  // namespace solmine

template <>
struct std::hash<solmine::Permutation> {
  std::size_t operator()(const solmine::Permutation& p) const noexcept;
};
