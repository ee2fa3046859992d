#include "solmine/permutation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace solmine {

namespace {

std::size_t gcd_lcm(std::size_t a, std::size_t b) { return a / std::gcd(a, b) * b; }

// Cycle lists as 0-indexed points; each inner vector is one cycle.
std::vector<std::vector<std::size_t>> scan_cycles(std::string_view text) {
  std::vector<std::vector<std::size_t>> cycles;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto fail = [&](const std::string& what) {
    throw PermutationError("cycle notation: " + what + " at offset " + std::to_string(i) +
                           " in \"" + std::string(text) + "\"");
  };
  skip_ws();
  while (i < text.size()) {
    if (text[i] != '(') fail("expected '('");
    ++i;
    std::vector<std::size_t> cycle;
    bool need_point = false;
    for (;;) {
      skip_ws();
      if (i >= text.size()) fail("unterminated cycle");
      char c = text[i];
      if (c == ')') {
        if (need_point) fail("dangling ','");
        ++i;
        break;
      }
      if (c == ',') {
        if (cycle.empty() || need_point) fail("unexpected ','");
        need_point = true;
        ++i;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(c))) fail(std::string("unexpected '") + c + "'");
      std::size_t value = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        value = value * 10 + static_cast<std::size_t>(text[i] - '0');
        if (value > 65535) fail("point out of range");
        ++i;
      }
      if (value == 0) fail("points are 1-indexed");
      if (std::find(cycle.begin(), cycle.end(), value - 1) != cycle.end()) {
        fail("point " + std::to_string(value) + " repeated within a cycle");
      }
      cycle.push_back(value - 1);
      need_point = false;
    }
    cycles.push_back(std::move(cycle));
    skip_ws();
  }
  return cycles;
}

Permutation build(const std::vector<std::vector<std::size_t>>& cycles, std::size_t degree) {
  Permutation result(degree);
  for (const auto& cycle : cycles) {
    std::vector<Point> images(degree);
    std::iota(images.begin(), images.end(), Point{0});
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      if (cycle[k] >= degree) {
        throw PermutationError("point " + std::to_string(cycle[k] + 1) + " exceeds degree " +
                               std::to_string(degree));
      }
      images[cycle[k]] = static_cast<Point>(cycle[(k + 1) % cycle.size()]);
    }
    result = result * Permutation::from_images(std::move(images));
  }
  return result;
}

}  // namespace

Permutation::Permutation(std::size_t degree) : images_(degree) {
  if (degree > 65536) throw PermutationError("degree too large");
  std::iota(images_.begin(), images_.end(), Point{0});
}

Permutation Permutation::from_images(std::vector<Point> images) {
  std::vector<bool> seen(images.size(), false);
  for (Point p : images) {
    if (p >= images.size() || seen[p]) throw PermutationError("image list is not a bijection");
    seen[p] = true;
  }
  return Permutation(std::move(images));
}

Permutation Permutation::parse(std::string_view text, std::size_t degree) {
  return build(scan_cycles(text), degree);
}

Permutation Permutation::parse(std::string_view text) {
  auto cycles = scan_cycles(text);
  std::size_t degree = 0;
  for (const auto& c : cycles)
    for (std::size_t p : c) degree = std::max(degree, p + 1);
  return build(cycles, degree);
}

void Permutation::require_same_degree(const Permutation& other) const {
  if (degree() != other.degree()) {
    throw PermutationError("degree mismatch: " + std::to_string(degree()) + " vs " +
                           std::to_string(other.degree()));
  }
}

Permutation Permutation::operator*(const Permutation& rhs) const {
  require_same_degree(rhs);
  std::vector<Point> out(degree());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = rhs.images_[images_[i]];
  return Permutation(std::move(out));
}

Permutation Permutation::inverse() const {
  std::vector<Point> out(degree());
  for (std::size_t i = 0; i < out.size(); ++i) out[images_[i]] = static_cast<Point>(i);
  return Permutation(std::move(out));
}

Permutation Permutation::conjugate_by(const Permutation& g) const {
  return g.inverse() * *this * g;
}

Permutation Permutation::pow(long long exponent) const {
  Permutation base = exponent < 0 ? inverse() : *this;
  unsigned long long e = exponent < 0 ? static_cast<unsigned long long>(-(exponent + 1)) + 1
                                      : static_cast<unsigned long long>(exponent);
  Permutation result(degree());
  while (e > 0) {
    if (e & 1U) result = result * base;
    base = base * base;
    e >>= 1U;
  }
  return result;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != i) return false;
  return true;
}

std::size_t Permutation::order() const {
  std::vector<bool> seen(degree(), false);
  std::size_t result = 1;
  for (std::size_t i = 0; i < degree(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = images_[j]) {
      seen[j] = true;
      ++len;
    }
    result = gcd_lcm(result, len);
  }
  return result;
}

std::string Permutation::to_cycles() const {
  std::string out;
  std::vector<bool> seen(degree(), false);
  for (std::size_t i = 0; i < degree(); ++i) {
    if (seen[i] || images_[i] == i) continue;
    out += '(';
    for (std::size_t j = i; !seen[j]; j = images_[j]) {
      seen[j] = true;
      if (j != i) out += ',';
      out += std::to_string(j + 1);
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

Permutation commutator(const Permutation& a, const Permutation& b) {
  return a.inverse() * b.inverse() * a * b;
}

}  // namespace solmine

std::size_t std::hash<solmine::Permutation>::operator()(
    const solmine::Permutation& p) const noexcept {
  std::size_t h = 1469598103934665603ULL;
  for (auto v : p.images()) {
    h ^= v;
    h *= 1099511628211ULL;
  }
  return h;
}
