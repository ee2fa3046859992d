#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace solmine {

// Index of an element inside a materialized group table.
using Elem = std::uint32_t;

// Fixed-universe bitset over the element indices of one group table.
class ElementSet {
 public:
  ElementSet() = default;
  explicit ElementSet(std::size_t universe)
      : universe_(universe), words_((universe + 63) / 64, 0) {}

  static ElementSet full(std::size_t universe) {
    ElementSet s(universe);
    for (std::size_t i = 0; i < universe; ++i) s.insert(static_cast<Elem>(i));
    return s;
  }

  std::size_t universe() const { return universe_; }

  bool contains(Elem e) const { return (words_[e >> 6] >> (e & 63)) & 1U; }
  void insert(Elem e) { words_[e >> 6] |= std::uint64_t{1} << (e & 63); }
  void erase(Elem e) { words_[e >> 6] &= ~(std::uint64_t{1} << (e & 63)); }

  // Returns true when e was not yet present.
  bool add(Elem e) {
    auto& w = words_[e >> 6];
    std::uint64_t bit = std::uint64_t{1} << (e & 63);
    if (w & bit) return false;
    w |= bit;
    return true;
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  bool is_subset_of(const ElementSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~other.words_[i]) return false;
    return true;
  }

  ElementSet& operator&=(const ElementSet& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    return *this;
  }
  ElementSet& operator|=(const ElementSet& other) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    return *this;
  }
  friend ElementSet operator&(ElementSet a, const ElementSet& b) { return a &= b; }
  friend ElementSet operator|(ElementSet a, const ElementSet& b) { return a |= b; }

  friend bool operator==(const ElementSet&, const ElementSet&) = default;

  // Deterministic total order: the set holding the lowest differing index
  // sorts first.
  friend bool operator<(const ElementSet& a, const ElementSet& b) {
    for (std::size_t i = 0; i < a.words_.size(); ++i) {
      if (a.words_[i] == b.words_[i]) continue;
      std::uint64_t diff = a.words_[i] ^ b.words_[i];
      std::uint64_t low = diff & (~diff + 1);
      return (a.words_[i] & low) != 0;
    }
    return false;
  }

  std::vector<Elem> members() const {
    std::vector<Elem> out;
    out.reserve(size());
    for_each([&](Elem e) { out.push_back(e); });
    return out;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        int bit = std::countr_zero(w);
        f(static_cast<Elem>(i * 64 + static_cast<std::size_t>(bit)));
        w &= w - 1;
      }
    }
  }

  std::size_t hash() const {
    std::size_t h = 0x9e3779b97f4a7c15ULL ^ universe_;
    for (auto w : words_) {
      h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

struct ElementSetHash {
  std::size_t operator()(const ElementSet& s) const { return s.hash(); }
};

}  // namespace solmine
