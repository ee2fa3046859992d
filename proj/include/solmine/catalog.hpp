#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "solmine/perm_group.hpp"

namespace solmine {

class CatalogError : public std::runtime_error {
 public:
  CatalogError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// A named test group with explicit permutation generators.
struct CatalogEntry {
  std::string name;
  std::vector<std::string> aliases;
  std::string report_name;  // label used when printing witnesses; defaults to name
  std::size_t degree = 0;
  std::vector<std::string> generators;  // cycle notation
  std::size_t expected_order = 0;
  std::vector<std::string> tags;

  bool has_tag(std::string_view tag) const;
  bool answers_to(std::string_view label) const;  // name or alias, case-insensitive
  const std::string& display_name() const { return report_name.empty() ? name : report_name; }

  // Materialized once and shared between copies of the entry.
  PermGroup group(const Limits& limits = {}) const;

 private:
  struct Slot {
    std::once_flag once;
    PermGroup group;
  };
  std::shared_ptr<Slot> slot_ = std::make_shared<Slot>();
};

// Non-solvable groups of order <= max_order, ascending by order then name.
std::vector<CatalogEntry> builtin_catalog(std::size_t max_order = 1000);

// Group file: `name = `, `degree = `, `order = `, `gens = (..) ; (..)`,
// optional `alias = a, b` and `tags = t1, t2`; `#` starts a comment and each
// `name` line opens a new entry. Every entry is validated.
std::vector<CatalogEntry> parse_groups(std::string_view text, const Limits& limits = {});
std::vector<CatalogEntry> load_groups(const std::filesystem::path& path, const Limits& limits = {});

// Recomputes the order, rejects soluble groups and checks the `simple` and
// `perfect` tags. Throws CatalogError with the reason.
void validate_entry(const CatalogEntry& entry, const Limits& limits = {});

void sort_catalog(std::vector<CatalogEntry>& entries);
std::vector<CatalogEntry> simple_only(std::span<const CatalogEntry> entries);
std::vector<CatalogEntry> up_to_order(std::span<const CatalogEntry> entries, std::size_t max_order);
const CatalogEntry* find_entry(std::span<const CatalogEntry> entries, std::string_view label);

}  // namespace solmine
