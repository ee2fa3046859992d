#include "solmine/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <mutex>
#include <sstream>

#include "solmine/group_algorithms.hpp"

namespace solmine {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Splits on `sep` outside parentheses, so "PSL(2,5), A5" has two parts.
std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string piece;
  int depth = 0;
  auto flush = [&] {
    std::string t = trim(piece);
    if (!t.empty()) out.push_back(std::move(t));
    piece.clear();
  };
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')' && depth > 0) --depth;
    if (c == sep && depth == 0) {
      flush();
      continue;
    }
    piece += c;
  }
  flush();
  return out;
}

CatalogEntry entry(std::string name, std::size_t degree, std::vector<std::string> gens,
                   std::size_t order, std::vector<std::string> tags,
                   std::vector<std::string> aliases = {}, std::string report_name = {}) {
  CatalogEntry e;
  e.name = std::move(name);
  e.degree = degree;
  e.generators = std::move(gens);
  e.expected_order = order;
  e.tags = std::move(tags);
  e.aliases = std::move(aliases);
  e.report_name = std::move(report_name);
  return e;
}

}  // namespace

bool CatalogEntry::has_tag(std::string_view tag) const {
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

bool CatalogEntry::answers_to(std::string_view label) const {
  const std::string want = lower(label);
  if (lower(name) == want) return true;
  return std::any_of(aliases.begin(), aliases.end(),
                     [&](const std::string& a) { return lower(a) == want; });
}

PermGroup CatalogEntry::group(const Limits& limits) const {
  std::call_once(slot_->once, [&] {
    std::vector<Permutation> perms;
    perms.reserve(generators.size());
    for (const auto& g : generators) perms.push_back(Permutation::parse(g, degree));
    slot_->group = PermGroup::from_generators(degree, perms, name, limits);
  });
  return slot_->group;
}

std::vector<CatalogEntry> builtin_catalog(std::size_t max_order) {
  // Permutation representations of the non-solvable groups up to order 720
  // that the built-in roster ships with.
  std::vector<CatalogEntry> all;
  all.push_back(entry("A5", 5, {"(1,2,3,4,5)", "(1,2,3)"}, 60, {"simple", "perfect"},
                      {"PSL(2,4)", "PSL(2,5)"}));
  all.push_back(entry("S5", 5, {"(1,2,3,4,5)", "(1,2)"}, 120, {"almost_simple"}));
  all.push_back(entry("SL(2,5)", 24,
                      {"(1,6,11,16,21)(2,12,22,7,17)(3,18,8,23,13)(4,24,19,14,9)",
                       "(1,20,4,5)(2,15,3,10)(6,21,24,9)(7,16,23,14)(8,11,22,19)(12,17,18,13)"},
                      120, {"perfect"}, {"2.A5"}));
  all.push_back(entry("A5xC2", 7, {"(1,2,3,4,5)", "(1,2,3)", "(6,7)"}, 120, {"direct_product"}));
  all.push_back(entry("PSL(2,7)", 8, {"(3,7,5)(4,8,6)", "(1,2,6)(3,4,8)"}, 168,
                      {"simple", "perfect"}, {"PSL(3,2)", "GL(3,2)"}, "PSL(3,2)"));
  all.push_back(entry("A5xS3", 8, {"(1,2,3,4,5)", "(1,2,3)", "(6,7,8)", "(6,7)"}, 360,
                      {"direct_product"}));
  all.push_back(entry("A6", 6, {"(1,2,3)", "(2,3,4,5,6)"}, 360, {"simple", "perfect"},
                      {"PSL(2,9)"}));
  all.push_back(entry("PSL(2,8)", 9,
                      {"(1,2)(3,4)(5,6)(7,8)", "(2,3,5,4,7,8,6)", "(1,9)(3,6)(4,7)(5,8)"}, 504,
                      {"simple", "perfect"}));
  all.push_back(entry("PSL(2,11)", 12,
                      {"(1,2,3,4,5,6,7,8,9,10,11)", "(1,12)(2,11)(3,6)(4,8)(5,9)(7,10)"}, 660,
                      {"simple", "perfect"}));
  all.push_back(entry("S6", 6, {"(1,2,3,4,5,6)", "(1,2)"}, 720, {"almost_simple"}));

  std::vector<CatalogEntry> out;
  for (auto& e : all)
    if (e.expected_order <= max_order) out.push_back(std::move(e));
  sort_catalog(out);
  return out;
}

void validate_entry(const CatalogEntry& e, const Limits& limits) {
  if (e.name.empty()) throw CatalogError("entry without a name");
  if (e.degree == 0) throw CatalogError("group " + e.name + " has no degree");
  if (e.generators.empty()) throw CatalogError("group " + e.name + " has no generators");

  PermGroup g;
  try {
    g = e.group(limits);
  } catch (const PermutationError& err) {
    throw CatalogError("group " + e.name + ": bad generator: " + err.what());
  } catch (const GroupTooLarge& err) {
    throw CatalogError("group " + e.name + ": " + err.what());
  }
  if (e.expected_order != 0 && g.order() != e.expected_order) {
    throw CatalogError("group " + e.name + ": declared order " + std::to_string(e.expected_order) +
                       " but the generators give " + std::to_string(g.order()));
  }
  if (is_soluble(g)) throw CatalogError("group " + e.name + " is soluble");
  if (e.has_tag("perfect") && !is_perfect(g))
    throw CatalogError("group " + e.name + " is tagged perfect but is not");
  if (e.has_tag("simple") && !is_simple(g, limits))
    throw CatalogError("group " + e.name + " is tagged simple but is not");
}

std::vector<CatalogEntry> parse_groups(std::string_view text, const Limits& limits) {
  std::vector<CatalogEntry> out;
  std::optional<CatalogEntry> cur;
  std::size_t cur_line = 0;

  auto finish = [&] {
    if (!cur) return;
    try {
      validate_entry(*cur, limits);
      if (cur->expected_order == 0) cur->expected_order = cur->group(limits).order();
    } catch (const CatalogError& err) {
      throw CatalogError(err.what(), cur_line);
    }
    out.push_back(std::move(*cur));
    cur.reset();
  };

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::string body = trim(line);
    if (body.empty()) continue;

    auto eq = body.find('=');
    if (eq == std::string::npos) throw CatalogError("expected `key = value`", lineno);
    std::string key = lower(trim(std::string_view(body).substr(0, eq)));
    std::string value = trim(std::string_view(body).substr(eq + 1));

    if (key == "name") {
      finish();
      if (value.empty()) throw CatalogError("empty group name", lineno);
      cur.emplace();
      cur->name = value;
      cur_line = lineno;
      continue;
    }
    if (!cur) throw CatalogError("`" + key + "` before any `name =` line", lineno);

    auto number = [&]() {
      std::size_t v = 0;
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || p != value.data() + value.size() || v == 0)
        throw CatalogError("`" + key + "` needs a positive integer, got `" + value + "`", lineno);
      return v;
    };

    if (key == "degree") {
      cur->degree = number();
    } else if (key == "order") {
      cur->expected_order = number();
    } else if (key == "gens" || key == "generators") {
      cur->generators = split(value, ';');
      if (cur->generators.empty()) throw CatalogError("no generators given", lineno);
      for (const auto& g : cur->generators) {
        try {
          Permutation::parse(g);
        } catch (const PermutationError& err) {
          throw CatalogError("bad generator `" + g + "`: " + err.what(), lineno);
        }
      }
    } else if (key == "alias" || key == "aliases") {
      cur->aliases = split(value, ',');
    } else if (key == "tags") {
      cur->tags = split(value, ',');
    } else if (key == "report_name") {
      cur->report_name = value;
    } else {
      throw CatalogError("unknown key `" + key + "`", lineno);
    }
  }
  finish();
  if (out.empty()) throw CatalogError("no groups defined");
  return out;
}

std::vector<CatalogEntry> load_groups(const std::filesystem::path& path, const Limits& limits) {
  std::ifstream f(path);
  if (!f) throw CatalogError("cannot open group file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return parse_groups(ss.str(), limits);
  } catch (const CatalogError& err) {
    throw CatalogError(path.string() + ": " + err.what());
  }
}

void sort_catalog(std::vector<CatalogEntry>& entries) {
  std::stable_sort(entries.begin(), entries.end(), [](const CatalogEntry& a, const CatalogEntry& b) {
    if (a.expected_order != b.expected_order) return a.expected_order < b.expected_order;
    return a.name < b.name;
  });
}

std::vector<CatalogEntry> simple_only(std::span<const CatalogEntry> entries) {
  std::vector<CatalogEntry> out;
  for (const auto& e : entries)
    if (e.has_tag("simple")) out.push_back(e);
  return out;
}

std::vector<CatalogEntry> up_to_order(std::span<const CatalogEntry> entries, std::size_t max_order) {
  std::vector<CatalogEntry> out;
  for (const auto& e : entries)
    if (e.expected_order <= max_order) out.push_back(e);
  return out;
}

const CatalogEntry* find_entry(std::span<const CatalogEntry> entries, std::string_view label) {
  for (const auto& e : entries)
    if (e.answers_to(label)) return &e;
  return nullptr;
}

}  // namespace solmine
