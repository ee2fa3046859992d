#include "solmine/llm/prompts.hpp"

#include "solmine/dsl/ast.hpp"
#include "solmine/facts_asset.hpp"

namespace solmine::llm {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

void replace_all(std::string& s, std::string_view from, const std::string& to) {
  for (auto at = s.find(from); at != std::string::npos; at = s.find(from, at + to.size()))
    s.replace(at, from.size(), to);
}

}  // namespace

std::vector<std::string> parse_facts(std::string_view text) {
  std::vector<std::string> facts;
  std::string cur;
  auto flush = [&] {
    if (auto t = trim(cur); !t.empty()) facts.push_back(t);
    cur.clear();
  };
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string line = trim(text.substr(start, nl - start));
    start = nl + 1;
    if (line.empty()) {
      flush();
    } else if (line[0] != '#') {
      cur += (cur.empty() ? "" : "\n") + line;
    }
  }
  flush();
  return facts;
}

std::vector<std::string> builtin_facts() { return parse_facts(asset::kFactsV1); }
std::string_view builtin_facts_version() { return asset::kFactsVersion; }

std::string dsl_reference() {
  using namespace solmine::dsl;
  std::string out =
      "A conjecture is a quantifier prefix followed by one proposition:\n"
      "  forall G in catalog: forall x in G: <proposition>\n"
      "The first quantifier ranges over groups: `catalog` or `nonsolvable(maxorder=N)`.\n"
      "Later quantifiers are `forall` or `exists`, over the elements of a set term\n"
      "(`forall y in sol(x)`) or over subgroups (`forall H in subgroups(G)`).\n"
      "`G` names the current group. Everything else is written in call form;\n"
      "`and`, `or`, `implies` and `not` may also be written infix.\n"
      "Operators (argument types -> result type):\n";
  for (const auto& o : op_table()) {
    if (o.keyword.empty()) continue;
    out += "  " + std::string(o.keyword);
    if (!o.args.empty()) {
      out += "(";
      for (std::size_t i = 0; i < o.args.size(); ++i) out += (i ? ", " : "") + std::string(type_name(o.args[i]));
      out += ")";
    }
    out += " -> " + std::string(type_name(o.result)) + "\n";
  }
  out +=
      "Sets are subsets of G; derived, frattini and closure act on the subgroup a set generates.\n"
      "Integers are written in decimal. Examples:\n"
      "  forall G in catalog: forall x in G: divides(order(x), card(sol(x)))\n"
      "  forall G in catalog: forall x in G: implies(issubgroup(sol(x)), isnilpotent(sol(x)))\n"
      "  forall G in catalog: forall x in G: exists y in G: not(in(y, sol(x)))\n";
  return out;
}

PromptState PromptState::defaults() {
  PromptState s;
  s.persona =
      "You are a research mathematician working in finite group theory, with a strong "
      "interest in how solubility is distributed inside non-soluble groups. You are "
      "studying the solubilizer of an element. You answer precisely and briefly.";
  s.facts = builtin_facts();
  s.conjecture_request =
      "Propose one new conjecture about solubilizers in finite non-soluble groups. It must not "
      "repeat a known result or a conjecture already shown to be false. Reply with the "
      "statement of the conjecture only.";
  s.encoding_request =
      "Encode the following conjecture in the conjecture language described above so that it "
      "can be checked on a catalog of non-soluble groups. Reply with the encoding only.\n\n"
      "Conjecture: {conjecture}";
  s.repair_request =
      "The encoding\n\n{dsl}\n\nwas rejected with this error:\n\n{error}\n\n"
      "Reply with a corrected encoding only.";
  return s;
}

std::string PromptState::system_prompt() const {
  std::string out = persona + "\n\nKnown results:\n";
  for (const auto& f : facts) out += "\n" + f + "\n";
  out += "\nConjectures already shown to be false:\n";
  if (falsified.empty()) out += "(none yet)\n";
  for (const auto& f : falsified) out += f + "\n";
  out += "\nConjecture language reference:\n" + dsl_reference();
  return out;
}

std::string PromptState::encoding_message(const std::string& conjecture) const {
  std::string s = encoding_request;
  replace_all(s, "{conjecture}", conjecture);
  return s;
}

std::string PromptState::repair_message(const std::string& dsl, const std::string& error) const {
  std::string s = repair_request;
  // `{error}` first so a DSL text containing the marker is left alone.
  replace_all(s, "{error}", error);
  replace_all(s, "{dsl}", dsl);
  return s;
}

std::string extract_dsl(std::string_view reply) {
  auto open = reply.find("```");
  if (open != std::string_view::npos) {
    auto body = reply.find('\n', open);
    if (body != std::string_view::npos) {
      auto close = reply.find("```", body);
      if (close != std::string_view::npos) return trim(reply.substr(body + 1, close - body - 1));
    }
  }
  return trim(reply);
}

}  // namespace solmine::llm
