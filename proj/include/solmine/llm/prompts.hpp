#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace solmine::llm {

// Facts are paragraphs separated by blank lines; '#' lines are comments.
std::vector<std::string> parse_facts(std::string_view text);
std::vector<std::string> builtin_facts();
std::string_view builtin_facts_version();

// A compact description of the conjecture language, generated from the
// operator table so it cannot drift from the parser.
std::string dsl_reference();

struct PromptState {
  std::string persona;
  std::vector<std::string> facts;
  std::vector<std::string> falsified;  // append-only within a run
  std::string conjecture_request;
  std::string encoding_request;  // `{conjecture}` is replaced
  std::string repair_request;    // `{dsl}` and `{error}` are replaced

  static PromptState defaults();

  // Persona, facts, the falsified list verbatim, and the language reference.
  std::string system_prompt() const;
  std::string encoding_message(const std::string& conjecture) const;
  std::string repair_message(const std::string& dsl, const std::string& error) const;
};

// The DSL text inside a reply: the first fenced block if there is one,
// otherwise the whole reply, trimmed.
std::string extract_dsl(std::string_view reply);

}  // namespace solmine::llm
