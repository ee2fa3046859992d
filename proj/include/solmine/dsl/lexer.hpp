#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "solmine/dsl/diagnostic.hpp"

namespace solmine::dsl {

enum class Tok { Ident, Int, LParen, RParen, Comma, Colon, Equals, Stray, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos = 0;
  std::int64_t value = 0;
};

std::string describe(const Token& t);

// Whitespace and `#` line comments are skipped. Non-ASCII bytes, control
// characters and integer overflow throw DslError(E_LEX); any other stray
// ASCII punctuation becomes a Stray token for the parser to reject.
std::vector<Token> lex(std::string_view source);

}  // namespace solmine::dsl
