#include "solmine/dsl/lexer.hpp"

#include <cctype>
#include <limits>

namespace solmine::dsl {

std::string_view code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::E_LEX: return "E_LEX";
    case ErrorCode::E_SYNTAX: return "E_SYNTAX";
    case ErrorCode::E_TYPE: return "E_TYPE";
    case ErrorCode::E_BUDGET: return "E_BUDGET";
    case ErrorCode::E_UNSUPPORTED_EMIT: return "E_UNSUPPORTED_EMIT";
  }
  return "E_?";
}

std::string Diagnostic::describe() const {
  std::string out(code_name(code));
  out += " at " + std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  if (!expected.empty()) {
    out += expected.size() == 1 ? " (expected " : " (expected one of: ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) out += ", ";
      out += expected[i];
    }
    out += ")";
  }
  return out;
}

Diagnostic at(ErrorCode code, std::string_view source, std::size_t pos, std::string message,
              std::vector<std::string> expected) {
  Diagnostic d;
  d.code = code;
  d.pos = pos;
  d.message = std::move(message);
  d.expected = std::move(expected);
  for (std::size_t i = 0; i < pos && i < source.size(); ++i) {
    if (source[i] == '\n') {
      ++d.line;
      d.column = 1;
    } else {
      ++d.column;
    }
  }
  return d;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Int: return "integer " + t.text;
    default: return "`" + t.text + "`";
  }
}

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto fail = [&](std::size_t pos, std::string msg) {
    throw DslError(at(ErrorCode::E_LEX, src, pos, std::move(msg)));
  };
  while (i < src.size()) {
    const auto c = static_cast<unsigned char>(src[i]);
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      ++i;
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (c >= 0x80) {
      const char* hex = "0123456789abcdef";
      fail(i, std::string("non-ASCII character (byte 0x") + hex[c >> 4] + hex[c & 15] + ")");
    }
    if (c < 0x20 || c == 0x7f) fail(i, "control character");

    Token t;
    t.pos = i;
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      i = j;
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      std::int64_t v = 0;
      constexpr auto max = std::numeric_limits<std::int64_t>::max();
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
        int d = src[j] - '0';
        if (v > (max - d) / 10) fail(i, "integer literal does not fit in 64 bits");
        v = v * 10 + d;
        ++j;
      }
      t.kind = Tok::Int;
      t.value = v;
      t.text = std::string(src.substr(i, j - i));
      i = j;
    } else {
      switch (c) {
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case ',': t.kind = Tok::Comma; break;
        case ':': t.kind = Tok::Colon; break;
        case '=': t.kind = Tok::Equals; break;
        default: t.kind = Tok::Stray; break;
      }
      t.text = std::string(1, static_cast<char>(c));
      ++i;
    }
    out.push_back(std::move(t));
  }
  out.push_back(Token{Tok::End, "", src.size(), 0});
  return out;
}

}  // namespace solmine::dsl
