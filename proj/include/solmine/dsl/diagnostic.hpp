#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace solmine::dsl {

enum class ErrorCode { E_LEX, E_SYNTAX, E_TYPE, E_BUDGET, E_UNSUPPORTED_EMIT };

std::string_view code_name(ErrorCode c);

struct Diagnostic {
  ErrorCode code = ErrorCode::E_SYNTAX;
  std::size_t pos = 0;  // byte offset
  std::size_t line = 1;
  std::size_t column = 1;
  std::string message;
  std::vector<std::string> expected;

  // "E_SYNTAX at 1:57: unexpected `?` (expected one of: `)`, `,`)"
  std::string describe() const;
};

// Fills line and column from the byte offset.
Diagnostic at(ErrorCode code, std::string_view source, std::size_t pos, std::string message,
              std::vector<std::string> expected = {});

class DslError : public std::runtime_error {
 public:
  explicit DslError(Diagnostic d) : std::runtime_error(d.describe()), diag_(std::move(d)) {}
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

}  // namespace solmine::dsl
