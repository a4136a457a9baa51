#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polycheck {

enum class ErrorCategory {
  Syntax,
  Type,
  UnknownName,
  WhileOrRecursion,
  MutationViolation,
  NestedWordEquality,
  CrossListComparison,
  Shadowing,
  BooleanArgument,
  BooleanReset,
  ReturnDepthZero,
  BoundViolation,
  Runtime,
};

std::string_view category_name(ErrorCategory c);

/// Location in a source text, 1-based. Spans never take part in AST
/// equality, so two trees parsed from differently formatted sources compare
/// equal.
struct SourceSpan {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) { return true; }
  std::string to_string() const;
};

class CompileError : public std::runtime_error {
 public:
  CompileError(ErrorCategory category, SourceSpan span, const std::string& message);

  ErrorCategory category() const { return category_; }
  const SourceSpan& span() const { return span_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorCategory category_;
  SourceSpan span_;
  std::string detail_;
};

}  // namespace polycheck
