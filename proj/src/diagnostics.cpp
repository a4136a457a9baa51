#include "polycheck/diagnostics.hpp"

namespace polycheck {

std::string_view category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::Syntax: return "SyntaxError";
    case ErrorCategory::Type: return "TypeError";
    case ErrorCategory::UnknownName: return "UnknownName";
    case ErrorCategory::WhileOrRecursion: return "WhileOrRecursion";
    case ErrorCategory::MutationViolation: return "MutationViolation";
    case ErrorCategory::NestedWordEquality: return "NestedWordEquality";
    case ErrorCategory::CrossListComparison: return "CrossListComparison";
    case ErrorCategory::Shadowing: return "Shadowing";
    case ErrorCategory::BooleanArgument: return "BooleanArgument";
    case ErrorCategory::BooleanReset: return "BooleanReset";
    case ErrorCategory::ReturnDepthZero: return "ReturnDepthZero";
    case ErrorCategory::BoundViolation: return "BoundViolation";
    case ErrorCategory::Runtime: return "RuntimeError";
  }
  return "Error";
}

std::string SourceSpan::to_string() const {
  return std::to_string(line) + ":" + std::to_string(column);
}

CompileError::CompileError(ErrorCategory category, SourceSpan span, const std::string& message)
    : std::runtime_error(std::string(category_name(category)) + " at " + span.to_string() + ": " +
                         message),
      category_(category),
      span_(span),
      detail_(message) {}

}  // namespace polycheck
