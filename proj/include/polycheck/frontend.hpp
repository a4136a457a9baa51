#pragma once

// Parsing and typechecking of `.pr` programs, and parsing of pre/post
// condition formulas.

#include <string>
#include <string_view>

#include "polycheck/fo.hpp"
#include "polycheck/hl_ast.hpp"

namespace polycheck {

/// Parses a program. The main function is `main` if present, otherwise the
/// last definition. Throws CompileError.
hl::Program parse_program(std::string_view text);

/// Enforces the typing rules and the language restrictions, returning a copy
/// with every list expression annotated with its depth. Throws CompileError
/// with the category of the first violated rule.
hl::Program typecheck_program(const hl::Program& p);

/// Renders a function type, e.g. `(Out[1], 2) -> Out[1]`; parameter groups
/// are separated by ` * `.
std::string signature(const hl::Function& f);

/// Parses a closed first-order formula:
///   φ ::= true | false | forall x. φ | exists x. φ | φ and φ | φ or φ
///       | not φ | φ => φ | x < y | x <= y | x = y | x != y
///       | label(x) == 'c' | label(x) != 'c'
///       | contains_factor("w") | starts_with("w") | ends_with("w")
/// Throws CompileError (Syntax or UnknownName).
fo::Formula parse_spec(std::string_view text);

/// succ(x, y): y is the position right after x.
fo::Formula successor(fo::Var x, fo::Var y);
fo::Formula contains_factor(const Word& w);
fo::Formula starts_with(const Word& w);
fo::Formula ends_with(const Word& w);

}  // namespace polycheck
