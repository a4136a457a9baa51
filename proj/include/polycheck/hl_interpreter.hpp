#pragma once

// Reference semantics of high-level for-programs.

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "polycheck/hl_ast.hpp"

namespace polycheck {

/// A character, or a list of nested words of equal depth.
struct NestedWord {
  bool is_char = false;
  Letter ch = 0;
  std::vector<NestedWord> items;
  int depth = 0;

  static NestedWord character(Letter c);
  static NestedWord list(std::vector<NestedWord> items, int depth);
  static NestedWord word(const Word& w);
  static NestedWord from_const(const hl::CExpr& c);

  /// The letters of a depth-1 value.
  Word to_word() const;

  bool operator==(const NestedWord&) const = default;
};

enum class OutputFormat { Separated, Nested };

/// `Separated` joins the elements of a depth-k list with k-1 '#' letters;
/// `Nested` prints brackets and quoted words.
std::string format(const NestedWord& v, OutputFormat style = OutputFormat::Separated);

using Value = std::variant<NestedWord, bool>;

/// Runs the main function on `input`. The program must be typechecked.
/// Throws CompileError(Runtime) if a character-valued function ends without
/// returning.
Value eval_program(const hl::Program& p, const NestedWord& input);

/// Same, for a main function of type Out[1] -> Out[1].
Word run_word(const hl::Program& p, const Word& input);

/// Letters occurring in constants anywhere in the program.
std::set<Letter> support_constants(const hl::Program& p);

}  // namespace polycheck
