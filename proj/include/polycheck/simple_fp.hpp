#pragma once

// Simple for-programs: loops over the positions of the input word, boolean
// flags that can only be raised, and print statements.

#include <string>
#include <string_view>
#include <vector>

#include "polycheck/hl_ast.hpp"

namespace polycheck::sp {

using hl::CmpOp;
using hl::Direction;

struct Cond {
  enum Kind { True, False, Bool, Label, PosCmp, Not, And, Or };
  Kind kind = True;
  std::string lhs;  // boolean name, label position, or left position
  std::string rhs;  // right position
  Letter letter = 0;
  CmpOp op = CmpOp::Eq;
  std::vector<Cond> kids;

  static Cond constant(bool v);
  static Cond boolean(std::string name);
  static Cond label(std::string pos, Letter c);
  static Cond compare(CmpOp op, std::string lhs, std::string rhs);
  static Cond negation(Cond c);
  static Cond conjunction(Cond a, Cond b);
  static Cond disjunction(Cond a, Cond b);

  bool operator==(const Cond&) const = default;
};

struct Stmt {
  enum Kind { Seq, If, For, SetTrue, PrintLabel, PrintChar, Skip };
  Kind kind = Skip;
  Cond cond;                       // If
  std::vector<Stmt> kids;          // Seq items; If {then, else}; For {body}
  Direction dir = Direction::Forward;
  std::string name;                // For position, SetTrue flag, PrintLabel position
  Letter letter = 0;               // PrintChar
  std::vector<std::string> bools;  // For: flags declared at the head of the body

  static Stmt skip();
  static Stmt seq(std::vector<Stmt> items);
  static Stmt if_(Cond c, Stmt then_branch, Stmt else_branch);
  static Stmt loop(Direction dir, std::string pos, std::vector<std::string> bools, Stmt body);
  static Stmt set_true(std::string name);
  static Stmt print_label(std::string pos);
  static Stmt print_char(Letter c);

  bool operator==(const Stmt&) const = default;
};

struct Program {
  std::vector<std::string> bools;  // declared at the top
  Stmt body;

  bool operator==(const Program&) const = default;
};

/// Runs the program. Backward loops visit |w|-1 down to 0.
Word eval_simple(const Program& p, const Word& w);

struct Metrics {
  std::size_t size = 0;
  int loop_depth = 0;
  int bool_depth = 0;
};

/// size counts If, For, SetTrue, print and skip statements.
Metrics metrics(const Program& p);
/// size counts If, For, yield, return, let and assignment statements over all
/// functions; depths are maxima over functions.
Metrics metrics(const hl::Program& p);

std::string to_string(const Program& p);
std::string to_string(const Cond& c);
/// Throws CompileError(Syntax).
Program parse_simple(std::string_view text);

/// Letters that occur in label tests or print statements.
std::vector<Letter> constants(const Program& p);

}  // namespace polycheck::sp
