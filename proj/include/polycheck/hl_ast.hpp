#pragma once

// Abstract syntax of high-level for-programs, including the generator
// expressions that only the rewriter introduces.
//
// Trees are immutable and share subtrees through `Box`. Equality is deep
// and ignores source spans.

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "polycheck/diagnostics.hpp"
#include "polycheck/letters.hpp"

namespace polycheck::hl {

template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}  // NOLINT: implicit by design of the AST helpers

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  const T& get() const { return *ptr_; }

  friend bool operator==(const Box& a, const Box& b) { return a.ptr_ == b.ptr_ || *a.ptr_ == *b.ptr_; }

 private:
  std::shared_ptr<const T> ptr_;
};

/// Constant expression: a character or a list of constants of equal depth.
struct CExpr {
  bool is_char = false;
  Letter ch = 0;
  std::vector<CExpr> items;
  int depth = 0;

  static CExpr character(Letter c);
  static CExpr list(std::vector<CExpr> items, int depth);
  static CExpr string(const Word& w);

  bool operator==(const CExpr&) const = default;
};

struct Stmt;
struct OExpr;
struct BExpr;

enum class Direction { Forward, Backward };

/// A call argument: a list expression together with the position variables
/// attached to it (`e with (i, j)`).
struct Arg {
  Box<OExpr> expr;
  std::vector<std::string> positions;

  bool operator==(const Arg&) const = default;
};

namespace o {
struct Var {
  std::string name;
  bool operator==(const Var&) const = default;
};
struct Const {
  CExpr value;
  bool operator==(const Const&) const = default;
};
struct List {
  std::vector<OExpr> items;
  bool operator==(const List&) const;
};
struct Call {
  std::string fn;
  std::vector<Arg> args;
  bool operator==(const Call&) const = default;
};
/// ⟨s⟩: evaluates `body` with booleans hidden and collects its output.
/// `origin` identifies the expression this generator was created from;
/// copies made by substitution keep it.
struct Gen {
  Box<Stmt> body;
  int origin = 0;
  bool operator==(const Gen&) const = default;
};
}  // namespace o

struct OExpr {
  std::variant<o::Var, o::Const, o::List, o::Call, o::Gen> node;
  int depth = -1;  // filled in by the typechecker
  SourceSpan span;

  bool operator==(const OExpr&) const = default;
};

enum class BoolOp { And, Or, Implies, Iff };
enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

namespace b {
struct Lit {
  bool value = false;
  bool operator==(const Lit&) const = default;
};
struct Var {
  std::string name;
  bool operator==(const Var&) const = default;
};
struct Not {
  Box<BExpr> operand;
  bool operator==(const Not&) const = default;
};
struct Bin {
  BoolOp op;
  Box<BExpr> lhs;
  Box<BExpr> rhs;
  bool operator==(const Bin&) const = default;
};
struct PosCmp {
  CmpOp op;
  std::string lhs;
  std::string rhs;
  bool operator==(const PosCmp&) const = default;
};
struct Call {
  std::string fn;
  std::vector<Arg> args;
  bool operator==(const Call&) const = default;
};
/// Equality of nested words; the typechecker requires one side constant.
struct LitEq {
  Box<OExpr> lhs;
  Box<OExpr> rhs;
  bool operator==(const LitEq&) const = default;
};
struct Gen {
  Box<Stmt> body;
  bool operator==(const Gen&) const = default;
};
}  // namespace b

struct BExpr {
  std::variant<b::Lit, b::Var, b::Not, b::Bin, b::PosCmp, b::Call, b::LitEq, b::Gen> node;
  SourceSpan span;

  bool operator==(const BExpr&) const = default;
};

namespace s {
struct If {
  BExpr cond;
  Box<Stmt> then_branch;
  Box<Stmt> else_branch;
  bool operator==(const If&) const = default;
};
struct Yield {
  OExpr value;
  bool operator==(const Yield&) const = default;
};
struct ReturnOut {
  OExpr value;
  bool operator==(const ReturnOut&) const = default;
};
struct ReturnBool {
  BExpr value;
  bool operator==(const ReturnBool&) const = default;
};
struct LetOut {
  std::string name;
  OExpr value;
  Box<Stmt> body;
  bool operator==(const LetOut&) const = default;
};
struct LetBool {
  std::string name;
  Box<Stmt> body;
  bool operator==(const LetBool&) const = default;
};
struct SetTrue {
  std::string name;
  bool operator==(const SetTrue&) const = default;
};
struct For {
  Direction dir;
  std::string pos;
  std::string elem;
  OExpr iter;
  Box<Stmt> body;
  bool operator==(const For&) const = default;
};
/// Sequential composition; the empty sequence is `skip`.
struct Seq {
  std::vector<Stmt> items;
  bool operator==(const Seq&) const;
};
}  // namespace s

struct Stmt {
  std::variant<s::Seq, s::If, s::Yield, s::ReturnOut, s::ReturnBool, s::LetOut, s::LetBool, s::SetTrue, s::For>
      node;
  SourceSpan span;

  bool operator==(const Stmt&) const = default;
};

struct Param {
  std::string name;
  bool is_bool = false;  // rejected by the typechecker
  int depth = 1;
  std::vector<std::string> positions;
  SourceSpan span;

  bool operator==(const Param&) const = default;
};

struct ReturnType {
  bool is_bool = false;
  int depth = 0;

  bool operator==(const ReturnType&) const = default;
};

struct Function {
  std::string name;
  std::vector<Param> params;
  ReturnType ret;
  Stmt body;
  SourceSpan span;

  bool operator==(const Function&) const = default;
};

struct Program {
  std::vector<Function> functions;
  std::string main;

  const Function* find(std::string_view name) const;
  const Function& main_function() const;

  bool operator==(const Program&) const = default;
};

// Construction helpers used by the parser and the rewriter.
OExpr ovar(std::string name, int depth = -1);
OExpr oconst(CExpr c);
OExpr ogen(Stmt body, int depth, int origin);
BExpr blit(bool v);
BExpr bvar(std::string name);
BExpr bnot(BExpr e);
BExpr band(BExpr a, BExpr b);
BExpr bor(BExpr a, BExpr b);
BExpr poscmp(CmpOp op, std::string lhs, std::string rhs);
Stmt skip();
Stmt seq(std::vector<Stmt> items);
Stmt if_(BExpr cond, Stmt then_branch, Stmt else_branch = skip());
Stmt yield(OExpr e);
Stmt set_true(std::string name);
Stmt let_bool(std::string name, Stmt body);
Stmt for_(Direction dir, std::string pos, std::string elem, OExpr iter, Stmt body);

bool is_skip(const Stmt& s);

/// Canonical concrete syntax. Generator nodes are printed as `<{ ... }>` and
/// `<? ... ?>`, which the parser rejects.
std::string to_string(const Program& p);
std::string to_string(const Stmt& s, int indent = 0);
std::string to_string(const OExpr& e);
std::string to_string(const BExpr& e);

}  // namespace polycheck::hl
