#include <algorithm>
#include <set>

#include "lexer.hpp"
#include "polycheck/frontend.hpp"

namespace polycheck {

namespace {

using detail::Tok;
using detail::Token;
using detail::TokenStream;
using namespace hl;

const std::set<std::string, std::less<>> kKeywords = {
    "def", "for", "in", "do", "done", "if", "then", "else", "endif", "let", "mut", "yield", "return", "skip",
    "enumerate", "reversed", "with", "and", "or", "not", "True", "False", "true", "false", "Bool", "Char",
};

bool is_bool_literal(const Token& t) {
  return t.kind == Tok::Ident && (t.text == "True" || t.text == "False" || t.text == "true" || t.text == "false");
}

bool bool_value(const Token& t) { return t.text == "True" || t.text == "true"; }

class ProgramParser {
 public:
  explicit ProgramParser(std::string_view text) : ts_(detail::tokenize(text)) {}

  Program parse() {
    Program p;
    if (ts_.at_end()) ts_.fail("function definition");
    while (!ts_.at_end()) {
      if (!ts_.is("def")) ts_.fail("function definition");
      p.functions.push_back(parse_function());
    }
    p.main = p.find("main") ? "main" : p.functions.back().name;
    return p;
  }

 private:
  std::string name(std::string_view what) {
    const Token& t = ts_.peek();
    if (t.kind != Tok::Ident || kKeywords.contains(t.text)) ts_.fail(std::string(what));
    if (t.text.starts_with("__"))
      throw CompileError(ErrorCategory::Syntax, t.span, "identifiers starting with '__' are reserved");
    return ts_.next().text;
  }

  // Type ::= Bool | Char | [ Type ]
  std::pair<bool, int> parse_type() {
    if (ts_.accept("Bool")) return {true, 0};
    if (ts_.accept("Char")) return {false, 0};
    if (ts_.accept("[")) {
      auto [is_bool, depth] = parse_type();
      if (is_bool) ts_.fail("'Char' or '['");
      ts_.expect("]");
      return {false, depth + 1};
    }
    ts_.fail("type");
  }

  std::vector<std::string> parse_name_tuple() {
    std::vector<std::string> names;
    ts_.expect("(");
    if (!ts_.is(")")) {
      do names.push_back(name("position variable"));
      while (ts_.accept(","));
    }
    ts_.expect(")");
    return names;
  }

  Function parse_function() {
    Function f;
    f.span = ts_.expect("def").span;
    f.name = name("function name");
    ts_.expect("(");
    if (!ts_.is(")")) {
      do {
        Param prm;
        prm.span = ts_.peek().span;
        prm.name = name("parameter name");
        ts_.expect(":");
        auto [is_bool, depth] = parse_type();
        prm.is_bool = is_bool;
        prm.depth = depth;
        if (ts_.accept("with")) prm.positions = parse_name_tuple();
        f.params.push_back(std::move(prm));
      } while (ts_.accept(","));
    }
    ts_.expect(")");
    ts_.expect(":");
    auto [is_bool, depth] = parse_type();
    f.ret = ReturnType{is_bool, depth};
    ts_.expect(":=");
    ret_ = f.ret;
    positions_.clear();
    for (const auto& prm : f.params)
      positions_.insert(positions_.end(), prm.positions.begin(), prm.positions.end());
    f.body = parse_block();
    return f;
  }

  bool at_block_end() const {
    return ts_.at_end() || ts_.is("endif") || ts_.is("else") || ts_.is("done") || ts_.is("def");
  }

  Stmt parse_block() {
    std::vector<Stmt> items;
    while (!at_block_end()) {
      if (ts_.is("let")) {
        items.push_back(parse_let());
        break;
      }
      items.push_back(parse_stmt());
    }
    return seq(std::move(items));
  }

  Stmt parse_let() {
    SourceSpan span = ts_.expect("let").span;
    if (ts_.accept("mut")) {
      std::string n = name("boolean name");
      ts_.expect(":=");
      const Token& v = ts_.peek();
      if (!is_bool_literal(v)) ts_.fail("'False'");
      if (bool_value(v))
        throw CompileError(ErrorCategory::BooleanReset, v.span, "boolean '" + n + "' must start as False");
      ts_.next();
      ts_.expect("in");
      Stmt body = parse_block();
      return Stmt{s::LetBool{std::move(n), std::move(body)}, span};
    }
    std::string n = name("variable name");
    ts_.expect(":=");
    if (is_bool_literal(ts_.peek()))
      throw CompileError(ErrorCategory::MutationViolation, ts_.peek().span,
                         "boolean '" + n + "' must be declared with 'let mut'");
    OExpr value = parse_oexpr();
    ts_.expect("in");
    Stmt body = parse_block();
    return Stmt{s::LetOut{std::move(n), std::move(value), std::move(body)}, span};
  }

  Stmt parse_stmt() {
    const Token& t = ts_.peek();
    SourceSpan span = t.span;
    if (ts_.accept("skip")) return skip();
    if (ts_.accept("yield")) return Stmt{s::Yield{parse_oexpr()}, span};
    if (ts_.accept("return")) {
      if (ret_.is_bool) return Stmt{s::ReturnBool{parse_bexpr()}, span};
      return Stmt{s::ReturnOut{parse_oexpr()}, span};
    }
    if (ts_.accept("if")) {
      BExpr cond = parse_bexpr();
      ts_.expect("then");
      Stmt then_branch = parse_block();
      Stmt else_branch = skip();
      if (ts_.accept("else")) else_branch = parse_block();
      ts_.expect("endif");
      return Stmt{s::If{std::move(cond), std::move(then_branch), std::move(else_branch)}, span};
    }
    if (ts_.accept("for")) {
      ts_.expect("(");
      std::string pos = name("position variable");
      ts_.expect(",");
      std::string elem = name("element variable");
      ts_.expect(")");
      ts_.expect("in");
      Direction dir = Direction::Forward;
      if (ts_.accept("reversed")) {
        dir = Direction::Backward;
        ts_.expect("(");
      }
      ts_.expect("enumerate");
      ts_.expect("(");
      OExpr iter = parse_oexpr();
      ts_.expect(")");
      if (dir == Direction::Backward) ts_.expect(")");
      ts_.expect("do");
      positions_.push_back(pos);
      Stmt body = parse_block();
      positions_.pop_back();
      ts_.expect("done");
      return Stmt{s::For{dir, std::move(pos), std::move(elem), std::move(iter), std::move(body)}, span};
    }
    if (t.kind == Tok::Ident && ts_.is(":=", 1)) {
      std::string n = name("variable");
      ts_.next();
      const Token& v = ts_.peek();
      if (!is_bool_literal(v))
        throw CompileError(ErrorCategory::MutationViolation, span, "only booleans may be assigned, and only to True");
      if (!bool_value(v))
        throw CompileError(ErrorCategory::BooleanReset, span, "boolean '" + n + "' cannot be reset to False");
      ts_.next();
      return Stmt{s::SetTrue{std::move(n)}, span};
    }
    if (ts_.is("while"))
      throw CompileError(ErrorCategory::WhileOrRecursion, span, "while loops are not part of the language");
    ts_.fail("statement");
  }

  // Expressions ------------------------------------------------------------

  std::vector<Arg> parse_args() {
    std::vector<Arg> args;
    ts_.expect("(");
    if (!ts_.is(")")) {
      do {
        OExpr e = parse_oexpr();
        std::vector<std::string> pos;
        if (ts_.accept("with")) pos = parse_name_tuple();
        args.push_back(Arg{std::move(e), std::move(pos)});
      } while (ts_.accept(","));
    }
    ts_.expect(")");
    return args;
  }

  OExpr parse_oexpr() {
    const Token& t = ts_.peek();
    SourceSpan span = t.span;
    if (t.kind == Tok::Char) {
      Letter c = ts_.next().word.front();
      OExpr e = oconst(CExpr::character(c));
      e.span = span;
      return e;
    }
    if (t.kind == Tok::String) {
      OExpr e = oconst(CExpr::string(ts_.next().word));
      e.span = span;
      return e;
    }
    if (ts_.accept("[")) {
      std::vector<OExpr> items;
      if (!ts_.is("]")) {
        do items.push_back(parse_oexpr());
        while (ts_.accept(","));
      }
      ts_.expect("]");
      if (items.empty()) {
        OExpr e = oconst(CExpr::list({}, 1));
        e.span = span;
        return e;
      }
      bool all_const = true;
      for (const auto& it : items) {
        auto* c = std::get_if<o::Const>(&it.node);
        if (!c || c->value.depth != std::get<o::Const>(items.front().node).value.depth) all_const = false;
      }
      if (all_const) {
        std::vector<CExpr> cs;
        for (const auto& it : items) cs.push_back(std::get<o::Const>(it.node).value);
        int depth = cs.front().depth + 1;
        OExpr e = oconst(CExpr::list(std::move(cs), depth));
        e.span = span;
        return e;
      }
      return OExpr{o::List{std::move(items)}, -1, span};
    }
    if (t.kind == Tok::Ident && !kKeywords.contains(t.text)) {
      std::string n = name("expression");
      if (ts_.is("(")) return OExpr{o::Call{std::move(n), parse_args()}, -1, span};
      return OExpr{o::Var{std::move(n)}, -1, span};
    }
    ts_.fail("list expression");
  }

  BExpr parse_bexpr() {
    BExpr lhs = parse_implies();
    if (ts_.is("<=>")) {
      SourceSpan span = ts_.next().span;
      return BExpr{b::Bin{BoolOp::Iff, std::move(lhs), parse_bexpr()}, span};
    }
    return lhs;
  }

  BExpr parse_implies() {
    BExpr lhs = parse_or();
    if (ts_.is("=>")) {
      SourceSpan span = ts_.next().span;
      return BExpr{b::Bin{BoolOp::Implies, std::move(lhs), parse_implies()}, span};
    }
    return lhs;
  }

  BExpr parse_or() {
    BExpr lhs = parse_and();
    while (ts_.is("or")) {
      SourceSpan span = ts_.next().span;
      lhs = BExpr{b::Bin{BoolOp::Or, std::move(lhs), parse_and()}, span};
    }
    return lhs;
  }

  BExpr parse_and() {
    BExpr lhs = parse_not();
    while (ts_.is("and")) {
      SourceSpan span = ts_.next().span;
      lhs = BExpr{b::Bin{BoolOp::And, std::move(lhs), parse_not()}, span};
    }
    return lhs;
  }

  BExpr parse_not() {
    if (ts_.is("not")) {
      SourceSpan span = ts_.next().span;
      return BExpr{b::Not{parse_not()}, span};
    }
    return parse_batom();
  }

  std::optional<CmpOp> peek_cmp() const {
    if (ts_.is("==") || ts_.is("===") || ts_.is("=")) return CmpOp::Eq;
    if (ts_.is("!=")) return CmpOp::Ne;
    if (ts_.is("<")) return CmpOp::Lt;
    if (ts_.is("<=")) return CmpOp::Le;
    if (ts_.is(">")) return CmpOp::Gt;
    if (ts_.is(">=")) return CmpOp::Ge;
    return std::nullopt;
  }

  bool is_position(const std::string& n) const {
    return std::find(positions_.begin(), positions_.end(), n) != positions_.end();
  }

  BExpr literal_equality(OExpr lhs, CmpOp op, SourceSpan span) {
    if (op != CmpOp::Eq && op != CmpOp::Ne)
      throw CompileError(ErrorCategory::Type, span, "ordering comparisons apply to positions only");
    OExpr rhs = parse_oexpr();
    BExpr eq{b::LitEq{std::move(lhs), std::move(rhs)}, span};
    if (op == CmpOp::Ne) return BExpr{b::Not{std::move(eq)}, span};
    return eq;
  }

  BExpr parse_batom() {
    const Token& t = ts_.peek();
    SourceSpan span = t.span;
    if (is_bool_literal(t)) return BExpr{b::Lit{bool_value(ts_.next())}, span};
    if (ts_.accept("(")) {
      BExpr e = parse_bexpr();
      ts_.expect(")");
      return e;
    }
    if (t.kind == Tok::Ident && !kKeywords.contains(t.text)) {
      if (ts_.is("(", 1)) {
        OExpr call = parse_oexpr();
        if (auto op = peek_cmp()) {
          SourceSpan at = ts_.next().span;
          return literal_equality(std::move(call), *op, at);
        }
        auto& c = std::get<o::Call>(call.node);
        return BExpr{b::Call{c.fn, c.args}, span};
      }
      std::string lhs = name("boolean expression");
      auto op = peek_cmp();
      if (!op) return BExpr{b::Var{std::move(lhs)}, span};
      SourceSpan at = ts_.next().span;
      const Token& r = ts_.peek();
      const bool rhs_plain_name = r.kind == Tok::Ident && !kKeywords.contains(r.text) && !ts_.is("(", 1);
      const bool ordering = *op != CmpOp::Eq && *op != CmpOp::Ne;
      if (rhs_plain_name && (ordering || is_position(lhs) || is_position(r.text))) {
        std::string rhs = name("position variable");
        return BExpr{b::PosCmp{*op, std::move(lhs), std::move(rhs)}, at};
      }
      if (ordering && is_position(lhs)) ts_.fail("position variable");
      return literal_equality(OExpr{o::Var{std::move(lhs)}, -1, span}, *op, at);
    }
    if (t.kind == Tok::Char || t.kind == Tok::String || ts_.is("[")) {
      OExpr lhs = parse_oexpr();
      auto op = peek_cmp();
      if (!op) ts_.fail("'=='");
      SourceSpan at = ts_.next().span;
      return literal_equality(std::move(lhs), *op, at);
    }
    ts_.fail("boolean expression");
  }

  TokenStream ts_;
  ReturnType ret_;
  std::vector<std::string> positions_;
};

}  // namespace

hl::Program parse_program(std::string_view text) { return ProgramParser(text).parse(); }

}  // namespace polycheck
