#include <set>

#include "lexer.hpp"
#include "polycheck/frontend.hpp"

namespace polycheck {

namespace {

using detail::Tok;
using detail::Token;
using detail::TokenStream;

const std::set<std::string, std::less<>> kReserved = {
    "true", "false", "forall", "exists", "and", "or", "not", "label", "contains_factor", "starts_with", "ends_with",
};

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : ts_(detail::tokenize(text)) {}

  fo::Formula parse() {
    fo::Formula f = formula();
    if (!ts_.at_end()) ts_.fail("end of formula");
    return f;
  }

 private:
  // Quantifiers extend as far to the right as possible.
  fo::Formula formula() {
    if (ts_.is("forall") || ts_.is("exists")) {
      const bool universal = ts_.next().text == "forall";
      std::vector<std::string> names;
      do names.push_back(variable_name());
      while (ts_.accept(","));
      ts_.expect(".");
      std::vector<fo::Var> vars;
      for (const auto& n : names) {
        vars.push_back(fo::var(n, fo::Sort::Pos));
        bound_.push_back(n);
      }
      fo::Formula body = formula();
      bound_.resize(bound_.size() - names.size());
      return universal ? fo::forall(vars, body) : fo::exists(vars, body);
    }
    fo::Formula lhs = disjunction();
    if (ts_.accept("<=>")) return fo::iff(lhs, formula());
    if (ts_.accept("=>")) return fo::implies(lhs, formula());
    return lhs;
  }

  fo::Formula disjunction() {
    std::vector<fo::Formula> parts{conjunction()};
    while (ts_.accept("or")) parts.push_back(conjunction());
    return fo::disj(std::move(parts));
  }

  fo::Formula conjunction() {
    std::vector<fo::Formula> parts{negation()};
    while (ts_.accept("and")) parts.push_back(negation());
    return fo::conj(std::move(parts));
  }

  fo::Formula negation() {
    if (ts_.accept("not")) return fo::negate(negation());
    if (ts_.is("forall") || ts_.is("exists")) return formula();
    return atom();
  }

  std::string variable_name() {
    const Token& t = ts_.peek();
    if (t.kind != Tok::Ident || kReserved.contains(t.text)) ts_.fail("variable");
    return ts_.next().text;
  }

  fo::Var bound_var() {
    SourceSpan span = ts_.peek().span;
    std::string n = variable_name();
    for (const auto& b : bound_)
      if (b == n) return fo::var(n, fo::Sort::Pos);
    throw CompileError(ErrorCategory::UnknownName, span, "unbound variable '" + n + "'");
  }

  Word string_argument() {
    ts_.expect("(");
    if (ts_.peek().kind != Tok::String) ts_.fail("string literal");
    Word w = ts_.next().word;
    ts_.expect(")");
    return w;
  }

  fo::Formula atom() {
    if (ts_.accept("true")) return fo::top();
    if (ts_.accept("false")) return fo::bottom();
    if (ts_.accept("(")) {
      fo::Formula f = formula();
      ts_.expect(")");
      return f;
    }
    if (ts_.accept("contains_factor")) return contains_factor(string_argument());
    if (ts_.accept("starts_with")) return starts_with(string_argument());
    if (ts_.accept("ends_with")) return ends_with(string_argument());
    if (ts_.accept("label")) {
      ts_.expect("(");
      fo::Var x = bound_var();
      ts_.expect(")");
      bool negated = false;
      if (ts_.accept("!=")) {
        negated = true;
      } else if (!ts_.accept("==")) {
        ts_.fail("'==' or '!='");
      }
      if (ts_.peek().kind != Tok::Char) ts_.fail("character literal");
      fo::Formula f = fo::letter_at(x, ts_.next().word.front());
      return negated ? fo::negate(f) : f;
    }
    fo::Var x = bound_var();
    const std::string op = ts_.peek().text;
    if (ts_.peek().kind != Tok::Symbol) ts_.fail("comparison");
    ts_.next();
    fo::Var y = bound_var();
    if (op == "<") return fo::pos_lt(x, y);
    if (op == "<=") return fo::pos_le(x, y);
    if (op == ">") return fo::pos_lt(y, x);
    if (op == ">=") return fo::pos_le(y, x);
    if (op == "=" || op == "==") return fo::pos_eq(x, y);
    if (op == "!=") return fo::negate(fo::pos_eq(x, y));
    throw CompileError(ErrorCategory::Syntax, ts_.peek().span, "unknown comparison '" + op + "'");
  }

  TokenStream ts_;
  std::vector<std::string> bound_;
};

std::vector<fo::Var> fresh_positions(std::size_t n) {
  std::vector<fo::Var> xs;
  for (std::size_t i = 0; i < n; ++i) xs.push_back(fo::fresh_var("x", fo::Sort::Pos));
  return xs;
}

// Conjunction of successor links and letter tests along xs.
fo::Formula chain(const std::vector<fo::Var>& xs, const Word& w) {
  std::vector<fo::Formula> parts;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) parts.push_back(successor(xs[i - 1], xs[i]));
    parts.push_back(fo::letter_at(xs[i], w[i]));
  }
  return fo::conj(std::move(parts));
}

}  // namespace

fo::Formula parse_spec(std::string_view text) { return SpecParser(text).parse(); }

fo::Formula successor(fo::Var x, fo::Var y) {
  fo::Var z = fo::fresh_var("z", fo::Sort::Pos);
  return fo::conj(fo::pos_lt(x, y), fo::negate(fo::exists(z, fo::conj(fo::pos_lt(x, z), fo::pos_lt(z, y)))));
}

fo::Formula contains_factor(const Word& w) {
  auto xs = fresh_positions(w.size());
  return fo::exists(xs, chain(xs, w));
}

fo::Formula starts_with(const Word& w) {
  if (w.empty()) return fo::top();
  auto xs = fresh_positions(w.size());
  fo::Var y = fo::fresh_var("y", fo::Sort::Pos);
  fo::Formula first = fo::negate(fo::exists(y, fo::pos_lt(y, xs.front())));
  return fo::exists(xs, fo::conj(first, chain(xs, w)));
}

fo::Formula ends_with(const Word& w) {
  if (w.empty()) return fo::top();
  auto xs = fresh_positions(w.size());
  fo::Var y = fo::fresh_var("y", fo::Sort::Pos);
  fo::Formula last = fo::negate(fo::exists(y, fo::pos_lt(xs.back(), y)));
  return fo::exists(xs, fo::conj(last, chain(xs, w)));
}

}  // namespace polycheck
