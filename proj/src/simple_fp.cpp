#include "polycheck/simple_fp.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "lexer.hpp"

namespace polycheck::sp {

Cond Cond::constant(bool v) {
  Cond c;
  c.kind = v ? True : False;
  return c;
}

Cond Cond::boolean(std::string name) {
  Cond c;
  c.kind = Bool;
  c.lhs = std::move(name);
  return c;
}

Cond Cond::label(std::string pos, Letter l) {
  Cond c;
  c.kind = Label;
  c.lhs = std::move(pos);
  c.letter = l;
  return c;
}

Cond Cond::compare(CmpOp op, std::string lhs, std::string rhs) {
  Cond c;
  c.kind = PosCmp;
  c.op = op;
  c.lhs = std::move(lhs);
  c.rhs = std::move(rhs);
  return c;
}

Cond Cond::negation(Cond a) {
  Cond c;
  c.kind = Not;
  c.kids = {std::move(a)};
  return c;
}

Cond Cond::conjunction(Cond a, Cond b) {
  Cond c;
  c.kind = And;
  c.kids = {std::move(a), std::move(b)};
  return c;
}

Cond Cond::disjunction(Cond a, Cond b) {
  Cond c;
  c.kind = Or;
  c.kids = {std::move(a), std::move(b)};
  return c;
}

Stmt Stmt::skip() { return Stmt{}; }

Stmt Stmt::seq(std::vector<Stmt> items) {
  std::vector<Stmt> flat;
  for (auto& it : items) {
    if (it.kind == Seq) {
      for (auto& k : it.kids) flat.push_back(std::move(k));
    } else {
      flat.push_back(std::move(it));
    }
  }
  if (flat.empty()) return skip();
  if (flat.size() == 1) return std::move(flat.front());
  Stmt s;
  s.kind = Seq;
  s.kids = std::move(flat);
  return s;
}

Stmt Stmt::if_(Cond c, Stmt then_branch, Stmt else_branch) {
  Stmt s;
  s.kind = If;
  s.cond = std::move(c);
  s.kids = {std::move(then_branch), std::move(else_branch)};
  return s;
}

Stmt Stmt::loop(Direction dir, std::string pos, std::vector<std::string> bools, Stmt body) {
  Stmt s;
  s.kind = For;
  s.dir = dir;
  s.name = std::move(pos);
  s.bools = std::move(bools);
  s.kids = {std::move(body)};
  return s;
}

Stmt Stmt::set_true(std::string name) {
  Stmt s;
  s.kind = SetTrue;
  s.name = std::move(name);
  return s;
}

Stmt Stmt::print_label(std::string pos) {
  Stmt s;
  s.kind = PrintLabel;
  s.name = std::move(pos);
  return s;
}

Stmt Stmt::print_char(Letter c) {
  Stmt s;
  s.kind = PrintChar;
  s.letter = c;
  return s;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

class Runner {
 public:
  explicit Runner(const Word& w) : w_(w) {}

  Word run(const Program& p) {
    for (const auto& b : p.bools) bools_.emplace_back(b, false);
    exec(p.body);
    return std::move(out_);
  }

 private:
  int& pos(const std::string& n) {
    for (auto it = pos_.rbegin(); it != pos_.rend(); ++it)
      if (it->first == n) return it->second;
    throw std::logic_error("simple program: unbound position " + n);
  }

  bool& flag(const std::string& n) {
    for (auto it = bools_.rbegin(); it != bools_.rend(); ++it)
      if (it->first == n) return it->second;
    throw std::logic_error("simple program: unbound boolean " + n);
  }

  bool test(const Cond& c) {
    switch (c.kind) {
      case Cond::True: return true;
      case Cond::False: return false;
      case Cond::Bool: return flag(c.lhs);
      case Cond::Label: return w_[static_cast<std::size_t>(pos(c.lhs))] == c.letter;
      case Cond::PosCmp: {
        int l = pos(c.lhs);
        int r = pos(c.rhs);
        switch (c.op) {
          case CmpOp::Eq: return l == r;
          case CmpOp::Ne: return l != r;
          case CmpOp::Lt: return l < r;
          case CmpOp::Le: return l <= r;
          case CmpOp::Gt: return l > r;
          case CmpOp::Ge: return l >= r;
        }
        return false;
      }
      case Cond::Not: return !test(c.kids[0]);
      case Cond::And: return test(c.kids[0]) && test(c.kids[1]);
      case Cond::Or: return test(c.kids[0]) || test(c.kids[1]);
    }
    return false;
  }

  void exec(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Skip: return;
      case Stmt::Seq:
        for (const auto& k : s.kids) exec(k);
        return;
      case Stmt::If: exec(test(s.cond) ? s.kids[0] : s.kids[1]); return;
      case Stmt::SetTrue: flag(s.name) = true; return;
      case Stmt::PrintLabel: out_.push_back(w_[static_cast<std::size_t>(pos(s.name))]); return;
      case Stmt::PrintChar: out_.push_back(s.letter); return;
      case Stmt::For: {
        const int n = static_cast<int>(w_.size());
        pos_.emplace_back(s.name, 0);
        for (int k = 0; k < n; ++k) {
          pos_.back().second = s.dir == Direction::Forward ? k : n - 1 - k;
          const std::size_t mark = bools_.size();
          for (const auto& b : s.bools) bools_.emplace_back(b, false);
          exec(s.kids[0]);
          bools_.resize(mark);
        }
        pos_.pop_back();
        return;
      }
    }
  }

  const Word& w_;
  Word out_;
  std::vector<std::pair<std::string, int>> pos_;
  std::vector<std::pair<std::string, bool>> bools_;
};

void measure(const Stmt& s, int loops, int bools, Metrics& m) {
  m.loop_depth = std::max(m.loop_depth, loops);
  m.bool_depth = std::max(m.bool_depth, bools);
  switch (s.kind) {
    case Stmt::Seq:
      for (const auto& k : s.kids) measure(k, loops, bools, m);
      return;
    case Stmt::If:
      ++m.size;
      measure(s.kids[0], loops, bools, m);
      measure(s.kids[1], loops, bools, m);
      return;
    case Stmt::For:
      ++m.size;
      measure(s.kids[0], loops + 1, bools + static_cast<int>(s.bools.size()), m);
      return;
    default: ++m.size; return;
  }
}

void measure(const hl::Stmt& st, int loops, int bools, Metrics& m) {
  using namespace hl;
  m.loop_depth = std::max(m.loop_depth, loops);
  m.bool_depth = std::max(m.bool_depth, bools);
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, s::Seq>) {
          for (const auto& it : n.items) measure(it, loops, bools, m);
        } else if constexpr (std::is_same_v<T, s::If>) {
          ++m.size;
          measure(*n.then_branch, loops, bools, m);
          measure(*n.else_branch, loops, bools, m);
        } else if constexpr (std::is_same_v<T, s::For>) {
          ++m.size;
          measure(*n.body, loops + 1, bools, m);
        } else if constexpr (std::is_same_v<T, s::LetOut>) {
          ++m.size;
          measure(*n.body, loops, bools, m);
        } else if constexpr (std::is_same_v<T, s::LetBool>) {
          ++m.size;
          measure(*n.body, loops, bools + 1, m);
        } else {
          ++m.size;
        }
      },
      st.node);
}

// ---------------------------------------------------------------------------
// Printing

const char* cmp_text(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

std::string cond_text(const Cond& c) {
  switch (c.kind) {
    case Cond::True: return "true";
    case Cond::False: return "false";
    case Cond::Bool: return c.lhs;
    case Cond::Label: return "label(" + c.lhs + ") == " + quote_letter(c.letter);
    case Cond::PosCmp: return c.lhs + " " + cmp_text(c.op) + " " + c.rhs;
    case Cond::Not: return "not (" + cond_text(c.kids[0]) + ")";
    case Cond::And:
    case Cond::Or:
      return "(" + cond_text(c.kids[0]) + ")" + (c.kind == Cond::And ? " and " : " or ") + "(" +
             cond_text(c.kids[1]) + ")";
  }
  return "?";
}

void print_decl(const std::vector<std::string>& bools, const std::string& pad, std::string& out) {
  if (bools.empty()) return;
  out += pad + "let ";
  for (std::size_t i = 0; i < bools.size(); ++i) {
    if (i) out += ", ";
    out += bools[i];
  }
  out += " := false in\n";
}

void print(const Stmt& s, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 4, ' ');
  switch (s.kind) {
    case Stmt::Skip: out += pad + "skip\n"; return;
    case Stmt::Seq:
      for (const auto& k : s.kids) print(k, indent, out);
      return;
    case Stmt::If:
      out += pad + "if " + cond_text(s.cond) + " then\n";
      print(s.kids[0], indent + 1, out);
      out += pad + "else\n";
      print(s.kids[1], indent + 1, out);
      out += pad + "endif\n";
      return;
    case Stmt::SetTrue: out += pad + s.name + " := true\n"; return;
    case Stmt::PrintLabel: out += pad + "print label(" + s.name + ")\n"; return;
    case Stmt::PrintChar: out += pad + "print " + quote_letter(s.letter) + "\n"; return;
    case Stmt::For:
      out += pad + "for " + s.name + " in " + (s.dir == Direction::Forward ? "input" : "reversed(input)") + " do\n";
      print_decl(s.bools, pad + "    ", out);
      print(s.kids[0], indent + 1, out);
      out += pad + "done\n";
      return;
  }
}

// ---------------------------------------------------------------------------
// Parsing

using detail::Tok;
using detail::TokenStream;

class Parser {
 public:
  explicit Parser(std::string_view text) : ts_(detail::tokenize(text)) {}

  Program parse() {
    Program p;
    p.bools = declarations();
    p.body = block();
    if (!ts_.at_end()) ts_.fail("statement");
    return p;
  }

 private:
  std::vector<std::string> declarations() {
    std::vector<std::string> names;
    if (!ts_.accept("let")) return names;
    do names.push_back(ts_.expect_ident("boolean name"));
    while (ts_.accept(","));
    ts_.expect(":=");
    ts_.expect("false");
    ts_.expect("in");
    return names;
  }

  Stmt block() {
    std::vector<Stmt> items;
    while (!ts_.at_end() && !ts_.is("done") && !ts_.is("else") && !ts_.is("endif")) items.push_back(stmt());
    return Stmt::seq(std::move(items));
  }

  Stmt stmt() {
    if (ts_.accept("skip")) return Stmt::skip();
    if (ts_.accept("print")) {
      if (ts_.peek().kind == Tok::Char) return Stmt::print_char(ts_.next().word.front());
      ts_.expect("label");
      ts_.expect("(");
      std::string pos = ts_.expect_ident("position");
      ts_.expect(")");
      return Stmt::print_label(std::move(pos));
    }
    if (ts_.accept("if")) {
      Cond c = cond();
      ts_.expect("then");
      Stmt t = block();
      Stmt e = Stmt::skip();
      if (ts_.accept("else")) e = block();
      ts_.expect("endif");
      return Stmt::if_(std::move(c), std::move(t), std::move(e));
    }
    if (ts_.accept("for")) {
      std::string pos = ts_.expect_ident("position");
      ts_.expect("in");
      Direction dir = Direction::Forward;
      if (ts_.accept("reversed")) {
        ts_.expect("(");
        ts_.expect("input");
        ts_.expect(")");
        dir = Direction::Backward;
      } else {
        ts_.expect("input");
      }
      ts_.expect("do");
      auto bools = declarations();
      Stmt body = block();
      ts_.expect("done");
      return Stmt::loop(dir, std::move(pos), std::move(bools), std::move(body));
    }
    if (ts_.peek().kind == Tok::Ident && ts_.is(":=", 1)) {
      std::string name = ts_.next().text;
      ts_.next();
      ts_.expect("true");
      return Stmt::set_true(std::move(name));
    }
    ts_.fail("statement");
  }

  Cond cond() {
    Cond c = conj();
    while (ts_.accept("or")) c = Cond::disjunction(std::move(c), conj());
    return c;
  }

  Cond conj() {
    Cond c = neg();
    while (ts_.accept("and")) c = Cond::conjunction(std::move(c), neg());
    return c;
  }

  Cond neg() {
    if (ts_.accept("not")) return Cond::negation(neg());
    return atom();
  }

  Cond atom() {
    if (ts_.accept("true")) return Cond::constant(true);
    if (ts_.accept("false")) return Cond::constant(false);
    if (ts_.accept("(")) {
      Cond c = cond();
      ts_.expect(")");
      return c;
    }
    if (ts_.accept("label")) {
      ts_.expect("(");
      std::string pos = ts_.expect_ident("position");
      ts_.expect(")");
      bool negated = false;
      if (ts_.accept("!=")) {
        negated = true;
      } else if (!ts_.accept("==")) {
        ts_.fail("'=='");
      }
      if (ts_.peek().kind != Tok::Char) ts_.fail("character literal");
      Cond c = Cond::label(std::move(pos), ts_.next().word.front());
      return negated ? Cond::negation(std::move(c)) : c;
    }
    std::string lhs = ts_.expect_ident("condition");
    static const std::vector<std::pair<std::string, CmpOp>> kOps = {
        {"==", CmpOp::Eq}, {"=", CmpOp::Eq}, {"!=", CmpOp::Ne}, {"<=", CmpOp::Le},
        {"<", CmpOp::Lt},  {">=", CmpOp::Ge}, {">", CmpOp::Gt},
    };
    for (const auto& [text, op] : kOps) {
      if (ts_.accept(text)) return Cond::compare(op, std::move(lhs), ts_.expect_ident("position"));
    }
    return Cond::boolean(std::move(lhs));
  }

  TokenStream ts_;
};

void collect(const Cond& c, std::set<Letter>& out) {
  if (c.kind == Cond::Label) out.insert(c.letter);
  for (const auto& k : c.kids) collect(k, out);
}

void collect(const Stmt& s, std::set<Letter>& out) {
  if (s.kind == Stmt::If) collect(s.cond, out);
  if (s.kind == Stmt::PrintChar) out.insert(s.letter);
  for (const auto& k : s.kids) collect(k, out);
}

}  // namespace

Word eval_simple(const Program& p, const Word& w) { return Runner(w).run(p); }

Metrics metrics(const Program& p) {
  Metrics m;
  measure(p.body, 0, static_cast<int>(p.bools.size()), m);
  return m;
}

Metrics metrics(const hl::Program& p) {
  Metrics total;
  for (const auto& f : p.functions) {
    Metrics m;
    measure(f.body, 0, 0, m);
    total.size += m.size;
    total.loop_depth = std::max(total.loop_depth, m.loop_depth);
    total.bool_depth = std::max(total.bool_depth, m.bool_depth);
  }
  return total;
}

std::string to_string(const Cond& c) { return cond_text(c); }

std::string to_string(const Program& p) {
  std::string out;
  print_decl(p.bools, "", out);
  print(p.body, 0, out);
  return out;
}

Program parse_simple(std::string_view text) { return Parser(text).parse(); }

std::vector<Letter> constants(const Program& p) {
  std::set<Letter> out;
  collect(p.body, out);
  return {out.begin(), out.end()};
}

}  // namespace polycheck::sp
