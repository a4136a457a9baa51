#include "polycheck/hl_ast.hpp"

#include <stdexcept>

namespace polycheck::hl {

CExpr CExpr::character(Letter c) {
  CExpr e;
  e.is_char = true;
  e.ch = c;
  return e;
}

CExpr CExpr::list(std::vector<CExpr> items, int depth) {
  CExpr e;
  e.items = std::move(items);
  e.depth = depth;
  return e;
}

CExpr CExpr::string(const Word& w) {
  std::vector<CExpr> items;
  items.reserve(w.size());
  for (Letter c : w) items.push_back(character(c));
  return list(std::move(items), 1);
}

bool o::List::operator==(const List& other) const { return items == other.items; }
bool s::Seq::operator==(const Seq& other) const { return items == other.items; }

const Function* Program::find(std::string_view name) const {
  for (const auto& f : functions)
    if (f.name == name) return &f;
  return nullptr;
}

const Function& Program::main_function() const {
  if (const Function* f = find(main)) return *f;
  throw std::logic_error("program has no function named '" + main + "'");
}

OExpr ovar(std::string name, int depth) { return OExpr{o::Var{std::move(name)}, depth, {}}; }
OExpr oconst(CExpr c) {
  int d = c.depth;
  return OExpr{o::Const{std::move(c)}, d, {}};
}
OExpr ogen(Stmt body, int depth, int origin) { return OExpr{o::Gen{std::move(body), origin}, depth, {}}; }

BExpr blit(bool v) { return BExpr{b::Lit{v}, {}}; }
BExpr bvar(std::string name) { return BExpr{b::Var{std::move(name)}, {}}; }
BExpr bnot(BExpr e) {
  if (auto* l = std::get_if<b::Lit>(&e.node)) return blit(!l->value);
  return BExpr{b::Not{std::move(e)}, {}};
}
BExpr band(BExpr a, BExpr b) { return BExpr{b::Bin{BoolOp::And, std::move(a), std::move(b)}, {}}; }
BExpr bor(BExpr a, BExpr b) { return BExpr{b::Bin{BoolOp::Or, std::move(a), std::move(b)}, {}}; }
BExpr poscmp(CmpOp op, std::string lhs, std::string rhs) {
  return BExpr{b::PosCmp{op, std::move(lhs), std::move(rhs)}, {}};
}

Stmt skip() { return Stmt{s::Seq{}, {}}; }

Stmt seq(std::vector<Stmt> items) {
  std::vector<Stmt> flat;
  for (auto& st : items) {
    if (auto* inner = std::get_if<s::Seq>(&st.node)) {
      flat.insert(flat.end(), inner->items.begin(), inner->items.end());
    } else {
      flat.push_back(std::move(st));
    }
  }
  if (flat.size() == 1) return std::move(flat.front());
  return Stmt{s::Seq{std::move(flat)}, {}};
}

Stmt if_(BExpr cond, Stmt then_branch, Stmt else_branch) {
  return Stmt{s::If{std::move(cond), std::move(then_branch), std::move(else_branch)}, {}};
}
Stmt yield(OExpr e) { return Stmt{s::Yield{std::move(e)}, {}}; }
Stmt set_true(std::string name) { return Stmt{s::SetTrue{std::move(name)}, {}}; }
Stmt let_bool(std::string name, Stmt body) { return Stmt{s::LetBool{std::move(name), std::move(body)}, {}}; }
Stmt for_(Direction dir, std::string pos, std::string elem, OExpr iter, Stmt body) {
  return Stmt{s::For{dir, std::move(pos), std::move(elem), std::move(iter), std::move(body)}, {}};
}

bool is_skip(const Stmt& st) {
  auto* sq = std::get_if<s::Seq>(&st.node);
  return sq && sq->items.empty();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string type_name(bool is_bool, int depth) {
  if (is_bool) return "Bool";
  std::string s = "Char";
  for (int i = 0; i < depth; ++i) s = "[" + s + "]";
  return s;
}

std::string const_text(const CExpr& c) {
  if (c.is_char) return quote_letter(c.ch);
  if (c.depth == 1) {
    Word w;
    for (const auto& item : c.items) w.push_back(item.ch);
    return quote_word(w);
  }
  std::string s = "[";
  for (std::size_t i = 0; i < c.items.size(); ++i) {
    if (i) s += ", ";
    s += const_text(c.items[i]);
  }
  return s + "]";
}

std::string one_line(const Stmt& st) {
  std::string text = to_string(st, 0);
  std::string out;
  bool space = false;
  for (char ch : text) {
    if (ch == '\n' || ch == ' ') {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += ch;
  }
  return out;
}

std::string args_text(const std::vector<Arg>& args) {
  std::string s;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) s += ", ";
    s += to_string(*args[i].expr);
    if (!args[i].positions.empty()) {
      s += " with (";
      for (std::size_t k = 0; k < args[i].positions.size(); ++k) {
        if (k) s += ", ";
        s += args[i].positions[k];
      }
      s += ")";
    }
  }
  return s;
}

int precedence(BoolOp op) {
  switch (op) {
    case BoolOp::Iff: return 1;
    case BoolOp::Implies: return 2;
    case BoolOp::Or: return 3;
    case BoolOp::And: return 4;
  }
  return 0;
}

const char* op_text(BoolOp op) {
  switch (op) {
    case BoolOp::And: return "and";
    case BoolOp::Or: return "or";
    case BoolOp::Implies: return "=>";
    case BoolOp::Iff: return "<=>";
  }
  return "?";
}

const char* op_text(CmpOp op) {
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

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 2, ' '); }

void print_stmt(const Stmt& st, int indent, std::string& out);

void print_items(const std::vector<Stmt>& items, int indent, std::string& out) {
  for (const auto& item : items) print_stmt(item, indent, out);
}

void print_stmt(const Stmt& st, int indent, std::string& out) {
  const std::string p = pad(indent);
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, s::Seq>) {
          if (n.items.empty()) {
            out += p + "skip\n";
          } else {
            print_items(n.items, indent, out);
          }
        } else if constexpr (std::is_same_v<T, s::If>) {
          out += p + "if " + to_string(n.cond) + " then\n";
          print_stmt(*n.then_branch, indent + 1, out);
          if (!is_skip(*n.else_branch)) {
            out += p + "else\n";
            print_stmt(*n.else_branch, indent + 1, out);
          }
          out += p + "endif\n";
        } else if constexpr (std::is_same_v<T, s::Yield>) {
          out += p + "yield " + to_string(n.value) + "\n";
        } else if constexpr (std::is_same_v<T, s::ReturnOut>) {
          out += p + "return " + to_string(n.value) + "\n";
        } else if constexpr (std::is_same_v<T, s::ReturnBool>) {
          out += p + "return " + to_string(n.value) + "\n";
        } else if constexpr (std::is_same_v<T, s::LetOut>) {
          out += p + "let " + n.name + " := " + to_string(n.value) + " in\n";
          print_stmt(*n.body, indent, out);
        } else if constexpr (std::is_same_v<T, s::LetBool>) {
          out += p + "let mut " + n.name + " := False in\n";
          print_stmt(*n.body, indent, out);
        } else if constexpr (std::is_same_v<T, s::SetTrue>) {
          out += p + n.name + " := True\n";
        } else if constexpr (std::is_same_v<T, s::For>) {
          std::string it = "enumerate(" + to_string(n.iter) + ")";
          if (n.dir == Direction::Backward) it = "reversed(" + it + ")";
          out += p + "for (" + n.pos + ", " + n.elem + ") in " + it + " do\n";
          print_stmt(*n.body, indent + 1, out);
          out += p + "done\n";
        }
      },
      st.node);
}

std::string bexpr_text(const BExpr& e, int ctx);

std::string operand_text(const BExpr& e, BoolOp parent, bool left) {
  if (auto* bin = std::get_if<b::Bin>(&e.node)) {
    const int pc = precedence(bin->op);
    const int pp = precedence(parent);
    // And/Or associate to the left, => and <=> to the right.
    const bool right_assoc = parent == BoolOp::Implies || parent == BoolOp::Iff;
    const bool same_side_ok = bin->op == parent && (left != right_assoc);
    if (pc < pp || (pc == pp && !same_side_ok)) return "(" + bexpr_text(e, 0) + ")";
  }
  return bexpr_text(e, 0);
}

std::string bexpr_text(const BExpr& e, int) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, b::Lit>) {
          return n.value ? "True" : "False";
        } else if constexpr (std::is_same_v<T, b::Var>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, b::Not>) {
          const bool paren = std::holds_alternative<b::Bin>(n.operand->node) ||
                             std::holds_alternative<b::PosCmp>(n.operand->node) ||
                             std::holds_alternative<b::LitEq>(n.operand->node);
          std::string inner = bexpr_text(*n.operand, 0);
          return paren ? "not (" + inner + ")" : "not " + inner;
        } else if constexpr (std::is_same_v<T, b::Bin>) {
          return operand_text(*n.lhs, n.op, true) + " " + op_text(n.op) + " " + operand_text(*n.rhs, n.op, false);
        } else if constexpr (std::is_same_v<T, b::PosCmp>) {
          return n.lhs + " " + op_text(n.op) + " " + n.rhs;
        } else if constexpr (std::is_same_v<T, b::Call>) {
          return n.fn + "(" + args_text(n.args) + ")";
        } else if constexpr (std::is_same_v<T, b::LitEq>) {
          return to_string(*n.lhs) + " == " + to_string(*n.rhs);
        } else {
          return "<? " + one_line(*n.body) + " ?>";
        }
      },
      e.node);
}

}  // namespace

std::string to_string(const OExpr& e) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, o::Var>) {
          return n.name;
        } else if constexpr (std::is_same_v<T, o::Const>) {
          return const_text(n.value);
        } else if constexpr (std::is_same_v<T, o::List>) {
          std::string s = "[";
          for (std::size_t i = 0; i < n.items.size(); ++i) {
            if (i) s += ", ";
            s += to_string(n.items[i]);
          }
          return s + "]";
        } else if constexpr (std::is_same_v<T, o::Call>) {
          return n.fn + "(" + args_text(n.args) + ")";
        } else {
          return "<{ " + one_line(*n.body) + " }>";
        }
      },
      e.node);
}

std::string to_string(const BExpr& e) { return bexpr_text(e, 0); }

std::string to_string(const Stmt& st, int indent) {
  std::string out;
  print_stmt(st, indent, out);
  return out;
}

std::string to_string(const Program& p) {
  std::string out;
  for (std::size_t i = 0; i < p.functions.size(); ++i) {
    const Function& f = p.functions[i];
    if (i) out += "\n";
    out += "def " + f.name + "(";
    for (std::size_t k = 0; k < f.params.size(); ++k) {
      const Param& prm = f.params[k];
      if (k) out += ", ";
      out += prm.name + " : " + type_name(prm.is_bool, prm.depth);
      if (!prm.positions.empty()) {
        out += " with (";
        for (std::size_t j = 0; j < prm.positions.size(); ++j) {
          if (j) out += ", ";
          out += prm.positions[j];
        }
        out += ")";
      }
    }
    out += ") : " + type_name(f.ret.is_bool, f.ret.depth) + " :=\n";
    print_stmt(f.body, 1, out);
  }
  return out;
}

}  // namespace polycheck::hl
