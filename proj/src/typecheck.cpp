#include <map>

#include "polycheck/frontend.hpp"

namespace polycheck {

namespace {

using namespace hl;

struct Entry {
  enum Kind { List, Pos, Bool } kind;
  int depth = 0;       // List
  std::string origin;  // List: own binding; Pos: binding of the iterated list
  bool hidden = false;
};

[[noreturn]] void error(ErrorCategory c, SourceSpan span, const std::string& msg) { throw CompileError(c, span, msg); }

std::string out_type(int depth) { return "Out[" + std::to_string(depth) + "]"; }

class Checker {
 public:
  explicit Checker(const Program& p) : prog_(p) {}

  Program run() {
    Program out;
    out.main = prog_.main;
    for (std::size_t i = 0; i < prog_.functions.size(); ++i) {
      for (std::size_t k = 0; k < i; ++k)
        if (prog_.functions[k].name == prog_.functions[i].name)
          error(ErrorCategory::Shadowing, prog_.functions[i].span,
                "function '" + prog_.functions[i].name + "' is defined twice");
      visible_ = i;
      out.functions.push_back(check_function(prog_.functions[i]));
    }
    if (!out.find(out.main)) error(ErrorCategory::UnknownName, {}, "no function named '" + out.main + "'");
    return out;
  }

 private:
  // Scope handling --------------------------------------------------------

  const Entry* lookup(const std::string& n) const {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == n) return &it->second;
    return nullptr;
  }

  void bind(const std::string& n, Entry e, SourceSpan span) {
    if (const Entry* old = lookup(n)) {
      if (old->kind == Entry::Bool && e.kind == Entry::Bool)
        error(ErrorCategory::BooleanReset, span, "boolean '" + n + "' is declared again");
      error(ErrorCategory::Shadowing, span, "'" + n + "' shadows a variable already in scope");
    }
    scope_.emplace_back(n, std::move(e));
  }

  std::string fresh_origin() { return "#" + std::to_string(counter_++); }

  const Function& callee(const std::string& fn, SourceSpan span) const {
    for (std::size_t k = 0; k < visible_; ++k)
      if (prog_.functions[k].name == fn) return prog_.functions[k];
    for (std::size_t k = visible_; k < prog_.functions.size(); ++k)
      if (prog_.functions[k].name == fn)
        error(ErrorCategory::WhileOrRecursion, span,
              "call to '" + fn + "', which is not defined before this point (recursion is not allowed)");
    error(ErrorCategory::WhileOrRecursion, span, "call to unknown function '" + fn + "'");
  }

  // Functions -------------------------------------------------------------

  Function check_function(const Function& f) {
    scope_.clear();
    Function out = f;
    for (const Param& prm : f.params) {
      if (prm.is_bool)
        error(ErrorCategory::BooleanArgument, prm.span,
              "parameter '" + prm.name + "' of '" + f.name + "' is a boolean; functions cannot take booleans");
      std::string origin = fresh_origin();
      bind(prm.name, Entry{Entry::List, prm.depth, origin}, prm.span);
      if (!prm.positions.empty() && prm.depth < 1)
        error(ErrorCategory::Type, prm.span, "positions attached to a character parameter");
      for (const auto& pos : prm.positions) bind(pos, Entry{Entry::Pos, 0, origin}, prm.span);
    }
    out.body = check_stmt(f.body, f.ret);
    return out;
  }

  std::vector<Arg> check_args(const Function& fn, const std::vector<Arg>& args, SourceSpan span) {
    if (args.size() != fn.params.size())
      error(ErrorCategory::Type, span,
            "'" + fn.name + "' expects " + std::to_string(fn.params.size()) + " arguments, got " +
                std::to_string(args.size()));
    std::vector<Arg> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
      const Param& prm = fn.params[i];
      auto [e, origin] = check_oexpr(*args[i].expr);
      if (e.depth != prm.depth)
        error(ErrorCategory::Type, args[i].expr->span,
              "argument " + std::to_string(i + 1) + " of '" + fn.name + "' has type " + out_type(e.depth) +
                  ", expected " + out_type(prm.depth));
      if (args[i].positions.size() != prm.positions.size())
        error(ErrorCategory::Type, args[i].expr->span,
              "argument " + std::to_string(i + 1) + " of '" + fn.name + "' needs " +
                  std::to_string(prm.positions.size()) + " positions");
      for (const auto& pos : args[i].positions) {
        const Entry* en = lookup(pos);
        if (!en) error(ErrorCategory::UnknownName, args[i].expr->span, "unknown position '" + pos + "'");
        if (en->kind != Entry::Pos) error(ErrorCategory::Type, args[i].expr->span, "'" + pos + "' is not a position");
        if (en->origin != origin)
          error(ErrorCategory::CrossListComparison, args[i].expr->span,
                "position '" + pos + "' does not belong to the list it is passed with");
      }
      out.push_back(Arg{std::move(e), args[i].positions});
    }
    return out;
  }

  // Expressions -----------------------------------------------------------

  std::pair<OExpr, std::string> check_oexpr(const OExpr& e) {
    OExpr out = e;
    std::string origin;
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, o::Var>) {
            const Entry* en = lookup(n.name);
            if (!en || en->hidden) error(ErrorCategory::UnknownName, e.span, "unknown variable '" + n.name + "'");
            if (en->kind != Entry::List)
              error(ErrorCategory::Type, e.span, "'" + n.name + "' is not a list or character variable");
            out.depth = en->depth;
            origin = en->origin;
          } else if constexpr (std::is_same_v<T, o::Const>) {
            out.depth = const_depth(n.value, e.span);
            origin = fresh_origin();
          } else if constexpr (std::is_same_v<T, o::List>) {
            std::vector<OExpr> items;
            int d = -1;
            for (const auto& it : n.items) {
              auto [ti, unused] = check_oexpr(it);
              if (d >= 0 && ti.depth != d) error(ErrorCategory::Type, it.span, "list elements of different depths");
              d = ti.depth;
              items.push_back(std::move(ti));
            }
            if (d < 0) error(ErrorCategory::Type, e.span, "empty list expression");
            out.node = o::List{std::move(items)};
            out.depth = d + 1;
            origin = fresh_origin();
          } else if constexpr (std::is_same_v<T, o::Call>) {
            const Function& fn = callee(n.fn, e.span);
            if (fn.ret.is_bool) error(ErrorCategory::Type, e.span, "'" + n.fn + "' returns a boolean, not a list");
            out.node = o::Call{n.fn, check_args(fn, n.args, e.span)};
            out.depth = fn.ret.depth;
            origin = fresh_origin();
          } else {
            if (e.depth < 0) error(ErrorCategory::Type, e.span, "generator without a depth");
            Stmt body = hidden_booleans([&] { return check_stmt(*n.body, ReturnType{false, e.depth}); });
            out.node = o::Gen{std::move(body), n.origin};
            origin = "gen" + std::to_string(n.origin);
          }
        },
        e.node);
    return {std::move(out), origin};
  }

  int const_depth(const CExpr& c, SourceSpan span) {
    if (c.is_char) return 0;
    for (const auto& it : c.items)
      if (const_depth(it, span) != c.depth - 1) error(ErrorCategory::Type, span, "constant list of mixed depths");
    return c.depth;
  }

  template <class F>
  auto hidden_booleans(F&& body) {
    std::vector<std::size_t> hid;
    for (std::size_t i = 0; i < scope_.size(); ++i)
      if (scope_[i].second.kind == Entry::Bool && !scope_[i].second.hidden) {
        scope_[i].second.hidden = true;
        hid.push_back(i);
      }
    auto result = body();
    for (std::size_t i : hid) scope_[i].second.hidden = false;
    return result;
  }

  const Entry& position(const std::string& n, SourceSpan span) {
    const Entry* en = lookup(n);
    if (!en) error(ErrorCategory::UnknownName, span, "unknown position '" + n + "'");
    if (en->kind != Entry::Pos) error(ErrorCategory::Type, span, "'" + n + "' is not a position");
    return *en;
  }

  BExpr check_bexpr(const BExpr& e) {
    BExpr out = e;
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, b::Lit>) {
          } else if constexpr (std::is_same_v<T, b::Var>) {
            const Entry* en = lookup(n.name);
            if (!en || en->hidden) error(ErrorCategory::UnknownName, e.span, "unknown boolean '" + n.name + "'");
            if (en->kind != Entry::Bool) error(ErrorCategory::Type, e.span, "'" + n.name + "' is not a boolean");
          } else if constexpr (std::is_same_v<T, b::Not>) {
            out.node = b::Not{check_bexpr(*n.operand)};
          } else if constexpr (std::is_same_v<T, b::Bin>) {
            BExpr l = check_bexpr(*n.lhs);
            BExpr r = check_bexpr(*n.rhs);
            out.node = b::Bin{n.op, std::move(l), std::move(r)};
          } else if constexpr (std::is_same_v<T, b::PosCmp>) {
            const Entry& l = position(n.lhs, e.span);
            const Entry& r = position(n.rhs, e.span);
            if (l.origin != r.origin)
              error(ErrorCategory::CrossListComparison, e.span,
                    "'" + n.lhs + "' and '" + n.rhs + "' are positions of different lists");
          } else if constexpr (std::is_same_v<T, b::Call>) {
            const Function& fn = callee(n.fn, e.span);
            if (!fn.ret.is_bool) error(ErrorCategory::Type, e.span, "'" + n.fn + "' does not return a boolean");
            out.node = b::Call{n.fn, check_args(fn, n.args, e.span)};
          } else if constexpr (std::is_same_v<T, b::LitEq>) {
            auto [l, lo] = check_oexpr(*n.lhs);
            auto [r, ro] = check_oexpr(*n.rhs);
            const bool lc = std::holds_alternative<o::Const>(l.node);
            const bool rc = std::holds_alternative<o::Const>(r.node);
            if (!lc && !rc)
              error(ErrorCategory::NestedWordEquality, e.span,
                    "equality between two non-constant expressions; one side must be a constant");
            if (l.depth != r.depth)
              error(ErrorCategory::Type, e.span,
                    "comparing " + out_type(l.depth) + " with " + out_type(r.depth));
            out.node = b::LitEq{std::move(l), std::move(r)};
          } else {
            Stmt body = hidden_booleans([&] { return check_stmt(*n.body, ReturnType{true, 0}); });
            out.node = b::Gen{std::move(body)};
          }
        },
        e.node);
    return out;
  }

  // Statements ------------------------------------------------------------

  Stmt check_stmt(const Stmt& st, const ReturnType& ret) {
    Stmt out = st;
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, s::Seq>) {
            std::vector<Stmt> items;
            for (const auto& it : n.items) items.push_back(check_stmt(it, ret));
            out.node = s::Seq{std::move(items)};
          } else if constexpr (std::is_same_v<T, s::If>) {
            BExpr c = check_bexpr(n.cond);
            Stmt t = check_stmt(*n.then_branch, ret);
            Stmt f = check_stmt(*n.else_branch, ret);
            out.node = s::If{std::move(c), std::move(t), std::move(f)};
          } else if constexpr (std::is_same_v<T, s::Yield>) {
            if (ret.is_bool) error(ErrorCategory::Type, st.span, "yield in a function returning Bool");
            if (ret.depth < 1) error(ErrorCategory::Type, st.span, "yield in a function returning a character");
            auto [v, unused] = check_oexpr(n.value);
            if (v.depth != ret.depth - 1)
              error(ErrorCategory::Type, st.span,
                    "yielding " + out_type(v.depth) + " in a function returning " + out_type(ret.depth));
            out.node = s::Yield{std::move(v)};
          } else if constexpr (std::is_same_v<T, s::ReturnOut>) {
            if (ret.is_bool) error(ErrorCategory::Type, st.span, "returning a list from a function returning Bool");
            auto [v, unused] = check_oexpr(n.value);
            if (v.depth != ret.depth)
              error(ErrorCategory::Type, st.span,
                    "returning " + out_type(v.depth) + " from a function returning " + out_type(ret.depth));
            out.node = s::ReturnOut{std::move(v)};
          } else if constexpr (std::is_same_v<T, s::ReturnBool>) {
            if (!ret.is_bool) error(ErrorCategory::Type, st.span, "returning a boolean from a list function");
            out.node = s::ReturnBool{check_bexpr(n.value)};
          } else if constexpr (std::is_same_v<T, s::LetOut>) {
            auto [v, unused] = check_oexpr(n.value);
            const std::size_t mark = scope_.size();
            bind(n.name, Entry{Entry::List, v.depth, fresh_origin()}, st.span);
            Stmt body = check_stmt(*n.body, ret);
            scope_.resize(mark);
            out.node = s::LetOut{n.name, std::move(v), std::move(body)};
          } else if constexpr (std::is_same_v<T, s::LetBool>) {
            const std::size_t mark = scope_.size();
            bind(n.name, Entry{Entry::Bool, 0, {}}, st.span);
            Stmt body = check_stmt(*n.body, ret);
            scope_.resize(mark);
            out.node = s::LetBool{n.name, std::move(body)};
          } else if constexpr (std::is_same_v<T, s::SetTrue>) {
            const Entry* en = lookup(n.name);
            if (!en || en->hidden) error(ErrorCategory::UnknownName, st.span, "unknown boolean '" + n.name + "'");
            if (en->kind != Entry::Bool)
              error(ErrorCategory::MutationViolation, st.span, "'" + n.name + "' is not a mutable boolean");
          } else if constexpr (std::is_same_v<T, s::For>) {
            auto [it, origin] = check_oexpr(n.iter);
            if (it.depth < 1) error(ErrorCategory::Type, st.span, "iterating over a character");
            if (n.pos == n.elem) error(ErrorCategory::Shadowing, st.span, "loop binds '" + n.pos + "' twice");
            const std::size_t mark = scope_.size();
            bind(n.pos, Entry{Entry::Pos, 0, origin}, st.span);
            bind(n.elem, Entry{Entry::List, it.depth - 1, fresh_origin()}, st.span);
            Stmt body = check_stmt(*n.body, ret);
            scope_.resize(mark);
            out.node = s::For{n.dir, n.pos, n.elem, std::move(it), std::move(body)};
          }
        },
        st.node);
    return out;
  }

  const Program& prog_;
  std::size_t visible_ = 0;
  std::vector<std::pair<std::string, Entry>> scope_;
  int counter_ = 0;
};

}  // namespace

hl::Program typecheck_program(const hl::Program& p) { return Checker(p).run(); }

std::string signature(const hl::Function& f) {
  std::string s = f.params.empty() ? "()" : "";
  for (std::size_t i = 0; i < f.params.size(); ++i) {
    if (i) s += " * ";
    const auto& prm = f.params[i];
    s += prm.is_bool ? "Bool" : "(" + out_type(prm.depth) + ", " + std::to_string(prm.positions.size()) + ")";
  }
  s += " -> ";
  s += f.ret.is_bool ? "Bool" : out_type(f.ret.depth);
  return s;
}

}  // namespace polycheck
