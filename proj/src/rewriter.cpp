#include "polycheck/rewriter.hpp"

#include <map>
#include <set>
#include <stdexcept>

#include "polycheck/frontend.hpp"
#include "rewrite_util.hpp"

namespace polycheck {

using namespace hl;
using detail::Copier;
using detail::Mapper;
using detail::NameSupply;
using detail::Walker;

namespace {

Stmt return_bool(BExpr e) { return Stmt{s::ReturnBool{std::move(e)}, {}}; }

// Rebuilds the statement structure of `st` (not its expressions), applying
// `leaf` to every statement that is not a container.
template <class F>
Stmt map_statements(const Stmt& st, const F& leaf) {
  if (const auto* q = std::get_if<s::Seq>(&st.node)) {
    std::vector<Stmt> items;
    for (const auto& it : q->items) items.push_back(map_statements(it, leaf));
    return seq(std::move(items));
  }
  if (const auto* i = std::get_if<s::If>(&st.node))
    return Stmt{s::If{i->cond, map_statements(*i->then_branch, leaf), map_statements(*i->else_branch, leaf)}, st.span};
  if (const auto* f = std::get_if<s::For>(&st.node))
    return Stmt{s::For{f->dir, f->pos, f->elem, f->iter, map_statements(*f->body, leaf)}, st.span};
  if (const auto* lb = std::get_if<s::LetBool>(&st.node))
    return Stmt{s::LetBool{lb->name, map_statements(*lb->body, leaf)}, st.span};
  if (const auto* lo = std::get_if<s::LetOut>(&st.node))
    return Stmt{s::LetOut{lo->name, lo->value, map_statements(*lo->body, leaf)}, st.span};
  return leaf(st);
}

// True if `st` contains a statement of type T outside generator bodies.
template <class T>
bool has_own(const Stmt& st) {
  bool found = false;
  map_statements(st, [&](const Stmt& leaf) {
    if (std::holds_alternative<T>(leaf.node)) found = true;
    return leaf;
  });
  return found;
}

Program with_main_body(const Program& p, Stmt body) {
  Function m = p.main_function();
  m.body = std::move(body);
  Program out;
  out.main = p.main;
  out.functions.push_back(std::move(m));
  return out;
}

// ---------------------------------------------------------------- pass A

class EqualityEliminator : public Mapper {
 public:
  explicit EqualityEliminator(NameSupply& names) : names_(names) {}

  std::vector<Function> synthesized;

  BExpr bexpr(const BExpr& e) override {
    BExpr d = descend(e);
    const auto* eq = std::get_if<b::LitEq>(&d.node);
    if (eq == nullptr) return d;
    const auto* lc = std::get_if<o::Const>(&eq->lhs->node);
    const auto* rc = std::get_if<o::Const>(&eq->rhs->node);
    if (lc != nullptr && rc != nullptr) return BExpr{b::Lit{lc->value == rc->value}, d.span};
    if (lc == nullptr && rc == nullptr) return d;
    const CExpr& c = rc != nullptr ? rc->value : lc->value;
    if (c.depth == 0) return d;
    const OExpr& other = rc != nullptr ? *eq->lhs : *eq->rhs;
    return BExpr{b::Call{checker(c), {Arg{other, {}}}}, d.span};
  }

 private:
  // def __eq(x) : Bool := one flag per expected item, plus a flag for a
  // mismatch or a surplus item.
  std::string checker(const CExpr& c) {
    const std::string key = to_string(oconst(c));
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::vector<std::string> item_checkers;
    for (const auto& item : c.items) item_checkers.push_back(item.depth > 0 ? checker(item) : std::string());

    const std::string name = names_.fresh("eq");
    const std::string x = names_.fresh("x");
    const std::string i = names_.fresh("i");
    const std::string y = names_.fresh("y");
    const std::string bad = names_.fresh("bad");
    std::vector<std::string> seen;
    for (std::size_t k = 0; k < c.items.size(); ++k) seen.push_back(names_.fresh("seen"));

    Stmt chain = set_true(bad);
    for (std::size_t k = c.items.size(); k-- > 0;) {
      const CExpr& item = c.items[k];
      BExpr test = item.depth == 0 ? BExpr{b::LitEq{ovar(y, 0), oconst(item)}, {}}
                                   : BExpr{b::Call{item_checkers[k], {Arg{ovar(y, c.depth - 1), {}}}}, {}};
      chain = if_(bnot(bvar(seen[k])), if_(std::move(test), set_true(seen[k]), set_true(bad)), std::move(chain));
    }
    BExpr result = bnot(bvar(bad));
    if (!seen.empty()) result = band(bvar(seen.back()), std::move(result));
    Stmt body = seq({for_(Direction::Forward, i, y, ovar(x, c.depth), std::move(chain)), return_bool(std::move(result))});
    body = let_bool(bad, std::move(body));
    for (std::size_t k = seen.size(); k-- > 0;) body = let_bool(seen[k], std::move(body));

    Function f;
    f.name = name;
    f.params.push_back(Param{x, false, c.depth, {}, {}});
    f.ret = ReturnType{true, 0};
    f.body = std::move(body);
    synthesized.push_back(std::move(f));
    cache_[key] = name;
    return name;
  }

  NameSupply& names_;
  std::map<std::string, std::string> cache_;
};

// ---------------------------------------------------------------- pass B

class LiteralEliminator : public Mapper {
 public:
  explicit LiteralEliminator(NameSupply& names) : names_(names) {}

  std::vector<Function> synthesized;

  OExpr oexpr(const OExpr& e) override {
    OExpr d = descend(e);
    if (const auto* c = std::get_if<o::Const>(&d.node); c != nullptr && c->value.depth > 0)
      return OExpr{o::Call{producer(c->value), {}}, c->value.depth, d.span};
    if (const auto* l = std::get_if<o::List>(&d.node)) {
      std::vector<Stmt> items;
      for (const auto& it : l->items) items.push_back(yield(it));
      OExpr g = ogen(seq(std::move(items)), d.depth, names_.fresh_origin());
      g.span = d.span;
      return g;
    }
    return d;
  }

 private:
  std::string producer(const CExpr& c) {
    const std::string key = to_string(oconst(c));
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    std::vector<Stmt> items;
    for (const auto& item : c.items) {
      if (item.depth == 0) {
        items.push_back(yield(oconst(item)));
      } else {
        items.push_back(yield(OExpr{o::Call{producer(item), {}}, item.depth, {}}));
      }
    }
    Function f;
    f.name = names_.fresh("lit");
    f.ret = ReturnType{false, c.depth};
    f.body = seq(std::move(items));
    synthesized.push_back(f);
    cache_[key] = f.name;
    return f.name;
  }

  NameSupply& names_;
  std::map<std::string, std::string> cache_;
};

template <class M>
Program add_synthesized(const Program& p, M& mapper) {
  std::vector<Function> user;
  for (const auto& f : p.functions) {
    Function g = f;
    g.body = mapper.stmt(f.body);
    user.push_back(std::move(g));
  }
  Program out;
  out.main = p.main;
  out.functions = mapper.synthesized;
  out.functions.insert(out.functions.end(), user.begin(), user.end());
  return out;
}

// ---------------------------------------------------------------- pass C

class Inliner : public Mapper {
 public:
  Inliner(NameSupply& names, const Program& p, const std::map<std::string, Stmt>& bodies)
      : names_(names), program_(p), bodies_(bodies) {}

  OExpr oexpr(const OExpr& e) override {
    OExpr d = descend(e);
    const auto* c = std::get_if<o::Call>(&d.node);
    if (c == nullptr) return d;
    const Function& f = callee(c->fn);
    OExpr g = ogen(instantiate(f, c->args), f.ret.depth, names_.fresh_origin());
    g.span = d.span;
    return g;
  }

  BExpr bexpr(const BExpr& e) override {
    BExpr d = descend(e);
    const auto* c = std::get_if<b::Call>(&d.node);
    if (c == nullptr) return d;
    return BExpr{b::Gen{instantiate(callee(c->fn), c->args)}, d.span};
  }

 private:
  const Function& callee(const std::string& name) const {
    const Function* f = program_.find(name);
    if (f == nullptr || bodies_.count(name) == 0) throw std::logic_error("call to unknown function " + name);
    return *f;
  }

  Stmt instantiate(const Function& f, const std::vector<Arg>& args) {
    Copier cp(names_);
    for (std::size_t k = 0; k < f.params.size() && k < args.size(); ++k) {
      cp.replace.insert_or_assign(f.params[k].name, *args[k].expr);
      for (std::size_t m = 0; m < f.params[k].positions.size() && m < args[k].positions.size(); ++m)
        cp.rename[f.params[k].positions[m]] = args[k].positions[m];
    }
    return cp.stmt(bodies_.at(f.name));
  }

  NameSupply& names_;
  const Program& program_;
  const std::map<std::string, Stmt>& bodies_;
};

// ---------------------------------------------------------------- pass D

class BoolGenEliminator : public Mapper {
 public:
  explicit BoolGenEliminator(NameSupply& names) : names_(names) {}

  Stmt stmt(const Stmt& st) override {
    Stmt d = descend(st);
    std::vector<std::pair<std::string, Stmt>> found;
    if (const auto* i = std::get_if<s::If>(&d.node)) {
      BExpr c = extract(i->cond, found);
      if (found.empty()) return d;
      return wrap(found, Stmt{s::If{std::move(c), i->then_branch, i->else_branch}, d.span});
    }
    if (const auto* r = std::get_if<s::ReturnBool>(&d.node)) {
      BExpr c = extract(r->value, found);
      if (found.empty()) return d;
      return wrap(found, Stmt{s::ReturnBool{std::move(c)}, d.span});
    }
    return d;
  }

 private:
  BExpr extract(const BExpr& e, std::vector<std::pair<std::string, Stmt>>& found) {
    if (const auto* n = std::get_if<b::Not>(&e.node)) return BExpr{b::Not{extract(*n->operand, found)}, e.span};
    if (const auto* bin = std::get_if<b::Bin>(&e.node)) {
      BExpr l = extract(*bin->lhs, found);
      BExpr r = extract(*bin->rhs, found);
      return BExpr{b::Bin{bin->op, std::move(l), std::move(r)}, e.span};
    }
    if (const auto* g = std::get_if<b::Gen>(&e.node)) {
      std::string flag = names_.fresh("b");
      std::string done = names_.fresh("r");
      found.emplace_back(flag, let_bool(done, lower(*g->body, flag, done)));
      return bvar(flag);
    }
    return e;
  }

  static Stmt lower(const Stmt& body, const std::string& flag, const std::string& done) {
    return map_statements(body, [&](const Stmt& leaf) {
      const auto* r = std::get_if<s::ReturnBool>(&leaf.node);
      if (r == nullptr) return leaf;
      Stmt effect;
      if (const auto* lit = std::get_if<b::Lit>(&r->value.node)) {
        effect = lit->value ? seq({set_true(flag), set_true(done)}) : set_true(done);
      } else {
        effect = seq({if_(r->value, set_true(flag)), set_true(done)});
      }
      return if_(bnot(bvar(done)), std::move(effect));
    });
  }

  static Stmt wrap(const std::vector<std::pair<std::string, Stmt>>& found, Stmt st) {
    for (std::size_t k = found.size(); k-- > 0;) st = let_bool(found[k].first, seq({found[k].second, std::move(st)}));
    return st;
  }

  NameSupply& names_;
};

// ---------------------------------------------------------------- pass E

class LetEliminator : public Mapper {
 public:
  explicit LetEliminator(NameSupply& names) : names_(names) {}

  Stmt stmt(const Stmt& st) override {
    Stmt d = descend(st);
    const auto* l = std::get_if<s::LetOut>(&d.node);
    if (l == nullptr) return d;
    Copier cp(names_, false);
    cp.replace.insert_or_assign(l->name, l->value);
    return cp.stmt(*l->body);
  }

 private:
  NameSupply& names_;
};

// ---------------------------------------------------------------- pass F

class ReturnEliminator : public Mapper {
 public:
  explicit ReturnEliminator(NameSupply& names) : names_(names) {}

  OExpr oexpr(const OExpr& e) override {
    OExpr d = descend(e);
    const auto* g = std::get_if<o::Gen>(&d.node);
    if (g == nullptr || d.depth < 1) return d;
    return OExpr{o::Gen{guard(*g->body, d.depth), g->origin}, d.depth, d.span};
  }

  Stmt stmt(const Stmt& st) override {
    Stmt d = descend(st);
    if (const auto* y = std::get_if<s::Yield>(&d.node)) return yield_char(y->value);
    return d;
  }

  Stmt guard(const Stmt& body, int depth) {
    if (!has_own<s::ReturnOut>(body)) return body;
    const std::string done = names_.fresh("r");
    Stmt guarded = map_statements(body, [&](const Stmt& leaf) {
      if (std::holds_alternative<s::Yield>(leaf.node)) return if_(bnot(bvar(done)), leaf);
      const auto* r = std::get_if<s::ReturnOut>(&leaf.node);
      if (r == nullptr) return leaf;
      const std::string i = names_.fresh("i");
      const std::string x = names_.fresh("x");
      Stmt copy = for_(Direction::Forward, i, x, r->value, yield(ovar(x, depth - 1)));
      return if_(bnot(bvar(done)), seq({std::move(copy), set_true(done)}));
    });
    return let_bool(done, std::move(guarded));
  }

 private:
  // `yield e` where e may be a character-valued generator: its first return
  // becomes the yield.
  Stmt yield_char(const OExpr& e) {
    const auto* g = std::get_if<o::Gen>(&e.node);
    if (g == nullptr || e.depth != 0) return yield(e);
    const std::string done = names_.fresh("r");
    Stmt lowered = map_statements(*g->body, [&](const Stmt& leaf) {
      const auto* r = std::get_if<s::ReturnOut>(&leaf.node);
      if (r == nullptr) return leaf;
      return if_(bnot(bvar(done)), seq({yield_char(r->value), set_true(done)}));
    });
    return let_bool(done, std::move(lowered));
  }

  NameSupply& names_;
};

void reject_char_generators(const Program& p) {
  Walker w;
  w.on_oexpr = [](const OExpr& e) {
    if (std::holds_alternative<o::Gen>(e.node) && e.depth == 0)
      throw CompileError(ErrorCategory::ReturnDepthZero, e.span,
                         "a character-valued function call is used outside a yield");
  };
  w.on_stmt = [](const Stmt& st) {
    if (std::holds_alternative<s::ReturnOut>(st.node))
      throw CompileError(ErrorCategory::ReturnDepthZero, st.span, "return of a character outside a yield");
  };
  w.walk(p);
}

// ---------------------------------------------------------------- pass H

Stmt hoist(const Stmt& st, std::vector<std::string>& acc);

Stmt declare(const std::vector<std::string>& names, Stmt body) {
  for (std::size_t k = names.size(); k-- > 0;) body = let_bool(names[k], std::move(body));
  return body;
}

Stmt hoist(const Stmt& st, std::vector<std::string>& acc) {
  if (const auto* lb = std::get_if<s::LetBool>(&st.node)) {
    acc.push_back(lb->name);
    return hoist(*lb->body, acc);
  }
  if (const auto* f = std::get_if<s::For>(&st.node)) {
    std::vector<std::string> inner;
    Stmt body = hoist(*f->body, inner);
    return Stmt{s::For{f->dir, f->pos, f->elem, f->iter, declare(inner, std::move(body))}, st.span};
  }
  if (const auto* q = std::get_if<s::Seq>(&st.node)) {
    std::vector<Stmt> items;
    for (const auto& it : q->items) items.push_back(hoist(it, acc));
    return seq(std::move(items));
  }
  if (const auto* i = std::get_if<s::If>(&st.node))
    return Stmt{s::If{i->cond, hoist(*i->then_branch, acc), hoist(*i->else_branch, acc)}, st.span};
  if (const auto* lo = std::get_if<s::LetOut>(&st.node))
    return Stmt{s::LetOut{lo->name, lo->value, hoist(*lo->body, acc)}, st.span};
  return st;
}

// ---------------------------------------------------------------- conversion

class SimpleConverter {
 public:
  explicit SimpleConverter(std::string input) : input_(std::move(input)) {}

  sp::Program program(const Stmt& body) {
    sp::Program p;
    p.body = stmt(peel(body, p.bools));
    return p;
  }

 private:
  static const Stmt& peel(const Stmt& st, std::vector<std::string>& bools) {
    const Stmt* cur = &st;
    while (const auto* lb = std::get_if<s::LetBool>(&cur->node)) {
      bools.push_back(lb->name);
      cur = &lb->body.get();
    }
    return *cur;
  }

  sp::Stmt stmt(const Stmt& st) {
    if (const auto* q = std::get_if<s::Seq>(&st.node)) {
      std::vector<sp::Stmt> items;
      for (const auto& it : q->items) items.push_back(stmt(it));
      return sp::Stmt::seq(std::move(items));
    }
    if (const auto* i = std::get_if<s::If>(&st.node))
      return sp::Stmt::if_(cond(i->cond), stmt(*i->then_branch), stmt(*i->else_branch));
    if (const auto* f = std::get_if<s::For>(&st.node)) {
      const auto* v = std::get_if<o::Var>(&f->iter.node);
      if (v == nullptr || v->name != input_) throw std::logic_error("loop over a value other than the input");
      elem_pos_[f->elem] = f->pos;
      std::vector<std::string> bools;
      const Stmt& body = peel(*f->body, bools);
      return sp::Stmt::loop(f->dir, f->pos, std::move(bools), stmt(body));
    }
    if (const auto* t = std::get_if<s::SetTrue>(&st.node)) return sp::Stmt::set_true(t->name);
    if (const auto* y = std::get_if<s::Yield>(&st.node)) {
      if (const auto* c = std::get_if<o::Const>(&y->value.node); c != nullptr && c->value.is_char)
        return sp::Stmt::print_char(c->value.ch);
      return sp::Stmt::print_label(position_of(y->value));
    }
    throw std::logic_error("statement not allowed in a simple program: " + to_string(st));
  }

  std::string position_of(const OExpr& e) const {
    const auto* v = std::get_if<o::Var>(&e.node);
    if (v == nullptr) throw std::logic_error("expected a loop element: " + to_string(e));
    auto it = elem_pos_.find(v->name);
    if (it == elem_pos_.end()) throw std::logic_error("unknown loop element " + v->name);
    return it->second;
  }

  sp::Cond cond(const BExpr& e) {
    if (const auto* l = std::get_if<b::Lit>(&e.node)) return sp::Cond::constant(l->value);
    if (const auto* v = std::get_if<b::Var>(&e.node)) return sp::Cond::boolean(v->name);
    if (const auto* n = std::get_if<b::Not>(&e.node)) return sp::Cond::negation(cond(*n->operand));
    if (const auto* c = std::get_if<b::PosCmp>(&e.node)) return sp::Cond::compare(c->op, c->lhs, c->rhs);
    if (const auto* bin = std::get_if<b::Bin>(&e.node)) {
      sp::Cond l = cond(*bin->lhs);
      sp::Cond r = cond(*bin->rhs);
      switch (bin->op) {
        case BoolOp::And: return sp::Cond::conjunction(std::move(l), std::move(r));
        case BoolOp::Or: return sp::Cond::disjunction(std::move(l), std::move(r));
        case BoolOp::Implies: return sp::Cond::disjunction(sp::Cond::negation(std::move(l)), std::move(r));
        case BoolOp::Iff:
          return sp::Cond::disjunction(sp::Cond::conjunction(l, r),
                                       sp::Cond::conjunction(sp::Cond::negation(l), sp::Cond::negation(r)));
      }
    }
    if (const auto* eq = std::get_if<b::LitEq>(&e.node)) {
      const auto* lc = std::get_if<o::Const>(&eq->lhs->node);
      const auto* rc = std::get_if<o::Const>(&eq->rhs->node);
      if (lc != nullptr && rc != nullptr) return sp::Cond::constant(lc->value == rc->value);
      if (lc != nullptr) return sp::Cond::label(position_of(*eq->rhs), lc->value.ch);
      if (rc != nullptr) return sp::Cond::label(position_of(*eq->lhs), rc->value.ch);
    }
    throw std::logic_error("condition not allowed in a simple program: " + to_string(e));
  }

  std::string input_;
  std::map<std::string, std::string> elem_pos_;
};

bool needs_inlining(const Program& p) {
  if (p.functions.size() > 1) return true;
  bool found = false;
  Walker w;
  w.on_oexpr = [&](const OExpr& e) { found = found || std::holds_alternative<o::Call>(e.node); };
  w.on_bexpr = [&](const BExpr& e) {
    found = found || std::holds_alternative<b::Call>(e.node) || std::holds_alternative<b::Gen>(e.node);
  };
  w.on_stmt = [&](const Stmt& st) { found = found || std::holds_alternative<s::LetOut>(st.node); };
  w.walk(p);
  return found;
}

}  // namespace

Program pass_A_elim_literal_equalities(const Program& p) {
  NameSupply names(p);
  EqualityEliminator m(names);
  return add_synthesized(p, m);
}

Program pass_B_elim_literal_productions(const Program& p) {
  NameSupply names(p);
  LiteralEliminator m(names);
  return add_synthesized(p, m);
}

Program pass_C_elim_function_calls(const Program& p) {
  NameSupply names(p);
  std::map<std::string, Stmt> bodies;
  for (const auto& f : p.functions) {
    Inliner m(names, p, bodies);
    bodies[f.name] = m.stmt(f.body);
  }
  return with_main_body(p, bodies.at(p.main_function().name));
}

Program pass_D_elim_boolean_generators(const Program& p) {
  NameSupply names(p);
  BoolGenEliminator m(names);
  Program out = p;
  for (auto& f : out.functions) f.body = m.stmt(f.body);
  return out;
}

Program pass_E_elim_let_output(const Program& p) {
  NameSupply names(p);
  LetEliminator m(names);
  Program out = p;
  for (auto& f : out.functions) f.body = m.stmt(f.body);
  return out;
}

Program pass_F_elim_returns(const Program& p) {
  NameSupply names(p);
  ReturnEliminator m(names);
  Program out = p;
  for (auto& f : out.functions) {
    Stmt body = m.stmt(f.body);
    f.body = f.ret.is_bool ? body : m.guard(body, f.ret.depth);
  }
  reject_char_generators(out);
  return out;
}

Program pass_H_hoist_booleans(const Program& p) {
  Program out = p;
  for (auto& f : out.functions) {
    std::vector<std::string> top;
    Stmt body = hoist(f.body, top);
    f.body = declare(top, std::move(body));
  }
  return out;
}

sp::Program to_simple(const Program& p) {
  const Function& m = p.main_function();
  if (m.params.size() != 1) throw std::logic_error("main must take exactly one list");
  SimpleConverter conv(m.params.front().name);
  return conv.program(m.body);
}

std::size_t ast_size(const Program& p) {
  std::size_t n = 0;
  Walker w;
  w.on_stmt = [&](const Stmt&) { ++n; };
  w.on_oexpr = [&](const OExpr&) { ++n; };
  w.on_bexpr = [&](const BExpr&) { ++n; };
  w.walk(p);
  return n;
}

RewriteResult rewrite_to_simple(const Program& typed) {
  const Function& m = typed.main_function();
  const bool word_to_word = m.params.size() == 1 && !m.params[0].is_bool && m.params[0].depth == 1 &&
                            m.params[0].positions.empty() && !m.ret.is_bool && m.ret.depth == 1;
  if (!word_to_word)
    throw CompileError(ErrorCategory::Type, m.span,
                       "main function must have type (Out[1], 0) -> Out[1], found " + signature(m));

  using PassFn = Program (*)(const Program&);
  RewriteResult result;
  Program cur = typed;
  auto run = [&](char id, PassFn fn) {
    PassReport rep;
    rep.pass = id;
    rep.input_size = ast_size(cur);
    const auto before = detail::reserved_names(cur);
    Program next = typecheck_program(fn(cur));
    rep.output_size = ast_size(next);
    const std::set<std::string> old(before.begin(), before.end());
    for (const auto& n : detail::reserved_names(next))
      if (old.count(n) == 0) rep.fresh_names.push_back(n);
    std::erase_if(result.stages, [&](const auto& st) { return st.first == id; });
    std::erase_if(result.reports, [&](const auto& r) { return r.pass == id; });
    result.stages.emplace_back(id, next);
    result.reports.push_back(std::move(rep));
    cur = std::move(next);
  };

  run('A', pass_A_elim_literal_equalities);
  run('B', pass_B_elim_literal_productions);
  for (int round = 0; round == 0 || (round < 8 && needs_inlining(cur)); ++round) {
    run('C', pass_C_elim_function_calls);
    run('D', pass_D_elim_boolean_generators);
    run('E', pass_E_elim_let_output);
  }
  if (needs_inlining(cur)) throw std::logic_error("inlining did not reach a fixpoint");
  run('F', pass_F_elim_returns);
  run('G', pass_G_expand_loops);
  run('H', pass_H_hoist_booleans);
  result.simple = to_simple(cur);
  return result;
}

}  // namespace polycheck
