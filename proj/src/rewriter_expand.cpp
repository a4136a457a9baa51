// Pass G: loops over generators are replaced by the generator body, with
// the loop body substituted at each yield.
//
// A position variable of an expanded loop no longer exists at run time. It
// is represented by an address: the yield statement that produced the
// element and the loop variables enclosing that yield. The order of two
// elements is the order of their yield events, which compares the values of
// the shared enclosing loops lexicographically and falls back to source
// order of the yields.

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

#include "polycheck/rewriter.hpp"
#include "rewrite_util.hpp"

namespace polycheck {

using namespace hl;
using detail::conj;
using detail::Copier;
using detail::disj;
using detail::fresh_copy;
using detail::NameSupply;

namespace {

struct LoopRef {
  int id = 0;  // pre-order index among the loops of the generator body
  std::string var;
  Direction dir = Direction::Forward;
};

struct Address {
  int yield_id = 0;  // pre-order index among the yields of the generator body
  std::vector<LoopRef> loops;
};

using YieldFn = std::function<Stmt(int, const OExpr&, const std::vector<LoopRef>&)>;

// Replaces every yield of `st` (outside expressions) by fn(yield id, value,
// enclosing loops). Loops and yields are numbered in pre-order.
class YieldReplacer {
 public:
  explicit YieldReplacer(YieldFn fn) : fn_(std::move(fn)) {}

  Stmt run(const Stmt& st) {
    if (const auto* q = std::get_if<s::Seq>(&st.node)) {
      std::vector<Stmt> items;
      for (const auto& it : q->items) items.push_back(run(it));
      return seq(std::move(items));
    }
    if (const auto* i = std::get_if<s::If>(&st.node)) {
      Stmt t = run(*i->then_branch);
      Stmt e = run(*i->else_branch);
      return Stmt{s::If{i->cond, std::move(t), std::move(e)}, st.span};
    }
    if (const auto* lb = std::get_if<s::LetBool>(&st.node)) return let_bool(lb->name, run(*lb->body));
    if (const auto* f = std::get_if<s::For>(&st.node)) {
      stack_.push_back(LoopRef{loops_++, f->pos, f->dir});
      Stmt body = run(*f->body);
      stack_.pop_back();
      return Stmt{s::For{f->dir, f->pos, f->elem, f->iter, std::move(body)}, st.span};
    }
    if (const auto* y = std::get_if<s::Yield>(&st.node)) return fn_(yields_++, y->value, stack_);
    return st;
  }

 private:
  YieldFn fn_;
  int loops_ = 0;
  int yields_ = 0;
  std::vector<LoopRef> stack_;
};

Direction flip(Direction d) { return d == Direction::Forward ? Direction::Backward : Direction::Forward; }

class Expander {
 public:
  Expander(NameSupply& names, std::string input) : names_(names), input_(std::move(input)) {}

  Stmt expand(const Stmt& st) {
    if (const auto* q = std::get_if<s::Seq>(&st.node)) {
      std::vector<Stmt> items;
      for (const auto& it : q->items) items.push_back(expand(it));
      return seq(std::move(items));
    }
    if (const auto* i = std::get_if<s::If>(&st.node))
      return Stmt{s::If{compile(i->cond), expand(*i->then_branch), expand(*i->else_branch)}, st.span};
    if (const auto* lb = std::get_if<s::LetBool>(&st.node)) return let_bool(lb->name, expand(*lb->body));
    if (const auto* f = std::get_if<s::For>(&st.node)) {
      if (const auto* v = std::get_if<o::Var>(&f->iter.node); v != nullptr && v->name == input_)
        return Stmt{s::For{f->dir, f->pos, f->elem, f->iter, expand(*f->body)}, st.span};
      if (std::holds_alternative<o::Gen>(f->iter.node)) return expand_generator_loop(*f);
      throw std::logic_error("loop over an unexpected expression: " + to_string(f->iter));
    }
    if (std::holds_alternative<s::Yield>(st.node) || std::holds_alternative<s::SetTrue>(st.node)) return st;
    throw std::logic_error("statement not expected after return elimination: " + to_string(st));
  }

 private:
  Stmt expand_generator_loop(const s::For& f) {
    const auto& g = std::get<o::Gen>(f.iter.node);
    Stmt body = expand(fresh_copy(*g.body, names_));
    if (f.dir == Direction::Forward) {
      YieldReplacer rep([&](int id, const OExpr& v, const std::vector<LoopRef>& loops) {
        return instantiate(f, v, Address{id, loops});
      });
      return rep.run(body);
    }
    int loops = 0;
    int yields = 0;
    std::map<int, std::string> rev_vars;
    return reverse(f, body, body, loops, yields, rev_vars);
  }

  // Enumerates the yield points of `st` in reverse execution order. At each
  // yield point a copy of the whole generator body runs, and only the
  // matching yield of the copy, at equal loop values, fires.
  Stmt reverse(const s::For& f, const Stmt& gen_body, const Stmt& st, int& loops, int& yields,
               std::map<int, std::string>& rev_vars) {
    if (const auto* q = std::get_if<s::Seq>(&st.node)) {
      std::vector<Stmt> items;
      for (const auto& it : q->items) items.push_back(reverse(f, gen_body, it, loops, yields, rev_vars));
      std::reverse(items.begin(), items.end());
      return seq(std::move(items));
    }
    if (const auto* i = std::get_if<s::If>(&st.node)) {
      Stmt t = reverse(f, gen_body, *i->then_branch, loops, yields, rev_vars);
      Stmt e = reverse(f, gen_body, *i->else_branch, loops, yields, rev_vars);
      return seq({std::move(e), std::move(t)});
    }
    if (const auto* lb = std::get_if<s::LetBool>(&st.node))
      return reverse(f, gen_body, *lb->body, loops, yields, rev_vars);
    if (const auto* l = std::get_if<s::For>(&st.node)) {
      const int id = loops++;
      std::string pos = names_.fresh(l->pos);
      std::string elem = names_.fresh(l->elem);
      rev_vars[id] = pos;
      Stmt body = reverse(f, gen_body, *l->body, loops, yields, rev_vars);
      return for_(flip(l->dir), pos, elem, l->iter, std::move(body));
    }
    if (std::holds_alternative<s::Yield>(st.node)) {
      const int target = yields++;
      YieldReplacer rep([&](int id, const OExpr& v, const std::vector<LoopRef>& enclosing) {
        if (id != target) return skip();
        BExpr guard = blit(true);
        for (const auto& lr : enclosing) guard = conj(std::move(guard), poscmp(CmpOp::Eq, lr.var, rev_vars.at(lr.id)));
        return if_(std::move(guard), instantiate(f, v, Address{id, enclosing}));
      });
      return rep.run(fresh_copy(gen_body, names_));
    }
    return skip();
  }

  Stmt instantiate(const s::For& f, const OExpr& value, Address addr) {
    std::string pos = names_.fresh(f.pos);
    addresses_[pos] = std::move(addr);
    Copier cp(names_);
    cp.replace.insert_or_assign(f.elem, value);
    cp.rename[f.pos] = pos;
    return expand(cp.stmt(*f.body));
  }

  BExpr compile(const BExpr& e) {
    if (const auto* n = std::get_if<b::Not>(&e.node)) return bnot(compile(*n->operand));
    if (const auto* bin = std::get_if<b::Bin>(&e.node))
      return BExpr{b::Bin{bin->op, compile(*bin->lhs), compile(*bin->rhs)}, e.span};
    const auto* c = std::get_if<b::PosCmp>(&e.node);
    if (c == nullptr) return e;
    auto l = addresses_.find(c->lhs);
    auto r = addresses_.find(c->rhs);
    if (l == addresses_.end() && r == addresses_.end()) return e;
    if (l == addresses_.end() || r == addresses_.end())
      throw std::logic_error("comparison of positions from different lists: " + to_string(e));
    const Address& a = l->second;
    const Address& b = r->second;
    switch (c->op) {
      case CmpOp::Eq: return equal(a, b);
      case CmpOp::Ne: return bnot(equal(a, b));
      case CmpOp::Lt: return before(a, b);
      case CmpOp::Gt: return before(b, a);
      case CmpOp::Le: return disj(before(a, b), equal(a, b));
      case CmpOp::Ge: return disj(before(b, a), equal(a, b));
    }
    return e;
  }

  static BExpr equal(const Address& a, const Address& b) {
    if (a.yield_id != b.yield_id || a.loops.size() != b.loops.size()) return blit(false);
    BExpr r = blit(true);
    for (std::size_t k = 0; k < a.loops.size(); ++k) r = conj(std::move(r), poscmp(CmpOp::Eq, a.loops[k].var, b.loops[k].var));
    return r;
  }

  static BExpr before(const Address& a, const Address& b) {
    BExpr r = blit(false);
    BExpr prefix = blit(true);
    for (std::size_t k = 0; k < a.loops.size() && k < b.loops.size() && a.loops[k].id == b.loops[k].id; ++k) {
      const CmpOp earlier = a.loops[k].dir == Direction::Forward ? CmpOp::Lt : CmpOp::Gt;
      r = disj(std::move(r), conj(prefix, poscmp(earlier, a.loops[k].var, b.loops[k].var)));
      prefix = conj(std::move(prefix), poscmp(CmpOp::Eq, a.loops[k].var, b.loops[k].var));
    }
    if (a.yield_id < b.yield_id) r = disj(std::move(r), std::move(prefix));
    return r;
  }

  NameSupply& names_;
  std::string input_;
  std::map<std::string, Address> addresses_;
};

}  // namespace

Program pass_G_expand_loops(const Program& p) {
  NameSupply names(p);
  Program out = p;
  for (auto& f : out.functions) {
    if (f.params.size() != 1) throw std::logic_error("loop expansion needs a single input list");
    Expander ex(names, f.params.front().name);
    f.body = ex.expand(f.body);
  }
  return out;
}

}  // namespace polycheck
