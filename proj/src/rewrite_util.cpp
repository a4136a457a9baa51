#include "rewrite_util.hpp"

#include <algorithm>
#include <optional>
#include <set>

namespace polycheck::detail {

using namespace hl;

Arg Mapper::arg(const Arg& a) { return Arg{oexpr(*a.expr), a.positions}; }

Stmt Mapper::descend(const Stmt& st) {
  return std::visit(
      [&](const auto& n) -> Stmt {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, s::Seq>) {
          std::vector<Stmt> items;
          items.reserve(n.items.size());
          for (const auto& it : n.items) items.push_back(stmt(it));
          return seq(std::move(items));
        } else if constexpr (std::is_same_v<T, s::If>) {
          return Stmt{s::If{bexpr(n.cond), stmt(*n.then_branch), stmt(*n.else_branch)}, st.span};
        } else if constexpr (std::is_same_v<T, s::Yield>) {
          return Stmt{s::Yield{oexpr(n.value)}, st.span};
        } else if constexpr (std::is_same_v<T, s::ReturnOut>) {
          return Stmt{s::ReturnOut{oexpr(n.value)}, st.span};
        } else if constexpr (std::is_same_v<T, s::ReturnBool>) {
          return Stmt{s::ReturnBool{bexpr(n.value)}, st.span};
        } else if constexpr (std::is_same_v<T, s::LetOut>) {
          return Stmt{s::LetOut{n.name, oexpr(n.value), stmt(*n.body)}, st.span};
        } else if constexpr (std::is_same_v<T, s::LetBool>) {
          return Stmt{s::LetBool{n.name, stmt(*n.body)}, st.span};
        } else if constexpr (std::is_same_v<T, s::SetTrue>) {
          return st;
        } else {
          return Stmt{s::For{n.dir, n.pos, n.elem, oexpr(n.iter), stmt(*n.body)}, st.span};
        }
      },
      st.node);
}

OExpr Mapper::descend(const OExpr& e) {
  OExpr out = e;
  if (const auto* l = std::get_if<o::List>(&e.node)) {
    o::List nl;
    for (const auto& it : l->items) nl.items.push_back(oexpr(it));
    out.node = std::move(nl);
  } else if (const auto* c = std::get_if<o::Call>(&e.node)) {
    o::Call nc{c->fn, {}};
    for (const auto& a : c->args) nc.args.push_back(arg(a));
    out.node = std::move(nc);
  } else if (const auto* g = std::get_if<o::Gen>(&e.node)) {
    out.node = o::Gen{stmt(*g->body), g->origin};
  }
  return out;
}

BExpr Mapper::descend(const BExpr& e) {
  BExpr out = e;
  if (const auto* n = std::get_if<b::Not>(&e.node)) {
    out.node = b::Not{bexpr(*n->operand)};
  } else if (const auto* bin = std::get_if<b::Bin>(&e.node)) {
    out.node = b::Bin{bin->op, bexpr(*bin->lhs), bexpr(*bin->rhs)};
  } else if (const auto* c = std::get_if<b::Call>(&e.node)) {
    b::Call nc{c->fn, {}};
    for (const auto& a : c->args) nc.args.push_back(arg(a));
    out.node = std::move(nc);
  } else if (const auto* eq = std::get_if<b::LitEq>(&e.node)) {
    out.node = b::LitEq{oexpr(*eq->lhs), oexpr(*eq->rhs)};
  } else if (const auto* g = std::get_if<b::Gen>(&e.node)) {
    out.node = b::Gen{stmt(*g->body)};
  }
  return out;
}

void Walker::walk(const Stmt& st) const {
  on_stmt(st);
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, s::Seq>) {
          for (const auto& it : n.items) walk(it);
        } else if constexpr (std::is_same_v<T, s::If>) {
          walk(n.cond);
          walk(*n.then_branch);
          walk(*n.else_branch);
        } else if constexpr (std::is_same_v<T, s::Yield> || std::is_same_v<T, s::ReturnOut> ||
                             std::is_same_v<T, s::ReturnBool>) {
          walk(n.value);
        } else if constexpr (std::is_same_v<T, s::LetOut>) {
          walk(n.value);
          walk(*n.body);
        } else if constexpr (std::is_same_v<T, s::LetBool>) {
          walk(*n.body);
        } else if constexpr (std::is_same_v<T, s::For>) {
          walk(n.iter);
          walk(*n.body);
        }
      },
      st.node);
}

void Walker::walk(const OExpr& e) const {
  on_oexpr(e);
  if (const auto* l = std::get_if<o::List>(&e.node)) {
    for (const auto& it : l->items) walk(it);
  } else if (const auto* c = std::get_if<o::Call>(&e.node)) {
    for (const auto& a : c->args) walk(*a.expr);
  } else if (const auto* g = std::get_if<o::Gen>(&e.node)) {
    walk(*g->body);
  }
}

void Walker::walk(const BExpr& e) const {
  on_bexpr(e);
  if (const auto* n = std::get_if<b::Not>(&e.node)) {
    walk(*n->operand);
  } else if (const auto* bin = std::get_if<b::Bin>(&e.node)) {
    walk(*bin->lhs);
    walk(*bin->rhs);
  } else if (const auto* c = std::get_if<b::Call>(&e.node)) {
    for (const auto& a : c->args) walk(*a.expr);
  } else if (const auto* eq = std::get_if<b::LitEq>(&e.node)) {
    walk(*eq->lhs);
    walk(*eq->rhs);
  } else if (const auto* g = std::get_if<b::Gen>(&e.node)) {
    walk(*g->body);
  }
}

void Walker::walk(const Program& p) const {
  for (const auto& f : p.functions) walk(f.body);
}

std::vector<std::string> reserved_names(const Program& p) {
  std::set<std::string> out;
  auto note = [&](const std::string& n) {
    if (n.size() > 2 && n.compare(0, 2, "__") == 0) out.insert(n);
  };
  for (const auto& f : p.functions) {
    note(f.name);
    for (const auto& prm : f.params) {
      note(prm.name);
      for (const auto& q : prm.positions) note(q);
    }
  }
  Walker w;
  w.on_stmt = [&](const Stmt& st) {
    if (const auto* f = std::get_if<s::For>(&st.node)) {
      note(f->pos);
      note(f->elem);
    } else if (const auto* l = std::get_if<s::LetOut>(&st.node)) {
      note(l->name);
    } else if (const auto* lb = std::get_if<s::LetBool>(&st.node)) {
      note(lb->name);
    }
  };
  w.walk(p);
  return {out.begin(), out.end()};
}

NameSupply::NameSupply(const Program& p) {
  for (const auto& n : reserved_names(p)) {
    auto cut = n.find_last_of('_');
    if (cut == std::string::npos || cut + 1 >= n.size()) continue;
    const std::string digits = n.substr(cut + 1);
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) continue;
    if (digits.size() > 9) continue;
    next_ = std::max(next_, std::stoi(digits) + 1);
  }
  Walker w;
  w.on_oexpr = [&](const OExpr& e) {
    if (const auto* g = std::get_if<o::Gen>(&e.node)) next_origin_ = std::max(next_origin_, g->origin + 1);
  };
  w.walk(p);
}

std::string NameSupply::fresh(std::string_view base) {
  std::string b(base);
  while (!b.empty() && b.front() == '_') b.erase(b.begin());
  auto cut = b.find_last_of('_');
  if (cut != std::string::npos && cut + 1 < b.size() &&
      std::all_of(b.begin() + static_cast<std::ptrdiff_t>(cut) + 1, b.end(),
                  [](char c) { return c >= '0' && c <= '9'; })) {
    b.erase(cut);
  }
  if (b.empty()) b = "v";
  return "__" + b + "_" + std::to_string(next_++);
}

std::string Copier::bind(const std::string& name) {
  std::string fresh = freshen_ ? names_.fresh(name) : name;
  rename[name] = fresh;
  replace.erase(name);
  return fresh;
}

std::string Copier::lookup(const std::string& name) const {
  auto it = rename.find(name);
  return it == rename.end() ? name : it->second;
}

namespace {

// Saves and restores the bindings of one name around a scope.
struct ScopeGuard {
  ScopeGuard(std::map<std::string, std::string>& ren, std::map<std::string, OExpr>& rep, const std::string& name)
      : ren_(ren), rep_(rep), name_(name) {
    if (auto it = ren.find(name); it != ren.end()) old_ren_ = it->second;
    if (auto it = rep.find(name); it != rep.end()) old_rep_ = it->second;
  }
  ~ScopeGuard() {
    ren_.erase(name_);
    rep_.erase(name_);
    if (old_ren_) ren_[name_] = *old_ren_;
    if (old_rep_) rep_.insert_or_assign(name_, *old_rep_);
  }
  ScopeGuard(const ScopeGuard&) = delete;
  ScopeGuard& operator=(const ScopeGuard&) = delete;

  std::map<std::string, std::string>& ren_;
  std::map<std::string, OExpr>& rep_;
  std::string name_;
  std::optional<std::string> old_ren_;
  std::optional<OExpr> old_rep_;
};

}  // namespace

Stmt Copier::stmt(const Stmt& st) {
  if (const auto* f = std::get_if<s::For>(&st.node)) {
    OExpr iter = oexpr(f->iter);
    ScopeGuard g1(rename, replace, f->pos);
    ScopeGuard g2(rename, replace, f->elem);
    std::string pos = bind(f->pos);
    std::string elem = bind(f->elem);
    Stmt body = stmt(*f->body);
    return Stmt{s::For{f->dir, pos, elem, std::move(iter), std::move(body)}, st.span};
  }
  if (const auto* l = std::get_if<s::LetOut>(&st.node)) {
    OExpr value = oexpr(l->value);
    ScopeGuard g(rename, replace, l->name);
    std::string name = bind(l->name);
    Stmt body = stmt(*l->body);
    return Stmt{s::LetOut{name, std::move(value), std::move(body)}, st.span};
  }
  if (const auto* lb = std::get_if<s::LetBool>(&st.node)) {
    ScopeGuard g(rename, replace, lb->name);
    std::string name = bind(lb->name);
    Stmt body = stmt(*lb->body);
    return Stmt{s::LetBool{name, std::move(body)}, st.span};
  }
  if (const auto* t = std::get_if<s::SetTrue>(&st.node)) return Stmt{s::SetTrue{lookup(t->name)}, st.span};
  return descend(st);
}

OExpr Copier::oexpr(const OExpr& e) {
  if (const auto* v = std::get_if<o::Var>(&e.node)) {
    if (auto it = replace.find(v->name); it != replace.end()) {
      Copier inner(names_);
      return inner.oexpr(it->second);
    }
    return OExpr{o::Var{lookup(v->name)}, e.depth, e.span};
  }
  OExpr out = descend(e);
  if (auto* c = std::get_if<o::Call>(&out.node)) {
    for (auto& a : c->args)
      for (auto& q : a.positions) q = lookup(q);
  }
  return out;
}

BExpr Copier::bexpr(const BExpr& e) {
  if (const auto* v = std::get_if<b::Var>(&e.node)) return BExpr{b::Var{lookup(v->name)}, e.span};
  if (const auto* c = std::get_if<b::PosCmp>(&e.node))
    return BExpr{b::PosCmp{c->op, lookup(c->lhs), lookup(c->rhs)}, e.span};
  BExpr out = descend(e);
  if (auto* c = std::get_if<b::Call>(&out.node)) {
    for (auto& a : c->args)
      for (auto& q : a.positions) q = lookup(q);
  }
  return out;
}

Stmt fresh_copy(const Stmt& s, NameSupply& names) {
  Copier c(names);
  return c.stmt(s);
}

BExpr conj(BExpr a, BExpr b) {
  if (const auto* l = std::get_if<b::Lit>(&a.node)) return l->value ? b : a;
  if (const auto* l = std::get_if<b::Lit>(&b.node)) return l->value ? a : b;
  return band(std::move(a), std::move(b));
}

BExpr disj(BExpr a, BExpr b) {
  if (const auto* l = std::get_if<b::Lit>(&a.node)) return l->value ? a : b;
  if (const auto* l = std::get_if<b::Lit>(&b.node)) return l->value ? b : a;
  return bor(std::move(a), std::move(b));
}

}  // namespace polycheck::detail
