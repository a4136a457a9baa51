#pragma once

// Tree utilities shared by the rewriting passes.

#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "polycheck/hl_ast.hpp"

namespace polycheck::detail {

/// Rebuilds a tree. Subclasses override the hooks and call `descend` to
/// rebuild the children first.
class Mapper {
 public:
  virtual ~Mapper() = default;
  virtual hl::Stmt stmt(const hl::Stmt& s) { return descend(s); }
  virtual hl::OExpr oexpr(const hl::OExpr& e) { return descend(e); }
  virtual hl::BExpr bexpr(const hl::BExpr& e) { return descend(e); }

 protected:
  hl::Stmt descend(const hl::Stmt& s);
  hl::OExpr descend(const hl::OExpr& e);
  hl::BExpr descend(const hl::BExpr& e);
  hl::Arg arg(const hl::Arg& a);
};

/// Read-only pre-order traversal, entering generator bodies.
struct Walker {
  std::function<void(const hl::Stmt&)> on_stmt = [](const hl::Stmt&) {};
  std::function<void(const hl::OExpr&)> on_oexpr = [](const hl::OExpr&) {};
  std::function<void(const hl::BExpr&)> on_bexpr = [](const hl::BExpr&) {};

  void walk(const hl::Stmt& s) const;
  void walk(const hl::OExpr& e) const;
  void walk(const hl::BExpr& e) const;
  void walk(const hl::Program& p) const;
};

/// Hands out names `__<base>_<n>` and generator origins not used in the
/// program it was created from.
class NameSupply {
 public:
  explicit NameSupply(const hl::Program& p);

  std::string fresh(std::string_view base);
  int fresh_origin() { return next_origin_++; }

 private:
  int next_ = 1;
  int next_origin_ = 1;
};

/// Copies a tree, renaming every binder to a fresh name (when `freshen` is
/// set), renaming free names through `rename`, and replacing free list
/// variables through `replace`. Each replacement is inserted as a fresh copy.
class Copier : public Mapper {
 public:
  Copier(NameSupply& names, bool freshen = true) : names_(names), freshen_(freshen) {}

  std::map<std::string, std::string> rename;
  std::map<std::string, hl::OExpr> replace;

  hl::Stmt stmt(const hl::Stmt& s) override;
  hl::OExpr oexpr(const hl::OExpr& e) override;
  hl::BExpr bexpr(const hl::BExpr& e) override;

 private:
  std::string bind(const std::string& name);
  std::string lookup(const std::string& name) const;

  NameSupply& names_;
  bool freshen_;
};

/// A fresh copy of `s` with renamed binders.
hl::Stmt fresh_copy(const hl::Stmt& s, NameSupply& names);

/// Conjunction and disjunction that fold boolean literals.
hl::BExpr conj(hl::BExpr a, hl::BExpr b);
hl::BExpr disj(hl::BExpr a, hl::BExpr b);

/// Names starting with "__" that occur in the program.
std::vector<std::string> reserved_names(const hl::Program& p);

}  // namespace polycheck::detail
