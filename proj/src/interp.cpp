#include "polycheck/interp.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "polycheck/diagnostics.hpp"

namespace polycheck {

using hl::CmpOp;
using hl::Direction;

fo::Var in_var(const std::string& boolean) { return fo::var(boolean + "@in", fo::Sort::Bool); }
fo::Var out_var(const std::string& boolean) { return fo::var(boolean + "@out", fo::Sort::Bool); }
fo::Var pos_var(const std::string& position) { return fo::var(position, fo::Sort::Pos); }

namespace {

void bound_check(const fo::Formula& f, int bound, const char* what) {
  if (fo::qrank(f) > bound)
    throw CompileError(ErrorCategory::BoundViolation, {},
                       std::string(what) + " has quantifier rank " + std::to_string(fo::qrank(f)) +
                           ", above its bound " + std::to_string(bound));
}

void cond_bools(const sp::Cond& c, std::set<std::string>& out) {
  if (c.kind == sp::Cond::Bool) out.insert(c.lhs);
  for (const auto& k : c.kids) cond_bools(k, out);
}

bool mentions(const fo::Formula& f, fo::Var v) {
  const auto& fv = fo::free_vars(f);
  return std::binary_search(fv.begin(), fv.end(), v);
}

// ∃v f with the quantifier pushed below disjunctions and next to the
// conjuncts that use v. The quantifier rank never grows.
class Miniscope {
 public:
  explicit Miniscope(fo::Var v) : v_(v) {}

  fo::Formula push(const fo::Formula& f) {
    if (!mentions(f, v_)) return f;
    if (auto it = memo_.find(f.get()); it != memo_.end()) return it->second;
    fo::Formula out;
    switch (f->kind) {
      case fo::Kind::Or: {
        std::vector<fo::Formula> kids;
        for (const auto& k : f->kids) kids.push_back(push(k));
        out = fo::disj(std::move(kids));
        break;
      }
      case fo::Kind::And: {
        std::vector<fo::Formula> with;
        std::vector<fo::Formula> rest;
        for (const auto& k : f->kids) (mentions(k, v_) ? with : rest).push_back(k);
        rest.push_back(with.size() == 1 ? push(with.front()) : fo::exists(v_, fo::conj(std::move(with))));
        out = fo::conj(std::move(rest));
        break;
      }
      case fo::Kind::Exists: out = fo::exists(f->a, push(f->kids.front())); break;
      default: out = fo::exists(v_, f);
    }
    memo_.emplace(f.get(), out);
    return out;
  }

 private:
  fo::Var v_;
  std::map<const fo::Node*, fo::Formula> memo_;
};

fo::Formula exists_inward(const std::vector<fo::Var>& vs, fo::Formula f) {
  for (fo::Var v : vs) f = Miniscope(v).push(f);
  return f;
}

fo::Formula identity_on(const std::set<std::string>& names) {
  std::vector<fo::Formula> parts;
  for (const auto& b : names) parts.push_back(fo::bool_eq(in_var(b), out_var(b)));
  return fo::conj(std::move(parts));
}

std::set<std::string> minus(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

// `a` comes strictly before `b` in the iteration order of a loop.
fo::Formula precedes(fo::Var a, fo::Var b, Direction dir) {
  return dir == Direction::Forward ? fo::pos_lt(a, b) : fo::pos_lt(b, a);
}

}  // namespace

fo::Formula cond_formula(const sp::Cond& c) {
  switch (c.kind) {
    case sp::Cond::True: return fo::top();
    case sp::Cond::False: return fo::bottom();
    case sp::Cond::Bool: return fo::bool_var(in_var(c.lhs));
    case sp::Cond::Label: return fo::letter_at(pos_var(c.lhs), c.letter);
    case sp::Cond::Not: return fo::negate(cond_formula(c.kids.at(0)));
    case sp::Cond::And: return fo::conj(cond_formula(c.kids.at(0)), cond_formula(c.kids.at(1)));
    case sp::Cond::Or: return fo::disj(cond_formula(c.kids.at(0)), cond_formula(c.kids.at(1)));
    case sp::Cond::PosCmp: {
      fo::Var l = pos_var(c.lhs);
      fo::Var r = pos_var(c.rhs);
      switch (c.op) {
        case CmpOp::Eq: return fo::pos_eq(l, r);
        case CmpOp::Ne: return fo::negate(fo::pos_eq(l, r));
        case CmpOp::Lt: return fo::pos_lt(l, r);
        case CmpOp::Le: return fo::pos_le(l, r);
        case CmpOp::Gt: return fo::pos_lt(r, l);
        case CmpOp::Ge: return fo::pos_le(r, l);
      }
    }
  }
  return fo::top();
}

ProgramFormula pf_true() { return {}; }

ProgramFormula pf_set_true(const std::string& b) { return {fo::bool_var(out_var(b)), {}, {b}}; }

ProgramFormula pf_check(const sp::Cond& c) {
  ProgramFormula f;
  f.phi = cond_formula(c);
  cond_bools(c, f.bin);
  return f;
}

ProgramFormula pf_if(const sp::Cond& c, const ProgramFormula& then_f, const ProgramFormula& else_f) {
  ProgramFormula out;
  std::set_union(then_f.bout.begin(), then_f.bout.end(), else_f.bout.begin(), else_f.bout.end(),
                 std::inserter(out.bout, out.bout.end()));
  // A functional formula without outputs is valid.
  if (out.bout.empty()) return out;
  const auto pad_then = minus(else_f.bout, then_f.bout);
  const auto pad_else = minus(then_f.bout, else_f.bout);
  fo::Formula cond = cond_formula(c);
  out.phi = fo::disj(fo::conj({cond, then_f.phi, identity_on(pad_then)}),
                     fo::conj({fo::negate(cond), else_f.phi, identity_on(pad_else)}));
  cond_bools(c, out.bin);
  for (const auto* s : {&then_f.bin, &else_f.bin, &pad_then, &pad_else}) out.bin.insert(s->begin(), s->end());
  return out;
}

ProgramFormula compose_formulas(const ProgramFormula& first, const ProgramFormula& second) {
  std::map<fo::Var, fo::Var> ren1;
  std::map<fo::Var, fo::Var> ren2;
  std::vector<fo::Var> shared;
  for (const auto& b : first.bout) {
    if (second.bout.count(b) != 0) {
      fo::Var mid = fo::fresh_var(b + "@mid", fo::Sort::Bool);
      ren1[out_var(b)] = mid;
      ren2[in_var(b)] = mid;
      shared.push_back(mid);
    } else {
      ren2[in_var(b)] = out_var(b);
    }
  }
  fo::Formula a = fo::rename(first.phi, ren1);
  fo::Formula b = fo::rename(second.phi, ren2);
  ProgramFormula out;
  out.phi = exists_inward(shared, fo::conj(a, b));
  out.bin = first.bin;
  for (const auto& n : minus(second.bin, first.bout)) out.bin.insert(n);
  out.bout = first.bout;
  out.bout.insert(second.bout.begin(), second.bout.end());

  std::size_t touched = 0;
  for (const auto& n : first.bout)
    if (second.bin.count(n) != 0 || second.bout.count(n) != 0) ++touched;
  bound_check(out.phi, std::max(fo::qrank(first.phi), fo::qrank(second.phi)) + static_cast<int>(touched),
              "composition");
  return out;
}

ProgramFormula iterate_formula(const ProgramFormula& step, const std::string& position, Direction dir,
                               const std::optional<std::string>& before) {
  const std::vector<std::string> mods(step.bout.begin(), step.bout.end());
  const std::size_t n = mods.size();
  if (n == 0) return pf_true();

  const fo::Var x = pos_var(position);
  std::optional<fo::Var> limit;
  if (before) limit = pos_var(*before);
  auto in_range = [&](fo::Var p) { return limit ? precedes(p, *limit, dir) : fo::top(); };

  // vec[j][m]: value of mods[m] after the j-th modifying step.
  std::vector<std::vector<fo::Var>> vec(n + 1);
  for (std::size_t m = 0; m < n; ++m) {
    vec[0].push_back(in_var(mods[m]));
    vec[n].push_back(out_var(mods[m]));
  }
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t m = 0; m < n; ++m) vec[j].push_back(fo::fresh_var(mods[m] + "@" + std::to_string(j), fo::Sort::Bool));
  auto step_at = [&](fo::Var p, std::size_t from, std::size_t to) {
    std::map<fo::Var, fo::Var> ren{{x, p}};
    for (std::size_t m = 0; m < n; ++m) {
      ren[in_var(mods[m])] = vec[from][m];
      ren[out_var(mods[m])] = vec[to][m];
    }
    return fo::rename(step.phi, ren);
  };
  auto same = [&](std::size_t a, std::size_t b) {
    std::vector<fo::Formula> parts;
    for (std::size_t m = 0; m < n; ++m) parts.push_back(fo::bool_eq(vec[a][m], vec[b][m]));
    return fo::conj(std::move(parts));
  };

  std::vector<fo::Var> ps;
  for (std::size_t j = 1; j <= n; ++j) ps.push_back(fo::fresh_var("p" + std::to_string(j), fo::Sort::Pos));

  // Every other position leaves the booleans unchanged.
  const fo::Var q = fo::fresh_var("q", fo::Sort::Pos);
  std::vector<fo::Formula> stable;
  stable.push_back(fo::implies(precedes(q, ps[0], dir), step_at(q, 0, 0)));
  for (std::size_t j = 1; j < n; ++j) {
    stable.push_back(fo::implies(fo::conj(precedes(ps[j - 1], q, dir), precedes(q, ps[j], dir)), step_at(q, j, j)));
  }
  stable.push_back(fo::implies(precedes(ps[n - 1], q, dir), step_at(q, n, n)));
  fo::Formula guessed = fo::forall(q, fo::implies(in_range(q), fo::conj(std::move(stable))));

  // Guesses are nested so that each step is checked as soon as its
  // position and result are bound. A repeated position is a dummy step that
  // changes nothing.
  for (std::size_t j = n; j-- > 0;) {
    fo::Formula link = j == 0 ? step_at(ps[0], 0, 1)
                              : fo::disj(fo::conj(precedes(ps[j - 1], ps[j], dir), step_at(ps[j], j, j + 1)),
                                         fo::conj(fo::pos_eq(ps[j - 1], ps[j]), same(j + 1, j)));
    fo::Formula body = fo::conj({in_range(ps[j]), std::move(link), std::move(guessed)});
    if (j + 1 < n) body = fo::exists(vec[j + 1], std::move(body));
    guessed = fo::exists(ps[j], std::move(body));
  }
  const fo::Var e = fo::fresh_var("e", fo::Sort::Pos);
  fo::Formula no_iteration = fo::conj(fo::forall(e, fo::negate(in_range(e))), same(0, n));

  ProgramFormula out;
  out.phi = fo::disj(no_iteration, guessed);
  out.bin = step.bin;
  out.bin.insert(mods.begin(), mods.end());
  out.bout = step.bout;
  bound_check(out.phi, fo::qrank(step.phi) + static_cast<int>(n * n + n + 1), "iteration");
  return out;
}

namespace {

class FormulaBuilder {
 public:
  const ProgramFormula& stmt(const sp::Stmt& s) {
    if (auto it = memo_.find(&s); it != memo_.end()) return it->second;
    return memo_.emplace(&s, build(s)).first->second;
  }

  // One iteration of a loop: its own booleans start false and are
  // forgotten afterwards.
  ProgramFormula loop_step(const sp::Stmt& loop) {
    const ProgramFormula& body = stmt(loop.kids.at(0));
    const std::set<std::string> locals(loop.bools.begin(), loop.bools.end());
    std::map<fo::Var, bool> start;
    std::vector<fo::Var> ends;
    for (const auto& l : locals) {
      start[in_var(l)] = false;
      if (body.bout.count(l) != 0) ends.push_back(out_var(l));
    }
    ProgramFormula step;
    step.phi = fo::exists(ends, fo::assign(body.phi, start));
    step.bin = minus(body.bin, locals);
    step.bout = minus(body.bout, locals);
    return step;
  }

 private:
  ProgramFormula build(const sp::Stmt& s) {
    switch (s.kind) {
      case sp::Stmt::Seq: {
        ProgramFormula acc;
        for (const auto& k : s.kids) acc = compose_formulas(acc, stmt(k));
        return acc;
      }
      case sp::Stmt::If: return pf_if(s.cond, stmt(s.kids.at(0)), stmt(s.kids.at(1)));
      case sp::Stmt::For: return iterate_formula(loop_step(s), s.name, s.dir);
      case sp::Stmt::SetTrue: return pf_set_true(s.name);
      case sp::Stmt::PrintLabel:
      case sp::Stmt::PrintChar:
      case sp::Stmt::Skip: return pf_true();
    }
    return pf_true();
  }

  std::map<const sp::Stmt*, ProgramFormula> memo_;
};

struct LoopFrame {
  int id = 0;
  std::string pos;
  Direction dir = Direction::Forward;
  std::vector<std::string> bools;
};

struct PrintSite {
  std::vector<LoopFrame> loops;
  ProgramFormula reach;
  const sp::Stmt* stmt = nullptr;
};

class Compiler {
 public:
  explicit Compiler(const sp::Program& p) : program_(p) {}

  Interpretation run() {
    std::set<std::string> top(program_.bools.begin(), program_.bools.end());
    if (top.size() != program_.bools.size()) throw std::invalid_argument("boolean declared twice");
    scope_bools_ = top;
    std::vector<LoopFrame> loops;
    walk(program_.body, pf_true(), loops);

    Interpretation in;
    in.constants = sp::constants(program_);
    for (std::size_t t = 0; t < sites_.size(); ++t) {
      const PrintSite& site = sites_[t];
      Tag tag;
      tag.name = "t" + std::to_string(t + 1);
      tag.arity = static_cast<int>(site.loops.size());
      if (site.stmt->kind == sp::Stmt::PrintChar) {
        tag.letter = site.stmt->letter;
      } else {
        auto it = std::find_if(site.loops.begin(), site.loops.end(),
                               [&](const LoopFrame& f) { return f.pos == site.stmt->name; });
        if (it == site.loops.end()) throw std::invalid_argument("print of unknown position " + site.stmt->name);
        tag.index = static_cast<int>(site.loops.end() - it);
      }
      in.tags.push_back(tag);
      in.dom.push_back(domain(site));
    }
    for (std::size_t t = 0; t < sites_.size(); ++t) {
      in.order.emplace_back();
      for (std::size_t u = 0; u < sites_.size(); ++u) in.order.back().push_back(order(t, u));
    }
    return in;
  }

 private:
  void walk(const sp::Stmt& s, const ProgramFormula& reach, std::vector<LoopFrame>& loops) {
    switch (s.kind) {
      case sp::Stmt::Seq: {
        ProgramFormula r = reach;
        for (std::size_t k = 0; k < s.kids.size(); ++k) {
          walk(s.kids[k], r, loops);
          if (k + 1 < s.kids.size()) r = compose_formulas(r, builder_.stmt(s.kids[k]));
        }
        return;
      }
      case sp::Stmt::If:
        walk(s.kids.at(0), compose_formulas(reach, pf_check(s.cond)), loops);
        walk(s.kids.at(1), compose_formulas(reach, pf_check(sp::Cond::negation(s.cond))), loops);
        return;
      case sp::Stmt::For: {
        for (const auto& f : loops)
          if (f.pos == s.name) throw std::invalid_argument("loop position " + s.name + " shadows an outer one");
        for (const auto& b : s.bools)
          if (!scope_bools_.insert(b).second) throw std::invalid_argument("boolean " + b + " shadows an outer one");
        ProgramFormula before = iterate_formula(builder_.loop_step(s), s.name, s.dir, s.name);
        loops.push_back(LoopFrame{loop_count_++, s.name, s.dir, s.bools});
        walk(s.kids.at(0), compose_formulas(reach, before), loops);
        loops.pop_back();
        for (const auto& b : s.bools) scope_bools_.erase(b);
        return;
      }
      case sp::Stmt::PrintLabel:
      case sp::Stmt::PrintChar: sites_.push_back(PrintSite{loops, reach, &s}); return;
      case sp::Stmt::SetTrue:
      case sp::Stmt::Skip: return;
    }
  }

  // The print is reached: every boolean starts false, and the state at the
  // print is projected away.
  static fo::Formula domain(const PrintSite& site) {
    std::map<fo::Var, bool> start;
    for (const auto& b : site.reach.bin) start[in_var(b)] = false;
    std::vector<fo::Var> state;
    for (const auto& b : site.reach.bout) state.push_back(out_var(b));
    fo::Formula f = exists_inward(state, fo::assign(site.reach.phi, start));
    std::map<fo::Var, fo::Var> coords;
    for (std::size_t k = 0; k < site.loops.size(); ++k)
      coords[pos_var(site.loops[k].pos)] = Interpretation::first(static_cast<int>(k) + 1);
    return fo::rename(f, coords);
  }

  // Print events are ordered by the values of the shared enclosing loops,
  // then by program order of the prints.
  fo::Formula order(std::size_t t, std::size_t u) const {
    const auto& a = sites_[t].loops;
    const auto& b = sites_[u].loops;
    std::vector<fo::Formula> cases;
    std::vector<fo::Formula> prefix;
    std::size_t k = 0;
    for (; k < a.size() && k < b.size() && a[k].id == b[k].id; ++k) {
      fo::Var x = Interpretation::first(static_cast<int>(k) + 1);
      fo::Var y = Interpretation::second(static_cast<int>(k) + 1);
      std::vector<fo::Formula> c = prefix;
      c.push_back(precedes(x, y, a[k].dir));
      cases.push_back(fo::conj(std::move(c)));
      prefix.push_back(fo::pos_eq(x, y));
    }
    if (t <= u) cases.push_back(fo::conj(prefix));
    return fo::disj(std::move(cases));
  }

  const sp::Program& program_;
  FormulaBuilder builder_;
  std::vector<PrintSite> sites_;
  std::set<std::string> scope_bools_;
  int loop_count_ = 0;
};

}  // namespace

ProgramFormula stmt_program_formula(const sp::Stmt& s) { return FormulaBuilder().stmt(s); }

fo::Var Interpretation::first(int k) { return fo::var("x" + std::to_string(k), fo::Sort::Pos); }
fo::Var Interpretation::second(int k) { return fo::var("y" + std::to_string(k), fo::Sort::Pos); }

int Interpretation::max_arity() const {
  int m = 0;
  for (const auto& t : tags) m = std::max(m, t.arity);
  return m;
}

int Interpretation::qrank() const {
  int q = 0;
  for (const auto& f : dom) q = std::max(q, fo::qrank(f));
  for (const auto& row : order)
    for (const auto& f : row) q = std::max(q, fo::qrank(f));
  return q;
}

std::uint64_t Interpretation::size() const {
  std::uint64_t s = 0;
  for (const auto& f : dom) s += fo::size(f);
  for (const auto& row : order)
    for (const auto& f : row) s += fo::size(f);
  return s;
}

Interpretation compile_interpretation(const sp::Program& p) { return Compiler(p).run(); }

namespace {

struct Element {
  std::size_t tag = 0;
  std::vector<int> tuple;
};

}  // namespace

Word eval_interpretation(const Interpretation& in, const Word& w, bool* total) {
  if (total != nullptr) *total = true;
  fo::Evaluator ev(w);
  const int n = static_cast<int>(w.size());
  std::vector<Element> elems;
  for (std::size_t t = 0; t < in.tags.size(); ++t) {
    const int ar = in.tags[t].arity;
    std::vector<int> tuple(static_cast<std::size_t>(ar), 0);
    if (ar > 0 && n == 0) continue;
    for (;;) {
      fo::Valuation val;
      for (int k = 0; k < ar; ++k) val.emplace_back(Interpretation::first(k + 1), tuple[static_cast<std::size_t>(k)]);
      if (ev.eval(in.dom[t], val)) elems.push_back(Element{t, tuple});
      int k = ar - 1;
      while (k >= 0 && ++tuple[static_cast<std::size_t>(k)] == n) tuple[static_cast<std::size_t>(k--)] = 0;
      if (k < 0) break;
    }
  }
  auto le = [&](const Element& a, const Element& b) {
    fo::Valuation val;
    for (std::size_t k = 0; k < a.tuple.size(); ++k)
      val.emplace_back(Interpretation::first(static_cast<int>(k) + 1), a.tuple[k]);
    for (std::size_t k = 0; k < b.tuple.size(); ++k)
      val.emplace_back(Interpretation::second(static_cast<int>(k) + 1), b.tuple[k]);
    return ev.eval(in.order[a.tag][b.tag], val);
  };
  std::stable_sort(elems.begin(), elems.end(), [&](const Element& a, const Element& b) { return le(a, b) && !le(b, a); });

  // Totality and antisymmetry: every pair is checked on small element sets,
  // neighbours otherwise.
  constexpr std::size_t kFullCheck = 400;
  bool ok = true;
  for (std::size_t i = 0; ok && i < elems.size(); ++i) {
    const std::size_t last = elems.size() <= kFullCheck ? elems.size() : std::min(elems.size(), i + 2);
    for (std::size_t j = i + 1; ok && j < last; ++j) ok = le(elems[i], elems[j]) && !le(elems[j], elems[i]);
  }
  if (!ok) {
    if (total != nullptr) *total = false;
    return {};
  }
  Word out;
  for (const auto& e : elems) {
    const Tag& tag = in.tags[e.tag];
    if (tag.letter) {
      out.push_back(*tag.letter);
    } else {
      out.push_back(w[static_cast<std::size_t>(e.tuple[static_cast<std::size_t>(tag.arity - tag.index)])]);
    }
  }
  return out;
}

std::string to_string(const Interpretation& in) {
  std::string out = "constants: {";
  for (std::size_t k = 0; k < in.constants.size(); ++k) {
    if (k != 0) out += ", ";
    out += quote_letter(in.constants[k]);
  }
  out += "}\ntags:\n";
  for (const auto& t : in.tags) {
    out += "  " + t.name + " arity " + std::to_string(t.arity) + " out ";
    out += t.letter ? quote_letter(*t.letter) : "x" + std::to_string(t.arity - t.index + 1);
    out += "\n";
  }
  for (std::size_t t = 0; t < in.tags.size(); ++t)
    out += "dom " + in.tags[t].name + ": " + fo::to_string(in.dom[t]) + "\n";
  for (std::size_t t = 0; t < in.tags.size(); ++t)
    for (std::size_t u = 0; u < in.tags.size(); ++u)
      out += "order " + in.tags[t].name + " " + in.tags[u].name + ": " + fo::to_string(in.order[t][u]) + "\n";
  return out;
}

}  // namespace polycheck
