#include "polycheck/pullback.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "polycheck/diagnostics.hpp"

namespace polycheck {

namespace {

// An output position: its tag (a tag variable, or a fixed tag in the naive
// construction) and its input coordinates.
struct Slot {
  std::optional<fo::Var> tag_var;
  std::uint32_t tag = 0;
  std::vector<fo::Var> coords;
};

class Puller {
 public:
  Puller(const Interpretation& f, bool naive, int arity) : f_(f), naive_(naive), arity_(arity) {}

  fo::Formula pull(const fo::Formula& psi) {
    switch (psi->kind) {
      case fo::Kind::True:
      case fo::Kind::False: return psi;
      case fo::Kind::Not: return fo::negate(pull(psi->kids.front()));
      case fo::Kind::And:
      case fo::Kind::Or: {
        std::vector<fo::Formula> kids;
        for (const auto& k : psi->kids) kids.push_back(pull(k));
        return psi->kind == fo::Kind::And ? fo::conj(std::move(kids)) : fo::disj(std::move(kids));
      }
      case fo::Kind::Exists:
      case fo::Kind::Forall: return quantifier(psi);
      case fo::Kind::PosEq: return equal(slot(psi->a), slot(psi->b));
      case fo::Kind::PosLt: return less(slot(psi->a), slot(psi->b));
      case fo::Kind::LetterAt: return letter(slot(psi->a), psi->letter);
      case fo::Kind::TagEq:
      case fo::Kind::TagIs:
      case fo::Kind::BoolVar: break;
    }
    throw std::invalid_argument("postconditions range over positions only");
  }

 private:
  fo::Formula quantifier(const fo::Formula& psi) {
    if (psi->sort != fo::Sort::Pos) throw std::invalid_argument("postconditions range over positions only");
    const bool ex = psi->kind == fo::Kind::Exists;
    const fo::Var v = psi->a;
    const std::string& base = fo::var_name(v);
    auto saved = slots_.find(v) == slots_.end() ? std::nullopt : std::optional<Slot>(slots_.at(v));
    auto body_for = [&](Slot s) {
      slots_[v] = s;
      fo::Formula body = pull(psi->kids.front());
      fo::Formula guard = dom(s);
      return ex ? fo::exists(s.coords, fo::conj(guard, body)) : fo::forall(s.coords, fo::implies(guard, body));
    };
    fo::Formula out;
    if (naive_) {
      std::vector<fo::Formula> cases;
      for (std::uint32_t t = 0; t < f_.tags.size(); ++t) {
        Slot s;
        s.tag = t;
        for (int k = 1; k <= f_.tags[t].arity; ++k)
          s.coords.push_back(fo::fresh_var(base + "_" + std::to_string(k), fo::Sort::Pos));
        cases.push_back(body_for(s));
      }
      out = ex ? fo::disj(std::move(cases)) : fo::conj(std::move(cases));
    } else {
      Slot s;
      s.tag_var = fo::fresh_var("t_" + base, fo::Sort::Tag);
      for (int k = 1; k <= arity_; ++k) s.coords.push_back(fo::fresh_var(base + "_" + std::to_string(k), fo::Sort::Pos));
      fo::Formula inner = body_for(s);
      out = ex ? fo::exists(*s.tag_var, inner) : fo::forall(*s.tag_var, inner);
    }
    if (saved) slots_[v] = *saved; else slots_.erase(v);
    return out;
  }

  const Slot& slot(fo::Var v) const {
    auto it = slots_.find(v);
    if (it == slots_.end()) throw std::invalid_argument("free variable " + fo::var_name(v) + " in postcondition");
    return it->second;
  }

  // Cases over the possible tags of each slot.
  template <typename Fn>
  fo::Formula cases(const Slot& s, Fn fn) const {
    if (naive_) return fn(s.tag);
    std::vector<fo::Formula> out;
    for (std::uint32_t t = 0; t < f_.tags.size(); ++t) {
      if (f_.tags[t].arity > arity_) continue;
      fo::Formula c = fn(t);
      if (c->kind != fo::Kind::False) out.push_back(fo::conj(fo::tag_is(*s.tag_var, t), std::move(c)));
    }
    return fo::disj(std::move(out));
  }

  fo::Formula dom(const Slot& s) const {
    return cases(s, [&](std::uint32_t t) {
      if (f_.tags[t].arity > arity_ && !naive_) return fo::bottom();
      return fo::rename(f_.dom[t], coords(s, t, Interpretation::first));
    });
  }

  fo::Formula le(const Slot& a, const Slot& b) const {
    return cases(a, [&](std::uint32_t t) {
      return cases(b, [&](std::uint32_t u) { return order(a, t, b, u); });
    });
  }

  fo::Formula less(const Slot& a, const Slot& b) const {
    return cases(a, [&](std::uint32_t t) {
      return cases(b, [&](std::uint32_t u) { return fo::conj(order(a, t, b, u), fo::negate(order(b, u, a, t))); });
    });
  }

  fo::Formula equal(const Slot& a, const Slot& b) const {
    if (naive_ && a.tag != b.tag) return fo::bottom();
    fo::Formula same_tag = naive_ ? fo::top() : fo::tag_eq(*a.tag_var, *b.tag_var);
    return fo::conj(same_tag, cases(a, [&](std::uint32_t t) {
                      std::vector<fo::Formula> parts;
                      for (int k = 0; k < f_.tags[t].arity; ++k) parts.push_back(fo::pos_eq(a.coords[k], b.coords[k]));
                      return fo::conj(std::move(parts));
                    }));
  }

  fo::Formula letter(const Slot& s, Letter c) const {
    return cases(s, [&](std::uint32_t t) {
      const Tag& tag = f_.tags[t];
      if (tag.letter) return fo::constant(*tag.letter == c);
      return fo::letter_at(s.coords[static_cast<std::size_t>(tag.arity - tag.index)], c);
    });
  }

  fo::Formula order(const Slot& a, std::uint32_t t, const Slot& b, std::uint32_t u) const {
    auto ren = coords(a, t, Interpretation::first);
    ren.merge(coords(b, u, Interpretation::second));
    return fo::rename(f_.order[t][u], ren);
  }

  std::map<fo::Var, fo::Var> coords(const Slot& s, std::uint32_t t, fo::Var (*name)(int)) const {
    std::map<fo::Var, fo::Var> ren;
    for (int k = 0; k < f_.tags[t].arity; ++k) ren[name(k + 1)] = s.coords[static_cast<std::size_t>(k)];
    return ren;
  }

  const Interpretation& f_;
  bool naive_;
  int arity_;
  std::map<fo::Var, Slot> slots_;
};

void require_closed(const fo::Formula& f, const char* what) {
  if (!fo::is_closed(f)) throw std::invalid_argument(std::string(what) + " is not closed");
}

}  // namespace

fo::Formula pullback(const Interpretation& f, const fo::Formula& psi) {
  require_closed(psi, "postcondition");
  const int r = f.max_arity();
  if (fo::qrank(psi) == 0 || r == 0) return Puller(f, false, r).pull(psi);
  // In the empty word only tags of arity zero have elements.
  const fo::Var z = fo::fresh_var("z", fo::Sort::Pos);
  fo::Formula nonempty = fo::exists(z, fo::top());
  return fo::disj(fo::conj(nonempty, Puller(f, false, r).pull(psi)),
                  fo::conj(fo::negate(nonempty), Puller(f, false, 0).pull(psi)));
}

fo::Formula naive_pullback(const Interpretation& f, const fo::Formula& psi) {
  require_closed(psi, "postcondition");
  return Puller(f, true, f.max_arity()).pull(psi);
}

VerificationFormula build_chi(const fo::Formula& pre, const Interpretation& f, const fo::Formula& post, bool naive) {
  require_closed(pre, "precondition");
  VerificationFormula v;
  v.pre = pre;
  v.post = post;
  v.tag_count = static_cast<std::uint32_t>(f.tags.size());
  v.chi = fo::conj(pre, fo::negate(naive ? naive_pullback(f, post) : pullback(f, post)));
  v.qrank = fo::qrank(v.chi);
  v.size = fo::size(v.chi);

  const int rank_bound = std::max(fo::qrank(pre), fo::qrank(post) * (f.max_arity() + 1) + f.qrank());
  if (v.qrank > rank_bound)
    throw CompileError(ErrorCategory::BoundViolation, {},
                       "verification formula has quantifier rank " + std::to_string(v.qrank) + ", above " +
                           std::to_string(rank_bound));
  if (!naive) {
    const std::uint64_t size_bound = kChiSizeFactor * (fo::size(pre) + f.size() * fo::size(post));
    if (v.size > size_bound)
      throw CompileError(ErrorCategory::BoundViolation, {},
                         "verification formula has size " + std::to_string(v.size) + ", above " +
                             std::to_string(size_bound));
  }
  return v;
}

}  // namespace polycheck
