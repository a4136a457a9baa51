#include "polycheck/fo.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>

namespace polycheck::fo {

namespace {

struct VarInfo {
  std::string name;
  Sort sort;
};

class SymbolTable {
 public:
  Var intern(std::string_view name, Sort sort) {
    std::lock_guard lock(mu_);
    auto it = by_name_.find(std::string(name));
    if (it != by_name_.end()) {
      if (infos_[it->second].sort != sort)
        throw std::invalid_argument("variable '" + std::string(name) + "' reused with sort " +
                                    std::string(sort_name(sort)));
      return Var{it->second};
    }
    return add(std::string(name), sort);
  }

  Var fresh(std::string_view hint, Sort sort) {
    std::lock_guard lock(mu_);
    for (;;) {
      std::string name = std::string(hint) + "_" + std::to_string(counter_++);
      if (!by_name_.contains(name)) return add(std::move(name), sort);
    }
  }

  VarInfo info(Var v) {
    std::lock_guard lock(mu_);
    return infos_.at(v.id);
  }

  const std::string& name(Var v) {
    std::lock_guard lock(mu_);
    return infos_.at(v.id).name;
  }

  std::size_t count() {
    std::lock_guard lock(mu_);
    return infos_.size();
  }

 private:
  Var add(std::string name, Sort sort) {
    auto id = static_cast<std::uint32_t>(infos_.size());
    by_name_.emplace(name, id);
    infos_.push_back({std::move(name), sort});
    return Var{id};
  }

  std::mutex mu_;
  std::deque<VarInfo> infos_;  // stable references
  std::unordered_map<std::string, std::uint32_t> by_name_;
  std::uint64_t counter_ = 0;
};

SymbolTable& symbols() {
  static SymbolTable table;
  return table;
}

std::atomic<std::uint32_t> next_uid{1};

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return a > std::numeric_limits<std::uint64_t>::max() - b ? std::numeric_limits<std::uint64_t>::max()
                                                           : a + b;
}

std::vector<Var> merge(const std::vector<Var>& a, const std::vector<Var>& b) {
  std::vector<Var> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Formula finish(Node n) {
  n.uid = next_uid.fetch_add(1, std::memory_order_relaxed);
  switch (n.kind) {
    case Kind::True:
    case Kind::False:
      break;
    case Kind::PosEq:
    case Kind::PosLt:
    case Kind::TagEq:
      n.free = n.a == n.b ? std::vector<Var>{n.a} : std::vector<Var>{std::min(n.a, n.b), std::max(n.a, n.b)};
      break;
    case Kind::LetterAt:
    case Kind::TagIs:
    case Kind::BoolVar:
      n.free = {n.a};
      break;
    case Kind::Not:
    case Kind::And:
    case Kind::Or: {
      std::uint64_t sz = 1;
      for (const auto& k : n.kids) {
        n.qrank = std::max(n.qrank, k->qrank);
        sz = sat_add(sz, k->size);
        n.free = n.free.empty() ? k->free : merge(n.free, k->free);
      }
      n.size = sz;
      break;
    }
    case Kind::Exists:
    case Kind::Forall: {
      const auto& body = n.kids.front();
      n.qrank = body->qrank + 1;
      n.size = sat_add(body->size, 1);
      n.free = body->free;
      std::erase(n.free, n.a);
      break;
    }
  }
  return std::make_shared<const Node>(std::move(n));
}

Formula atom(Kind k, Var a, Var b = {}) {
  Node n;
  n.kind = k;
  n.a = a;
  n.b = b;
  return finish(std::move(n));
}

Formula nary(Kind k, std::vector<Formula> fs) {
  const Kind unit = k == Kind::And ? Kind::True : Kind::False;
  const Kind zero = k == Kind::And ? Kind::False : Kind::True;
  std::vector<Formula> kids;
  kids.reserve(fs.size());
  for (auto& f : fs) {
    if (f->kind == unit) continue;
    if (f->kind == zero) return f;
    if (f->kind == k) {
      kids.insert(kids.end(), f->kids.begin(), f->kids.end());
    } else {
      kids.push_back(std::move(f));
    }
  }
  if (kids.empty()) return k == Kind::And ? top() : bottom();
  if (kids.size() == 1) return kids.front();
  Node n;
  n.kind = k;
  n.kids = std::move(kids);
  return finish(std::move(n));
}

Formula quant(Kind k, Var v, Formula body) {
  Node n;
  n.kind = k;
  n.a = v;
  n.sort = var_sort(v);
  n.kids = {std::move(body)};
  return finish(std::move(n));
}

bool mentions_any(const Node& n, const auto& keys) {
  for (Var v : n.free)
    if (keys.contains(v)) return true;
  return false;
}

Formula rebuild(const Node& n, std::vector<Formula> kids) {
  switch (n.kind) {
    case Kind::Not: return negate(std::move(kids.front()));
    case Kind::And: return conj(std::move(kids));
    case Kind::Or: return disj(std::move(kids));
    case Kind::Exists: return exists(n.a, std::move(kids.front()));
    case Kind::Forall: return forall(n.a, std::move(kids.front()));
    default: throw std::logic_error("rebuild on atom");
  }
}

}  // namespace

std::string_view sort_name(Sort s) {
  switch (s) {
    case Sort::Pos: return "pos";
    case Sort::Tag: return "tag";
    case Sort::Bool: return "bool";
  }
  return "?";
}

Var var(std::string_view name, Sort sort) { return symbols().intern(name, sort); }
Var fresh_var(std::string_view hint, Sort sort) { return symbols().fresh(hint, sort); }
const std::string& var_name(Var v) { return symbols().name(v); }
Sort var_sort(Var v) { return symbols().info(v).sort; }

Formula top() {
  static const Formula t = [] {
    Node n;
    n.kind = Kind::True;
    return finish(std::move(n));
  }();
  return t;
}

Formula bottom() {
  static const Formula f = [] {
    Node n;
    n.kind = Kind::False;
    return finish(std::move(n));
  }();
  return f;
}

Formula constant(bool value) { return value ? top() : bottom(); }

Formula negate(Formula f) {
  if (f->kind == Kind::True) return bottom();
  if (f->kind == Kind::False) return top();
  if (f->kind == Kind::Not) return f->kids.front();
  Node n;
  n.kind = Kind::Not;
  n.kids = {std::move(f)};
  return finish(std::move(n));
}

Formula conj(std::vector<Formula> fs) { return nary(Kind::And, std::move(fs)); }
Formula disj(std::vector<Formula> fs) { return nary(Kind::Or, std::move(fs)); }
Formula conj(Formula a, Formula b) { return conj(std::vector<Formula>{std::move(a), std::move(b)}); }
Formula disj(Formula a, Formula b) { return disj(std::vector<Formula>{std::move(a), std::move(b)}); }
Formula implies(Formula a, Formula b) { return disj(negate(std::move(a)), std::move(b)); }

Formula iff(Formula a, Formula b) {
  if (a->kind == Kind::True) return b;
  if (b->kind == Kind::True) return a;
  if (a->kind == Kind::False) return negate(b);
  if (b->kind == Kind::False) return negate(a);
  return disj(conj(a, b), conj(negate(a), negate(b)));
}

Formula exists(Var v, Formula body) { return quant(Kind::Exists, v, std::move(body)); }
Formula forall(Var v, Formula body) { return quant(Kind::Forall, v, std::move(body)); }

Formula exists(const std::vector<Var>& vs, Formula body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = exists(*it, std::move(body));
  return body;
}

Formula forall(const std::vector<Var>& vs, Formula body) {
  for (auto it = vs.rbegin(); it != vs.rend(); ++it) body = forall(*it, std::move(body));
  return body;
}

Formula pos_eq(Var x, Var y) { return x == y ? top() : atom(Kind::PosEq, x, y); }
Formula pos_lt(Var x, Var y) { return x == y ? bottom() : atom(Kind::PosLt, x, y); }
Formula pos_le(Var x, Var y) { return x == y ? top() : disj(pos_lt(x, y), pos_eq(x, y)); }

Formula letter_at(Var x, Letter a) {
  Node n;
  n.kind = Kind::LetterAt;
  n.a = x;
  n.letter = a;
  return finish(std::move(n));
}

Formula tag_eq(Var t, Var u) { return t == u ? top() : atom(Kind::TagEq, t, u); }

Formula tag_is(Var t, std::uint32_t tag) {
  Node n;
  n.kind = Kind::TagIs;
  n.a = t;
  n.tag = tag;
  return finish(std::move(n));
}

Formula bool_var(Var b) { return atom(Kind::BoolVar, b); }
Formula bool_eq(Var b, Var c) { return b == c ? top() : iff(bool_var(b), bool_var(c)); }

int qrank(const Formula& f) { return f->qrank; }
std::uint64_t size(const Formula& f) { return f->size; }
const std::vector<Var>& free_vars(const Formula& f) { return f->free; }
bool is_closed(const Formula& f) { return f->free.empty(); }

std::set<Letter> constants(const Formula& f) {
  std::set<Letter> out;
  std::unordered_map<const Node*, bool> seen;
  std::function<void(const Node&)> walk = [&](const Node& n) {
    if (!seen.emplace(&n, true).second) return;
    if (n.kind == Kind::LetterAt) out.insert(n.letter);
    for (const auto& k : n.kids) walk(*k);
  };
  walk(*f);
  return out;
}

Formula rename(const Formula& f, const std::map<Var, Var>& subst) {
  if (subst.empty()) return f;
  std::unordered_map<const Node*, Formula> memo;
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    const Node& n = *g;
    if (!mentions_any(n, subst)) return g;
    if (auto it = memo.find(&n); it != memo.end()) return it->second;
    auto map = [&](Var v) {
      auto it = subst.find(v);
      return it == subst.end() ? v : it->second;
    };
    Formula out;
    switch (n.kind) {
      case Kind::PosEq: out = pos_eq(map(n.a), map(n.b)); break;
      case Kind::PosLt: out = pos_lt(map(n.a), map(n.b)); break;
      case Kind::TagEq: out = tag_eq(map(n.a), map(n.b)); break;
      case Kind::LetterAt: out = letter_at(map(n.a), n.letter); break;
      case Kind::TagIs: out = tag_is(map(n.a), n.tag); break;
      case Kind::BoolVar: out = bool_var(map(n.a)); break;
      case Kind::Exists:
      case Kind::Forall: {
        for (const auto& [from, to] : subst)
          if (to == n.a && std::binary_search(n.free.begin(), n.free.end(), from))
            throw std::logic_error("variable capture while renaming " + var_name(from));
        if (subst.contains(n.a)) {
          auto inner = subst;
          inner.erase(n.a);
          out = rebuild(n, {rename(n.kids.front(), inner)});
        } else {
          out = rebuild(n, {go(n.kids.front())});
        }
        break;
      }
      default: {
        std::vector<Formula> kids;
        kids.reserve(n.kids.size());
        for (const auto& k : n.kids) kids.push_back(go(k));
        out = rebuild(n, std::move(kids));
      }
    }
    memo.emplace(&n, out);
    return out;
  };
  return go(f);
}

Formula assign(const Formula& f, const std::map<Var, bool>& values) {
  if (values.empty()) return f;
  std::unordered_map<const Node*, Formula> memo;
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    const Node& n = *g;
    if (!mentions_any(n, values)) return g;
    if (auto it = memo.find(&n); it != memo.end()) return it->second;
    Formula out;
    if (n.kind == Kind::BoolVar) {
      out = constant(values.at(n.a));
    } else if (n.is_quantifier() && values.contains(n.a)) {
      auto inner = values;
      inner.erase(n.a);
      out = rebuild(n, {assign(n.kids.front(), inner)});
    } else {
      std::vector<Formula> kids;
      for (const auto& k : n.kids) kids.push_back(go(k));
      out = rebuild(n, std::move(kids));
    }
    memo.emplace(&n, out);
    return out;
  };
  return go(f);
}

Formula to_nnf(const Formula& f) {
  std::map<std::pair<const Node*, bool>, Formula> memo;
  std::function<Formula(const Formula&, bool)> go = [&](const Formula& g, bool neg) -> Formula {
    const Node& n = *g;
    auto key = std::make_pair(&n, neg);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    Formula out;
    switch (n.kind) {
      case Kind::True: out = constant(!neg); break;
      case Kind::False: out = constant(neg); break;
      case Kind::Not: out = go(n.kids.front(), !neg); break;
      case Kind::And:
      case Kind::Or: {
        std::vector<Formula> kids;
        for (const auto& k : n.kids) kids.push_back(go(k, neg));
        out = ((n.kind == Kind::And) != neg) ? conj(std::move(kids)) : disj(std::move(kids));
        break;
      }
      case Kind::Exists:
      case Kind::Forall: {
        auto body = go(n.kids.front(), neg);
        out = ((n.kind == Kind::Exists) != neg) ? exists(n.a, body) : forall(n.a, body);
        break;
      }
      default: out = neg ? negate(g) : g;
    }
    memo.emplace(key, out);
    return out;
  };
  return go(f, false);
}

namespace {

Formula instantiate(const Formula& f, Var v, int value) {
  std::unordered_map<const Node*, Formula> memo;
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    const Node& n = *g;
    if (!std::binary_search(n.free.begin(), n.free.end(), v)) return g;
    if (auto it = memo.find(&n); it != memo.end()) return it->second;
    Formula out;
    switch (n.kind) {
      case Kind::BoolVar: out = constant(value != 0); break;
      case Kind::TagIs: out = constant(static_cast<int>(n.tag) == value); break;
      case Kind::TagEq: {
        Var other = n.a == v ? n.b : n.a;
        out = other == v ? top() : tag_is(other, static_cast<std::uint32_t>(value));
        break;
      }
      default: {
        std::vector<Formula> kids;
        for (const auto& k : n.kids) kids.push_back(go(k));
        out = rebuild(n, std::move(kids));
      }
    }
    memo.emplace(&n, out);
    return out;
  };
  return go(f);
}

}  // namespace

Formula expand_finite_sorts(const Formula& f, std::uint32_t tag_count) {
  std::unordered_map<const Node*, Formula> memo;
  std::function<Formula(const Formula&)> go = [&](const Formula& g) -> Formula {
    const Node& n = *g;
    if (n.kids.empty()) return g;
    if (auto it = memo.find(&n); it != memo.end()) return it->second;
    std::vector<Formula> kids;
    for (const auto& k : n.kids) kids.push_back(go(k));
    Formula out;
    Sort s = n.is_quantifier() ? n.sort : Sort::Pos;
    if (n.is_quantifier() && s != Sort::Pos) {
      int count = s == Sort::Bool ? 2 : static_cast<int>(tag_count);
      std::vector<Formula> cases;
      for (int value = 0; value < count; ++value) cases.push_back(instantiate(kids.front(), n.a, value));
      out = n.kind == Kind::Exists ? disj(std::move(cases)) : conj(std::move(cases));
    } else {
      out = rebuild(n, std::move(kids));
    }
    memo.emplace(&n, out);
    return out;
  };
  return go(f);
}

// ---------------------------------------------------------------------------
// Evaluation

Evaluator::Evaluator(const Word& word, std::uint32_t tag_count) : word_(word), tag_count_(tag_count) {
  if (word_.size() > 250) throw std::invalid_argument("evaluator supports words of length <= 250");
}

Evaluator::~Evaluator() = default;

int Evaluator::domain_size(Sort s) const {
  switch (s) {
    case Sort::Pos: return static_cast<int>(word_.size());
    case Sort::Tag: return static_cast<int>(tag_count_);
    case Sort::Bool: return 2;
  }
  return 0;
}

bool Evaluator::eval(const Formula& f, const Valuation& valuation) {
  std::size_t needed = symbols().count();
  if (env_.size() < needed) env_.resize(needed, -1);
  std::vector<std::pair<Var, int>> saved;
  for (const auto& [v, value] : valuation) {
    saved.emplace_back(v, env_[v.id]);
    env_[v.id] = value;
  }
  bool result = eval_node(*f);
  for (auto it = saved.rbegin(); it != saved.rend(); ++it) env_[it->first.id] = it->second;
  return result;
}

bool Evaluator::eval_node(const Node& n) {
  bool memoizable = n.is_quantifier() || ((n.kind == Kind::And || n.kind == Kind::Or) && n.size >= 32);
  if (!memoizable) return eval_uncached(n);
  std::string key;
  key.reserve(n.free.size());
  for (Var v : n.free) {
    int value = env_[v.id];
    if (value < 0) throw std::logic_error("unbound variable " + var_name(v));
    key.push_back(static_cast<char>(value));
  }
  auto& table = memo_[n.uid];
  if (auto it = table.find(key); it != table.end()) return it->second;
  bool result = eval_uncached(n);
  table.emplace(std::move(key), result);
  return result;
}

bool Evaluator::eval_uncached(const Node& n) {
  auto value = [&](Var v) {
    int x = env_[v.id];
    if (x < 0) throw std::logic_error("unbound variable " + var_name(v));
    return x;
  };
  switch (n.kind) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Not: return !eval_node(*n.kids.front());
    case Kind::And:
      for (const auto& k : n.kids)
        if (!eval_node(*k)) return false;
      return true;
    case Kind::Or:
      for (const auto& k : n.kids)
        if (eval_node(*k)) return true;
      return false;
    case Kind::Exists:
    case Kind::Forall: {
      const bool want = n.kind == Kind::Exists;
      const int count = domain_size(n.sort);
      int saved = env_[n.a.id];
      bool result = !want;
      for (int x = 0; x < count; ++x) {
        env_[n.a.id] = x;
        if (eval_node(*n.kids.front()) == want) {
          result = want;
          break;
        }
      }
      env_[n.a.id] = saved;
      return result;
    }
    case Kind::PosEq:
    case Kind::TagEq: return value(n.a) == value(n.b);
    case Kind::PosLt: return value(n.a) < value(n.b);
    case Kind::LetterAt: return word_.at(static_cast<std::size_t>(value(n.a))) == n.letter;
    case Kind::TagIs: return value(n.a) == static_cast<int>(n.tag);
    case Kind::BoolVar: return value(n.a) != 0;
  }
  return false;
}

bool eval_formula(const Formula& f, const Word& word, std::uint32_t tag_count, const Valuation& valuation) {
  Evaluator ev(word, tag_count);
  return ev.eval(f, valuation);
}

BoundedResult bounded_sat(const Formula& f, int max_length, std::uint32_t tag_count) {
  std::set<Letter> alpha = constants(f);
  alpha.insert(kBlank);
  std::vector<Letter> letters(alpha.begin(), alpha.end());
  for (int len = 0; len <= max_length; ++len) {
    std::vector<std::size_t> digits(static_cast<std::size_t>(len), 0);
    for (;;) {
      Word w;
      w.reserve(digits.size());
      for (auto d : digits) w.push_back(letters[d]);
      if (eval_formula(f, w, tag_count)) return {true, w, max_length};
      std::size_t i = 0;
      while (i < digits.size() && ++digits[i] == letters.size()) digits[i++] = 0;
      if (i == digits.size()) break;
    }
  }
  return {false, {}, max_length};
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print(const Node& n, int ctx, std::string& out) {
  auto name = [](Var v) { return var_name(v); };
  switch (n.kind) {
    case Kind::True: out += "true"; return;
    case Kind::False: out += "false"; return;
    case Kind::PosEq:
    case Kind::TagEq: out += name(n.a) + " = " + name(n.b); return;
    case Kind::PosLt: out += name(n.a) + " < " + name(n.b); return;
    case Kind::LetterAt: out += "label(" + name(n.a) + ") == " + quote_letter(n.letter); return;
    case Kind::TagIs: out += name(n.a) + " = #" + std::to_string(n.tag); return;
    case Kind::BoolVar: out += name(n.a); return;
    case Kind::Not:
      out += "not ";
      print(*n.kids.front(), 3, out);
      return;
    case Kind::And:
    case Kind::Or: {
      const bool is_and = n.kind == Kind::And;
      const bool paren = ctx > (is_and ? 2 : 1);
      if (paren) out += "(";
      for (std::size_t i = 0; i < n.kids.size(); ++i) {
        if (i) out += is_and ? " and " : " or ";
        print(*n.kids[i], is_and ? 3 : 2, out);
      }
      if (paren) out += ")";
      return;
    }
    case Kind::Exists:
    case Kind::Forall: {
      if (ctx > 0) out += "(";
      out += n.kind == Kind::Exists ? "exists " : "forall ";
      out += name(n.a);
      Sort s = var_sort(n.a);
      if (s != Sort::Pos) out += " : " + std::string(sort_name(s));
      out += ". ";
      print(*n.kids.front(), 0, out);
      if (ctx > 0) out += ")";
      return;
    }
  }
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(*f, 0, out);
  return out;
}

}  // namespace polycheck::fo
