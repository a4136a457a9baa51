#pragma once

// First-order logic on finite words, extended with a finite tag sort and a
// two-element boolean sort.
//
// Formulas are immutable DAGs shared through `Formula` handles. Every node
// caches its free variables, quantifier rank and tree size, so the handles
// are cheap to combine even when the unfolded tree is very large.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "polycheck/letters.hpp"

namespace polycheck::fo {

enum class Sort : std::uint8_t { Pos, Tag, Bool };

std::string_view sort_name(Sort s);

/// Interned variable. Two variables with the same name are the same
/// variable; the sort is fixed at first use.
struct Var {
  std::uint32_t id = 0;
  friend auto operator<=>(const Var&, const Var&) = default;
};

/// Returns the variable called `name`, creating it on first use. Throws
/// std::invalid_argument if `name` already exists with another sort.
Var var(std::string_view name, Sort sort);
/// A variable whose name has never been handed out before.
Var fresh_var(std::string_view hint, Sort sort);
const std::string& var_name(Var v);
Sort var_sort(Var v);

enum class Kind : std::uint8_t {
  True,
  False,
  Not,
  And,
  Or,
  Exists,
  Forall,
  PosEq,     // x = y
  PosLt,     // x < y
  LetterAt,  // x =_L a
  TagEq,     // t = t'
  TagIs,     // t = constant tag
  BoolVar,   // b
};

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  Kind kind = Kind::True;
  Var a{};  // bound variable, or first atom operand
  Var b{};  // second atom operand
  Sort sort = Sort::Pos;  // sort of the bound variable
  Letter letter = 0;
  std::uint32_t tag = 0;
  std::vector<Formula> kids;

  // Derived data, filled in by the constructors below.
  std::uint32_t uid = 0;
  int qrank = 0;
  std::uint64_t size = 1;  // unfolded tree size, saturating
  std::vector<Var> free;   // sorted

  bool is_quantifier() const { return kind == Kind::Exists || kind == Kind::Forall; }
};

// Constructors. And/Or flatten nested nodes of the same kind and absorb
// constants; nothing else is simplified.
Formula top();
Formula bottom();
Formula constant(bool value);
Formula negate(Formula f);
Formula conj(std::vector<Formula> fs);
Formula disj(std::vector<Formula> fs);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula iff(Formula a, Formula b);
Formula exists(Var v, Formula body);
Formula forall(Var v, Formula body);
Formula exists(const std::vector<Var>& vs, Formula body);
Formula forall(const std::vector<Var>& vs, Formula body);
Formula pos_eq(Var x, Var y);
Formula pos_lt(Var x, Var y);
Formula pos_le(Var x, Var y);
Formula letter_at(Var x, Letter a);
Formula tag_eq(Var t, Var u);
Formula tag_is(Var t, std::uint32_t tag);
Formula bool_var(Var b);
Formula bool_eq(Var b, Var c);

int qrank(const Formula& f);
std::uint64_t size(const Formula& f);
const std::vector<Var>& free_vars(const Formula& f);
bool is_closed(const Formula& f);

/// Letter constants occurring in `f`.
std::set<Letter> constants(const Formula& f);

/// Simultaneous renaming of free variables. Bound variables are never
/// touched; callers keep them fresh so that capture cannot occur.
Formula rename(const Formula& f, const std::map<Var, Var>& subst);
/// Replaces free boolean variables by constants.
Formula assign(const Formula& f, const std::map<Var, bool>& values);

/// Negation normal form: negations only in front of atoms.
Formula to_nnf(const Formula& f);
/// Replaces tag and boolean quantifiers by finite conjunctions/disjunctions
/// over a universe of `tag_count` tags and {false, true}.
Formula expand_finite_sorts(const Formula& f, std::uint32_t tag_count);

/// Valuation of free variables: positions are 0-based indices, tags are tag
/// indices, booleans are 0/1.
using Valuation = std::vector<std::pair<Var, int>>;

/// Evaluates formulas over one word, memoizing quantified subformulas on the
/// values of their free variables. Reuse one evaluator for many queries on
/// the same word.
class Evaluator {
 public:
  Evaluator(const Word& word, std::uint32_t tag_count = 0);
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  bool eval(const Formula& f, const Valuation& valuation = {});

  const Word& word() const { return word_; }

 private:
  bool eval_node(const Node& n);
  bool eval_uncached(const Node& n);
  int domain_size(Sort s) const;

  Word word_;
  std::uint32_t tag_count_;
  std::vector<int> env_;
  std::unordered_map<std::uint32_t, std::unordered_map<std::string, bool>> memo_;
};

bool eval_formula(const Formula& f, const Word& word, std::uint32_t tag_count = 0,
                  const Valuation& valuation = {});

struct BoundedResult {
  bool sat = false;
  Word witness;       // meaningful when sat
  int max_length = 0;  // search bound that was exhausted when !sat
};

/// Searches all words over constants(f) ∪ {blank} up to `max_length`,
/// shortest first.
BoundedResult bounded_sat(const Formula& f, int max_length, std::uint32_t tag_count = 0);

/// Renders in the formula syntax accepted by parse_spec, extended with `: tag` / `: bool`
/// quantifier annotations, `#k` tag constants and bare boolean atoms.
std::string to_string(const Formula& f);

}  // namespace polycheck::fo
