#pragma once

// First-order string-to-string interpretations and their construction from
// simple for-programs through program formulas.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "polycheck/fo.hpp"
#include "polycheck/simple_fp.hpp"

namespace polycheck {

/// A formula relating boolean values before a statement (`b@in`) to the
/// values after it (`b@out`). Booleans outside `bout` keep their value.
/// Position variables of enclosing loops occur free under their own names.
struct ProgramFormula {
  fo::Formula phi = fo::top();
  std::set<std::string> bin;
  std::set<std::string> bout;
};

fo::Var in_var(const std::string& boolean);
fo::Var out_var(const std::string& boolean);
fo::Var pos_var(const std::string& position);

/// Condition over the input values of booleans.
fo::Formula cond_formula(const sp::Cond& c);

ProgramFormula pf_true();
ProgramFormula pf_set_true(const std::string& b);
ProgramFormula pf_check(const sp::Cond& c);
ProgramFormula pf_if(const sp::Cond& c, const ProgramFormula& then_f, const ProgramFormula& else_f);

/// Sequential composition. Only booleans written by both sides are
/// quantified. Throws CompileError(BoundViolation) if the result exceeds
/// max(qrank) + |B1out ∩ (B2in ∪ B2out)|.
ProgramFormula compose_formulas(const ProgramFormula& first, const ProgramFormula& second);

/// Φ* for a loop over `position` whose body has formula `step`. With
/// `before`, only the iterations strictly before that position (in loop
/// order) run. Throws CompileError(BoundViolation) if the quantifier rank
/// exceeds qrank(step) + n² + n + 1 where n = |bout|.
ProgramFormula iterate_formula(const ProgramFormula& step, const std::string& position, hl::Direction dir,
                               const std::optional<std::string>& before = std::nullopt);

/// Effect of running `s` to completion. Loops declare their own booleans,
/// which are false at the start of each iteration.
ProgramFormula stmt_program_formula(const sp::Stmt& s);

struct Tag {
  std::string name;
  int arity = 0;
  std::optional<Letter> letter;  // constant output
  int index = 0;                 // otherwise: copied coordinate, De Bruijn (1 = innermost)
};

struct Interpretation {
  std::vector<Letter> constants;
  std::vector<Tag> tags;
  /// dom[t] has free variables among first(1..arity(t)).
  std::vector<fo::Formula> dom;
  /// order[t][u] holds when element (t, first) comes no later than (u,
  /// second).
  std::vector<std::vector<fo::Formula>> order;

  static fo::Var first(int k);   // x1, x2, ...
  static fo::Var second(int k);  // y1, y2, ...

  int max_arity() const;
  int qrank() const;
  std::uint64_t size() const;
};

/// Letters of the output, or the empty word when the order is not total on
/// the surviving elements (`*total` is then set to false).
Word eval_interpretation(const Interpretation& in, const Word& w, bool* total = nullptr);

/// One tag per print statement, in program order. Throws
/// std::invalid_argument if a loop position or boolean shadows another one.
Interpretation compile_interpretation(const sp::Program& p);

/// Constant set, tag table, then every formula.
std::string to_string(const Interpretation& in);

}  // namespace polycheck
