#pragma once

// Hoare triples {φ} F {ψ}: pulling a postcondition on the output of an
// interpretation back to a formula on its input.

#include <cstdint>

#include "polycheck/fo.hpp"
#include "polycheck/interp.hpp"

namespace polycheck {

/// Tag-sort pullback. Every output position variable becomes a tag variable
/// and ar(F) input positions guarded by the `dom` predicate. Coordinates
/// beyond the arity of the chosen tag are ignored. Because those
/// coordinates cannot be chosen in the empty word, the result splits on
/// whether the input is empty.
fo::Formula pullback(const Interpretation& f, const fo::Formula& psi);

/// Reference construction: one conjunct or disjunct per tag at every
/// quantifier. Exponential in the quantifier depth of ψ.
fo::Formula naive_pullback(const Interpretation& f, const fo::Formula& psi);

struct VerificationFormula {
  fo::Formula chi;
  fo::Formula pre;
  fo::Formula post;
  std::uint32_t tag_count = 0;
  int qrank = 0;
  std::uint64_t size = 0;
};

/// Size bound constant: size(χ) ≤ kChiSizeFactor·(|φ| + |F|·|ψ|).
inline constexpr std::uint64_t kChiSizeFactor = 8;

/// χ = φ ∧ ¬π(F, ψ), which is unsatisfiable iff the triple is valid. Throws
/// CompileError(BoundViolation) if χ breaks its quantifier rank or size
/// bound, and std::invalid_argument if φ or ψ is not closed.
VerificationFormula build_chi(const fo::Formula& pre, const Interpretation& f, const fo::Formula& post,
                              bool naive = false);

}  // namespace polycheck
