#pragma once

// Rewriting of typed high-level programs into simple for-programs.
//
// Each pass maps a typechecked program to a typechecked program with the
// same input/output behaviour. Fresh names start with "__", which the
// surface parser rejects, so they never collide with user names.

#include <string>
#include <vector>

#include "polycheck/hl_ast.hpp"
#include "polycheck/simple_fp.hpp"

namespace polycheck {

struct PassReport {
  char pass = 'A';
  std::size_t input_size = 0;
  std::size_t output_size = 0;
  std::vector<std::string> fresh_names;
};

/// A: equality tests against list constants become calls to synthesized
/// checker functions. Character comparisons stay.
hl::Program pass_A_elim_literal_equalities(const hl::Program& p);
/// B: list constants become calls to synthesized producer functions; list
/// displays `[e1, ..., en]` become generators.
hl::Program pass_B_elim_literal_productions(const hl::Program& p);
/// C: every call is replaced by a generator over the callee's body; only the
/// main function remains.
hl::Program pass_C_elim_function_calls(const hl::Program& p);
/// D: boolean generators become flags computed just before their use.
hl::Program pass_D_elim_boolean_generators(const hl::Program& p);
/// E: `let x := e in s` becomes s[x := e].
hl::Program pass_E_elim_let_output(const hl::Program& p);
/// F: list returns become copy loops guarded by a has-returned flag. Throws
/// CompileError(ReturnDepthZero) for character returns that cannot be
/// turned into a single guarded yield.
hl::Program pass_F_elim_returns(const hl::Program& p);
/// G: loops over generators are expanded until every loop ranges over the
/// input word.
hl::Program pass_G_expand_loops(const hl::Program& p);
/// H: boolean declarations move to the top of the nearest loop body or of
/// the program.
hl::Program pass_H_hoist_booleans(const hl::Program& p);

/// Converts the output of pass H node for node.
sp::Program to_simple(const hl::Program& p);

struct RewriteResult {
  std::vector<std::pair<char, hl::Program>> stages;  // output of each pass, A..H
  std::vector<PassReport> reports;
  sp::Program simple;
};

/// Runs A..H and the conversion. The program must be typechecked and its main
/// function must have type (Out[1], 0) -> Out[1].
RewriteResult rewrite_to_simple(const hl::Program& typed);

/// Number of statement and expression nodes.
std::size_t ast_size(const hl::Program& p);

}  // namespace polycheck
