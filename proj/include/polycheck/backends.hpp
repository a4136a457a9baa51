#pragma once

// Solver encodings of verification formulas and the processes that decide
// them.

#include <atomic>
#include <optional>
#include <string>
#include <vector>

#include "polycheck/fo.hpp"
#include "polycheck/pullback.hpp"

namespace polycheck {

enum class Backend { Z3, Cvc5, Mona, Bounded };

std::string_view backend_name(Backend b);
/// Accepts z3, cvc5, mona, bounded (and smtlib-z3, smtlib-cvc5).
std::optional<Backend> parse_backend(std::string_view name);

/// Letters of χ plus the blank, sorted.
std::vector<Letter> chi_alphabet(const VerificationFormula& v);

/// SMT-LIB v2.6 script in UFDTLIA. `model_positions` word cells are
/// requested with get-value after the model.
std::string emit_smtlib(const VerificationFormula& v, int model_positions = 16);

/// WS1S script for MONA in m2l-str mode. The first max(|T|, 2) positions
/// hold tags and booleans; the word occupies the rest.
std::string emit_mona(const VerificationFormula& v);

enum class VerdictKind { Valid, Invalid, Unknown };
enum class UnknownReason { None, Timeout, Memout, SolverUnknown, SolverMissing };

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  UnknownReason reason = UnknownReason::None;
  std::optional<Word> counterexample;
  Backend backend = Backend::Bounded;
  double seconds = 0;
  std::string raw;  // solver output, kept for diagnostics
  /// Valid from the bounded backend: no counterexample up to the bound.
  bool bounded_only = false;
};

std::string to_string(const Verdict& v);
std::string_view reason_name(UnknownReason r);

struct SolverOptions {
  double timeout = 5.0;
  int bounded_max_length = 6;
  /// Binary overrides; empty means POLYCHECK_Z3 / POLYCHECK_CVC5 /
  /// POLYCHECK_MONA, then the program name on PATH.
  std::string z3_path;
  std::string cvc5_path;
  std::string mona_path;
};

/// Resolves the binary of a solver backend; nullopt if it cannot be found.
std::optional<std::string> solver_binary(Backend b, const SolverOptions& opts);

/// Runs one backend. The bounded backend reports Valid only in the sense
/// that no counterexample up to the length bound exists. `cancel` stops
/// the run early with Unknown(timeout).
Verdict run_solver(Backend b, const VerificationFormula& v, const SolverOptions& opts,
                   const std::atomic<bool>* cancel = nullptr);

/// Runs the backends concurrently. The first Invalid verdict, or Valid
/// verdict from a solver, wins and the other runs are cancelled. A bounded
/// Valid is only used when nothing else is conclusive. Returns every verdict, the winner
/// first.
std::vector<Verdict> run_portfolio(const std::vector<Backend>& backends, const VerificationFormula& v,
                                   const SolverOptions& opts);

struct ProcessResult {
  bool started = false;
  bool timed_out = false;
  bool cancelled = false;
  int exit_code = -1;
  std::string output;  // stdout and stderr
};

/// Runs `argv` with a wall-clock limit, killing it on timeout or cancel.
ProcessResult run_process(const std::vector<std::string>& argv, double timeout,
                          const std::atomic<bool>* cancel = nullptr);

}  // namespace polycheck
