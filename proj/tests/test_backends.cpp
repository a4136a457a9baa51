#include <atomic>

#include "doctest.h"
#include "polycheck/backends.hpp"
#include "polycheck/frontend.hpp"
#include "polycheck/rewriter.hpp"
#include "test_support.hpp"

using namespace polycheck;
using namespace polycheck::testing;

namespace {

struct Triple {
  hl::Program program;
  VerificationFormula v;
};

Triple triple(const std::string& name, const std::string& pre, const std::string& post) {
  hl::Program p = load_corpus(name);
  const Interpretation f = compile_interpretation(rewrite_to_simple(p).simple);
  return {p, build_chi(parse_spec(pre), f, parse_spec(post))};
}

bool is_counterexample(const Triple& t, const std::string& pre, const std::string& post, const Word& w) {
  return eval_formula(parse_spec(pre), w) && !eval_formula(parse_spec(post), run_word(t.program, w));
}

bool has_z3() { return solver_binary(Backend::Z3, {}).has_value(); }

}  // namespace

TEST_CASE("backend names") {
  for (Backend b : {Backend::Z3, Backend::Cvc5, Backend::Mona, Backend::Bounded})
    CHECK(parse_backend(backend_name(b)) == b);
  CHECK(parse_backend("smtlib-z3") == Backend::Z3);
  CHECK(parse_backend("smtlib-cvc5") == Backend::Cvc5);
  CHECK_FALSE(parse_backend("vampire").has_value());
}

TEST_CASE("SMT-LIB encoding") {
  const Triple t = triple("asToBs", "true", "exists x. label(x) == 'b'");
  CHECK(chi_alphabet(t.v) == std::vector<Letter>{'a', 'b', kBlank});
  const std::string smt = emit_smtlib(t.v);
  CHECK(smt.rfind("(set-logic UFDTLIA)\n", 0) == 0);
  CHECK(smt.find("(declare-datatypes ((Tag 0)) (((tag_1) (tag_2))))") != std::string::npos);
  CHECK(smt.find("(declare-datatypes ((Letter 0)) (((letter_a) (letter_b) (letter_blank))))") != std::string::npos);
  CHECK(smt.find("(check-sat)") != std::string::npos);
  CHECK(smt.find("(word 15)") != std::string::npos);
  CHECK(emit_smtlib(t.v, 0).find("(word 0)") == std::string::npos);
}

TEST_CASE("MONA encoding") {
  const Triple t = triple("asToBs", "true", "exists x. label(x) == 'b'");
  const std::string m = emit_mona(t.v);
  CHECK(m.find("m2l-str;") != std::string::npos);
  CHECK(m.find("var2 Letter_a, Letter_b, Letter_blank;") != std::string::npos);
  // every word position carries exactly one letter
  CHECK(m.find("(p >= 2 => ((p in Letter_a & p notin Letter_b & p notin Letter_blank) | "
               "(p notin Letter_a & p in Letter_b & p notin Letter_blank) | "
               "(p notin Letter_a & p notin Letter_b & p in Letter_blank)))") != std::string::npos);
}

TEST_CASE("bounded search") {
  const Triple bad = triple("get_last_word", "ends_with(\"a\")", "contains_factor(\"aa\")");
  SolverOptions opts;
  opts.bounded_max_length = 6;
  const Verdict v = run_solver(Backend::Bounded, bad.v, opts);
  CHECK(v.kind == VerdictKind::Invalid);
  REQUIRE(v.counterexample.has_value());
  CHECK(is_counterexample(bad, "ends_with(\"a\")", "contains_factor(\"aa\")", *v.counterexample));

  const Triple good = triple("asToBs", "true", "forall x. label(x) != 'a'");
  const Verdict ok = run_solver(Backend::Bounded, good.v, opts);
  CHECK(ok.kind == VerdictKind::Valid);
  CHECK(ok.bounded_only);

  std::atomic<bool> cancel{true};
  const Verdict stopped = run_solver(Backend::Bounded, good.v, opts, &cancel);
  CHECK(stopped.kind == VerdictKind::Unknown);
  CHECK(stopped.reason == UnknownReason::Timeout);
}

TEST_CASE("missing solvers are reported as such") {
  SolverOptions opts;
  opts.z3_path = "/nonexistent/z3";
  opts.mona_path = "/nonexistent/mona";
  const Triple t = triple("identity", "true", "true");
  for (Backend b : {Backend::Z3, Backend::Mona}) {
    const Verdict v = run_solver(b, t.v, opts);
    CHECK(v.kind == VerdictKind::Unknown);
    CHECK(v.reason == UnknownReason::SolverMissing);
  }
}

TEST_CASE("processes") {
  const ProcessResult echo = run_process({"/bin/echo", "hi"}, 5);
  CHECK(echo.started);
  CHECK(echo.exit_code == 0);
  CHECK(echo.output == "hi\n");
  const ProcessResult slow = run_process({"/bin/sleep", "5"}, 0.05);
  CHECK(slow.timed_out);
  const ProcessResult none = run_process({"/nonexistent/binary"}, 1);
  CHECK((!none.started || none.exit_code != 0));
}

TEST_CASE("z3 verdicts" * doctest::skip(!has_z3())) {
  SolverOptions opts;
  opts.timeout = 30;

  const Triple bad = triple("get_last_word", "ends_with(\"a\")", "contains_factor(\"aa\")");
  const std::string smt = emit_smtlib(bad.v);
  const Verdict inv = run_solver(Backend::Z3, bad.v, opts);
  CAPTURE(inv.raw);
  CHECK(inv.raw.find("error") == std::string::npos);
  CHECK(inv.kind == VerdictKind::Invalid);
  REQUIRE(inv.counterexample.has_value());
  CHECK(is_counterexample(bad, "ends_with(\"a\")", "contains_factor(\"aa\")", *inv.counterexample));

  const Triple good = triple("asToBs", "true", "forall x. label(x) != 'a'");
  const Verdict val = run_solver(Backend::Z3, good.v, opts);
  CHECK(val.kind == VerdictKind::Valid);
  CHECK_FALSE(val.bounded_only);

  opts.timeout = 0.001;
  const Triple hard = triple("compress_as", "contains_factor(\"ab\")", "contains_factor(\"ab\")");
  const Verdict to = run_solver(Backend::Z3, hard.v, opts);
  CHECK(to.kind == VerdictKind::Unknown);
  CHECK(to.reason == UnknownReason::Timeout);
}

TEST_CASE("portfolio puts the winner first" * doctest::skip(!has_z3())) {
  SolverOptions opts;
  opts.timeout = 30;
  const Triple bad = triple("get_last_word", "ends_with(\"a\")", "contains_factor(\"aa\")");
  const auto verdicts = run_portfolio({Backend::Bounded, Backend::Z3}, bad.v, opts);
  REQUIRE(verdicts.size() == 2);
  CHECK(verdicts[0].kind == VerdictKind::Invalid);

  const Triple good = triple("asToBs", "true", "forall x. label(x) != 'a'");
  const auto ok = run_portfolio({Backend::Bounded, Backend::Z3}, good.v, opts);
  CHECK(ok[0].kind == VerdictKind::Valid);
  CHECK(ok[0].backend == Backend::Z3);
  // conclusive verdicts never disagree
  for (const Verdict& v : ok)
    if (v.kind != VerdictKind::Unknown) CHECK(v.kind == VerdictKind::Valid);
}
