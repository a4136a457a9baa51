// End-to-end acceptance run. Prints one PASS/FAIL line per criterion.
//
// Usage: acceptance [--only AC1,AC3] [--expect-red AC5]
// With --expect-red the exit status is 0 exactly when the failing criteria
// are the listed ones; the FAIL lines are printed either way.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "polycheck/backends.hpp"
#include "polycheck/diagnostics.hpp"
#include "polycheck/frontend.hpp"
#include "polycheck/hl_interpreter.hpp"
#include "polycheck/interp.hpp"
#include "polycheck/pullback.hpp"
#include "polycheck/rewriter.hpp"
#include "test_support.hpp"

using namespace polycheck;
using namespace polycheck::testing;

namespace {

// Pinned tolerances.
constexpr double kAc1TimeLimit = 600.0;         // seconds for the whole AC1 run
constexpr int kAc1ExhaustiveLength = 5;
constexpr int kAc1RandomWords = 200;
constexpr int kAc1RandomLength = 12;
constexpr std::size_t kAc1MinPrograms = 9;
constexpr int kAc2ExhaustiveLength = 4;
constexpr int kAc2RandomWords = 100;
constexpr int kAc3MinPostconditions = 50;
constexpr int kAc3MaxQrank = 2;
constexpr int kAc3WordLength = 4;
constexpr double kAc5Timeout = 60.0;
constexpr int kAc5ValidBound = 8;
constexpr int kAc5InvalidBound = 6;
constexpr double kAc8Timeout = 30.0;
constexpr int kAc9Renamings = 50;
constexpr int kAc9Words = 50;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

sp::Program simple_of(const hl::Program& p) { return rewrite_to_simple(p).simple; }

// ---------------------------------------------------------------------------

const std::vector<std::string> kAc1Programs = {"identity",      "reverse",          "prefixes",    "asToBs",
                                               "compress_as",   "get_first_word",   "get_last_word",
                                               "reverse_add_hash", "map_reverse", "litteral_test"};

Outcome ac1() {
  const auto start = Clock::now();
  std::size_t words = 0, mismatches = 0, programs = 0;
  std::string first_bad;
  for (const auto& name : kAc1Programs) {
    const hl::Program p = load_corpus(name);
    const Interpretation f = compile_interpretation(simple_of(p));
    auto alphabet = alphabet_of(p);
    // small supports get two ordinary letters so that copying is exercised
    if (alphabet.size() <= 3)
      for (Letter c : {Letter{'a'}, Letter{'b'}})
        if (std::find(alphabet.begin(), alphabet.end(), c) == alphabet.end()) alphabet.push_back(c);
    auto ws = all_words(alphabet, kAc1ExhaustiveLength);
    const auto extra = random_words(alphabet, kAc1RandomWords, kAc1RandomLength, 1234);
    ws.insert(ws.end(), extra.begin(), extra.end());
    std::size_t bad = 0;
    for (const Word& w : ws) {
      if (eval_interpretation(f, w) != run_word(p, w)) {
        if (first_bad.empty()) first_bad = name + " on " + quote_word(w);
        ++bad;
      }
    }
    words += ws.size();
    mismatches += bad;
    if (bad == 0) ++programs;
  }
  const double secs = since(start);
  Outcome o;
  o.pass = programs >= kAc1MinPrograms && mismatches == 0 && secs <= kAc1TimeLimit;
  o.detail = std::to_string(programs) + "/" + std::to_string(kAc1Programs.size()) + " programs exact on " +
             std::to_string(words) + " words, " + std::to_string(mismatches) + " mismatches, " + fmt(secs) +
             " s (limit " + fmt(kAc1TimeLimit) + " s)";
  if (!first_bad.empty()) o.detail += "; first mismatch: " + first_bad;
  return o;
}

// ---------------------------------------------------------------------------

Outcome ac2() {
  std::size_t checks = 0, failures = 0;
  std::string first_bad;
  for (const auto& name : corpus_names()) {
    const hl::Program p = load_corpus(name);
    const RewriteResult r = rewrite_to_simple(p);
    const auto alphabet = alphabet_of(p);
    auto ws = all_words(alphabet, alphabet.size() > 6 ? 3 : kAc2ExhaustiveLength);
    const auto extra = random_words(alphabet, kAc2RandomWords, 12, 99);
    ws.insert(ws.end(), extra.begin(), extra.end());
    for (const Word& w : ws) {
      const Word expect = run_word(p, w);
      for (const auto& [id, stage] : r.stages) {
        ++checks;
        if (run_word(stage, w) != expect) {
          ++failures;
          if (first_bad.empty()) first_bad = name + " pass " + std::string(1, id) + " on " + quote_word(w);
        }
      }
      ++checks;
      if (sp::eval_simple(r.simple, w) != expect) {
        ++failures;
        if (first_bad.empty()) first_bad = name + " simple on " + quote_word(w);
      }
    }
  }
  Outcome o;
  o.pass = failures == 0;
  o.detail = "passes A..H and the simple program on " + std::to_string(corpus_names().size()) + " programs, " +
             std::to_string(checks) + " checks, " + std::to_string(failures) + " failures";
  if (!first_bad.empty()) o.detail += "; first: " + first_bad;
  return o;
}

// ---------------------------------------------------------------------------

// Random closed formulas in the surface syntax, quantifier depth ≤ 2.
class FormulaGen {
 public:
  FormulaGen(std::vector<char> letters, std::uint32_t seed) : letters_(std::move(letters)), rng_(seed) {}

  std::string next() { return gen({}, kAc3MaxQrank, 4); }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string atom(const std::vector<std::string>& vars) {
    const std::string& x = vars[pick(static_cast<int>(vars.size()))];
    const std::string& y = vars[pick(static_cast<int>(vars.size()))];
    switch (pick(4)) {
      case 0:
      case 1:
        return "label(" + x + ") == '" + std::string(1, letters_[pick(static_cast<int>(letters_.size()))]) + "'";
      case 2:
        return x + " < " + y;
      default:
        return x + " = " + y;
    }
  }

  std::string gen(const std::vector<std::string>& vars, int qleft, int budget) {
    const bool can_atom = !vars.empty();
    const bool can_quant = qleft > 0;
    if (budget <= 0 || (!can_quant && pick(2) == 0)) {
      if (can_atom) return atom(vars);
      return pick(2) == 0 ? "true" : "false";
    }
    const int choice = pick(6);
    if (choice < 2 && can_quant) {
      std::vector<std::string> inner = vars;
      const std::string v = vars.empty() ? "x" : "y" + std::to_string(vars.size());
      inner.push_back(v);
      return std::string(choice == 0 ? "exists " : "forall ") + v + ". " + gen(inner, qleft - 1, budget - 1);
    }
    if (choice == 2) return "not (" + gen(vars, qleft, budget - 1) + ")";
    if (choice == 3 || choice == 4) {
      const std::string op = choice == 3 ? " and " : " or ";
      return "(" + gen(vars, qleft, budget - 1) + ")" + op + "(" + gen(vars, qleft, budget - 1) + ")";
    }
    if (can_atom) return atom(vars);
    return gen(vars, qleft, budget - 1);
  }

  std::vector<char> letters_;
  std::mt19937 rng_;
};

std::vector<std::string> ac3_postconditions() {
  std::vector<std::string> out = {"true",
                                  "contains_factor(\"ab\")",
                                  "contains_factor(\"aa\")",
                                  "ends_with(\"a\")",
                                  "starts_with(\"b\")",
                                  "forall x. label(x) != 'a'",
                                  "exists x. label(x) == '#'"};
  std::set<std::string> seen(out.begin(), out.end());
  FormulaGen gen({'a', 'b', '#', ' '}, 2024);
  while (out.size() < 64) {
    const std::string s = gen.next();
    const fo::Formula f = parse_spec(s);
    if (fo::qrank(f) == 0 || fo::qrank(f) > kAc3MaxQrank || !seen.insert(s).second) continue;
    out.push_back(s);
  }
  return out;
}

const std::vector<std::string> kAc3Programs = {"identity",       "reverse",       "prefixes",        "asToBs",
                                               "compress_as",    "get_first_word", "get_last_word",
                                               "reverse_add_hash"};

struct Ac3Data {
  std::size_t posts = 0, checks = 0, failures = 0;
  std::string first_bad;
  // χ bound bookkeeping for AC4
  std::size_t chi_checks = 0, chi_failures = 0;
  double worst_size_ratio = 0;
};

Ac3Data run_ac3() {
  Ac3Data d;
  const auto posts = ac3_postconditions();
  d.posts = posts.size();
  const std::vector<fo::Formula> pres = {fo::top(), parse_spec("contains_factor(\"ab\")")};
  for (const auto& name : kAc3Programs) {
    const hl::Program p = load_corpus(name);
    const Interpretation f = compile_interpretation(simple_of(p));
    const auto tags = static_cast<std::uint32_t>(f.tags.size());
    std::vector<Letter> alpha = alphabet_of(p);
    for (Letter c : {Letter{'a'}, Letter{'b'}})
      if (std::find(alpha.begin(), alpha.end(), c) == alpha.end()) alpha.push_back(c);
    const auto ws = all_words(alpha, kAc3WordLength);
    std::vector<Word> outputs;
    for (const Word& w : ws) outputs.push_back(run_word(p, w));
    for (const auto& text : posts) {
      const fo::Formula psi = parse_spec(text);
      const fo::Formula pi = pullback(f, psi);
      for (std::size_t k = 0; k < ws.size(); ++k) {
        ++d.checks;
        if (fo::eval_formula(pi, ws[k], tags) != fo::eval_formula(psi, outputs[k])) {
          ++d.failures;
          if (d.first_bad.empty()) d.first_bad = name + " / " + text + " on " + quote_word(ws[k]);
        }
      }
      for (const fo::Formula& pre : pres) {
        ++d.chi_checks;
        try {
          const VerificationFormula v = build_chi(pre, f, psi);
          const int rank_bound = std::max(fo::qrank(pre), fo::qrank(psi) * (f.max_arity() + 1) + f.qrank());
          const double size_bound = static_cast<double>(fo::size(pre) + f.size() * fo::size(psi));
          d.worst_size_ratio = std::max(d.worst_size_ratio, static_cast<double>(v.size) / size_bound);
          if (v.qrank > rank_bound || static_cast<double>(v.size) > static_cast<double>(kChiSizeFactor) * size_bound)
            ++d.chi_failures;
        } catch (const CompileError&) {
          ++d.chi_failures;
        }
      }
    }
  }
  return d;
}

Outcome ac3(const Ac3Data& d) {
  Outcome o;
  o.pass = d.posts >= static_cast<std::size_t>(kAc3MinPostconditions) && d.failures == 0;
  o.detail = std::to_string(d.posts) + " postconditions (qrank <= " + std::to_string(kAc3MaxQrank) + ") x " +
             std::to_string(kAc3Programs.size()) + " programs, all words <= " + std::to_string(kAc3WordLength) +
             ": " + std::to_string(d.checks) + " checks, " + std::to_string(d.failures) + " failures";
  if (!d.first_bad.empty()) o.detail += "; first: " + d.first_bad;
  return o;
}

// ---------------------------------------------------------------------------

struct BoundStats {
  std::size_t compose = 0, iterate = 0, failures = 0;
  std::string first_bad;
};

void check_bounds(const sp::Stmt& s, BoundStats& st) {
  switch (s.kind) {
    case sp::Stmt::Seq: {
      if (s.kids.empty()) break;
      ProgramFormula acc = stmt_program_formula(s.kids[0]);
      for (std::size_t k = 1; k < s.kids.size(); ++k) {
        const ProgramFormula next = stmt_program_formula(s.kids[k]);
        std::size_t shared = 0;
        for (const auto& b : acc.bout)
          if (next.bin.count(b) != 0 || next.bout.count(b) != 0) ++shared;
        ++st.compose;
        try {
          const ProgramFormula r = compose_formulas(acc, next);
          if (fo::qrank(r.phi) >
              std::max(fo::qrank(acc.phi), fo::qrank(next.phi)) + static_cast<int>(shared)) {
            ++st.failures;
            if (st.first_bad.empty()) st.first_bad = "compose";
          }
          acc = r;
        } catch (const CompileError&) {
          ++st.failures;
          if (st.first_bad.empty()) st.first_bad = "compose threw";
          break;
        }
      }
      break;
    }
    case sp::Stmt::For: {
      const ProgramFormula step = stmt_program_formula(s.kids[0]);
      const int n = static_cast<int>(step.bout.size());
      ++st.iterate;
      try {
        const ProgramFormula loop = iterate_formula(step, s.name, s.dir);
        if (fo::qrank(loop.phi) > fo::qrank(step.phi) + n * n + n + 1) {
          ++st.failures;
          if (st.first_bad.empty()) st.first_bad = "iterate over " + s.name;
        }
      } catch (const CompileError&) {
        ++st.failures;
        if (st.first_bad.empty()) st.first_bad = "iterate threw over " + s.name;
      }
      break;
    }
    default:
      break;
  }
  for (const auto& k : s.kids) check_bounds(k, st);
}

Outcome ac4(const Ac3Data& d) {
  BoundStats st;
  for (const auto& name : corpus_names()) {
    if (name == "bibtex") continue;  // checked by the compiler itself below
    check_bounds(simple_of(load_corpus(name)).body, st);
  }
  bool compiles = true;
  try {
    compile_interpretation(simple_of(load_corpus("bibtex")));
  } catch (const CompileError&) {
    compiles = false;
  }
  Outcome o;
  o.pass = st.failures == 0 && d.chi_failures == 0 && compiles;
  o.detail = std::to_string(st.compose) + " compositions, " + std::to_string(st.iterate) + " loops, " +
             std::to_string(d.chi_checks) + " chi formulas (c = " + std::to_string(kChiSizeFactor) +
             ", worst size ratio " + fmt(d.worst_size_ratio) + "): " +
             std::to_string(st.failures + d.chi_failures) + " violations" +
             (compiles ? "" : "; bibtex compile hit a bound");
  if (!st.first_bad.empty()) o.detail += "; first: " + st.first_bad;
  return o;
}

// ---------------------------------------------------------------------------

VerificationFormula chi_for(const hl::Program& p, const std::string& pre, const std::string& post) {
  return build_chi(parse_spec(pre), compile_interpretation(simple_of(p)), parse_spec(post));
}

bool replays(const hl::Program& p, const std::string& pre, const std::string& post, const Word& w) {
  return fo::eval_formula(parse_spec(pre), w) && !fo::eval_formula(parse_spec(post), run_word(p, w));
}

Outcome ac5() {
  Outcome o;
  // compress_as {contains_factor("ab")} {contains_factor("ab")}: Valid
  const hl::Program ca = load_corpus("compress_as");
  const std::string ab = "contains_factor(\"ab\")";
  const VerificationFormula vc = chi_for(ca, ab, ab);
  SolverOptions opts;
  opts.timeout = kAc5Timeout;
  const auto verdicts = run_portfolio({Backend::Mona, Backend::Z3, Backend::Cvc5}, vc, opts);
  const Verdict& first = verdicts.front();
  const bool solver_valid = first.kind == VerdictKind::Valid && !first.bounded_only;
  std::string solver_line;
  for (const Verdict& v : verdicts) {
    if (!solver_line.empty()) solver_line += ", ";
    solver_line += std::string(backend_name(v.backend)) + " " +
                   (v.kind == VerdictKind::Valid     ? "valid"
                    : v.kind == VerdictKind::Invalid ? "invalid"
                                                     : std::string(reason_name(v.reason)));
  }
  const fo::BoundedResult clean = fo::bounded_sat(vc.chi, kAc5ValidBound, vc.tag_count);

  // get_last_word {ends_with("a")} {contains_factor("aa")}: Invalid
  const hl::Program gl = load_corpus("get_last_word");
  const std::string pre = "ends_with(\"a\")", post = "contains_factor(\"aa\")";
  const VerificationFormula vg = chi_for(gl, pre, post);
  SolverOptions bopts;
  bopts.bounded_max_length = kAc5InvalidBound;
  const Verdict inv = run_solver(Backend::Bounded, vg, bopts);
  const bool invalid_ok =
      inv.kind == VerdictKind::Invalid && inv.counterexample && replays(gl, pre, post, *inv.counterexample);

  o.pass = solver_valid && !clean.sat && invalid_ok;
  o.detail = "compress_as valid by a solver within " + fmt(kAc5Timeout) + " s: " + (solver_valid ? "yes" : "no") +
             " [" + solver_line + "]; bounded clean to " + std::to_string(kAc5ValidBound) + ": " +
             (clean.sat ? "no" : "yes") + "; get_last_word invalid with replayed counterexample " +
             (invalid_ok ? quote_word(*inv.counterexample) : std::string("(none)"));
  return o;
}

// ---------------------------------------------------------------------------

Outcome ac6() {
  Outcome o;
  bool zero = true;
  for (const char* name : {"identity", "reverse", "prefixes"})
    zero = zero && compile_interpretation(simple_of(load_corpus(name))).qrank() == 0;
  std::string broken;
  for (const auto& name : corpus_names()) {
    const hl::Program p = load_corpus(name);
    const sp::Program s = simple_of(p);
    const std::size_t fp = sp::metrics(p).size;
    const std::size_t sfp = sp::metrics(s).size;
    const std::uint64_t foi = compile_interpretation(s).size();
    if (!(fp <= sfp && sfp <= foi)) broken += " " + name;
  }
  o.pass = zero && broken.empty();
  o.detail = std::string("qrank 0 for identity, reverse, prefixes: ") + (zero ? "yes" : "no") +
             "; FP <= S.FP <= FO-I on " + std::to_string(corpus_names().size()) + " programs" +
             (broken.empty() ? "" : ", broken by" + broken);
  return o;
}

// ---------------------------------------------------------------------------

Outcome ac7() {
  const std::vector<std::pair<std::string, ErrorCategory>> cases = {
      {"eq_different_indices", ErrorCategory::CrossListComparison},
      {"eq_boolean", ErrorCategory::BooleanArgument},
      {"eq_shadowing", ErrorCategory::Shadowing},
      {"pcp", ErrorCategory::NestedWordEquality},
  };
  int ok = 0;
  std::string wrong;
  for (const auto& [file, expect] : cases) {
    try {
      typecheck_program(parse_program(read_text(std::string(POLYCHECK_CORPUS_DIR) + "/rejected/" + file + ".pr")));
      wrong += " " + file + "(accepted)";
    } catch (const CompileError& e) {
      if (e.category() == expect)
        ++ok;
      else
        wrong += " " + file + "(" + std::string(category_name(e.category())) + ")";
    }
  }
  Outcome o;
  o.pass = ok == static_cast<int>(cases.size());
  o.detail = std::to_string(ok) + "/" + std::to_string(cases.size()) + " rejected with the expected category" +
             (wrong.empty() ? "" : ";" + wrong);
  return o;
}

// ---------------------------------------------------------------------------

// z3 read the whole script: it printed a verdict and the only errors are the
// model requests that follow an unsat answer.
bool z3_parsed(const std::string& raw) {
  std::istringstream in(raw);
  std::string line;
  if (!std::getline(in, line) || (line != "sat" && line != "unsat" && line != "unknown")) return false;
  while (std::getline(in, line))
    if (line.find("(error") != std::string::npos && line.find("model is not available") == std::string::npos)
      return false;
  return true;
}

struct GoldenCase {
  std::string file;
  std::vector<std::string> args;
};

Outcome ac8() {
  Outcome o;
  const std::string corpus = POLYCHECK_CORPUS_DIR;
  const std::string golden = POLYCHECK_GOLDEN_DIR;
  // golden files, produced by the CLI in a fresh process
  const std::vector<GoldenCase> goldens = {
      {"identity_ends_a.smt2",
       {"compile", corpus + "/identity.pr", "--emit", "smtlib", "--pre", "true", "--post", "ends_with(\"a\")"}},
      {"asToBs_no_a.mona",
       {"compile", corpus + "/asToBs.pr", "--emit", "mona", "--pre", "true", "--post", "forall x. label(x) != 'a'"}},
      {"asToBs.interp", {"compile", corpus + "/asToBs.pr", "--emit", "interp"}},
      {"compress_as.simple", {"compile", corpus + "/compress_as.pr", "--emit", "simple"}},
  };
  int golden_ok = 0;
  for (const auto& g : goldens) {
    std::vector<std::string> argv = {POLYCHECK_CLI};
    argv.insert(argv.end(), g.args.begin(), g.args.end());
    const ProcessResult r = run_process(argv, kAc8Timeout);
    if (r.exit_code == 0 && r.output == read_text(golden + "/" + g.file)) ++golden_ok;
  }

  // z3 parses every emitted script and agrees with the bounded backend
  struct TripleCase {
    std::string program, pre, post;
  };
  const std::vector<TripleCase> triples = {
      {"identity", "true", "ends_with(\"a\")"},
      {"asToBs", "true", "forall x. label(x) != 'a'"},
      {"asToBs", "true", "exists x. label(x) == 'b'"},
      {"get_last_word", "ends_with(\"a\")", "contains_factor(\"aa\")"},
      {"get_first_word", "true", "forall x. label(x) != ' '"},
      {"reverse", "starts_with(\"a\")", "ends_with(\"a\")"},
      {"reverse", "true", "ends_with(\"a\")"},
      {"prefixes", "true", "contains_factor(\"##\")"},
  };
  const auto z3 = solver_binary(Backend::Z3, {});
  int parsed = 0, agreed = 0, both = 0;
  for (const auto& t : triples) {
    const VerificationFormula v = chi_for(load_corpus(t.program), t.pre, t.post);
    SolverOptions opts;
    opts.timeout = kAc8Timeout;
    opts.bounded_max_length = 5;
    const Verdict zv = run_solver(Backend::Z3, v, opts);
    if (z3_parsed(zv.raw)) ++parsed;
    const Verdict bv = run_solver(Backend::Bounded, v, opts);
    if (zv.kind == VerdictKind::Unknown || bv.kind == VerdictKind::Unknown) continue;
    ++both;
    bool agree = zv.kind == bv.kind;
    // a bounded "valid" only covers short words
    if (zv.kind == VerdictKind::Invalid && bv.kind == VerdictKind::Valid)
      agree = zv.counterexample && static_cast<int>(zv.counterexample->size()) > opts.bounded_max_length;
    if (agree) ++agreed;
  }
  o.pass = z3 && parsed == static_cast<int>(triples.size()) && golden_ok == static_cast<int>(goldens.size()) &&
           agreed == both;
  o.detail = "z3 parsed " + std::to_string(parsed) + "/" + std::to_string(triples.size()) + " scripts" +
             (z3 ? "" : " (z3 not found)") + "; golden " + std::to_string(golden_ok) + "/" +
             std::to_string(goldens.size()) + " byte-exact; z3 and bounded agree on " + std::to_string(agreed) +
             "/" + std::to_string(both) + " jointly decided triples";
  return o;
}

// ---------------------------------------------------------------------------

Outcome ac9() {
  std::mt19937 rng(77);
  std::size_t checks = 0, failures = 0;
  std::string first_bad;
  const std::vector<Letter> pool = {'a', 'b', 'c', 'd', 'x', 'y', 'z', ' ', '#', '@', U'é', U'λ', '0', '1'};
  for (const auto& name : corpus_names()) {
    const hl::Program p = load_corpus(name);
    const auto support = support_constants(p);
    std::vector<Letter> free;
    for (Letter c : pool)
      if (support.count(c) == 0) free.push_back(c);
    std::vector<Letter> alphabet(support.begin(), support.end());
    alphabet.insert(alphabet.end(), free.begin(), free.end());
    const auto words = random_words(alphabet, kAc9Words, 10, static_cast<std::uint32_t>(rng()));
    std::vector<Word> outputs;
    for (const Word& w : words) outputs.push_back(run_word(p, w));
    for (int r = 0; r < kAc9Renamings; ++r) {
      std::vector<Letter> image = free;
      std::shuffle(image.begin(), image.end(), rng);
      std::map<Letter, Letter> sigma;
      for (std::size_t k = 0; k < free.size(); ++k) sigma[free[k]] = image[k];
      const auto apply = [&](const Word& w) {
        Word out;
        for (Letter c : w) out.push_back(sigma.count(c) ? sigma.at(c) : c);
        return out;
      };
      for (std::size_t k = 0; k < words.size(); ++k) {
        ++checks;
        if (run_word(p, apply(words[k])) != apply(outputs[k])) {
          ++failures;
          if (first_bad.empty()) first_bad = name + " on " + quote_word(words[k]);
        }
      }
    }
  }
  Outcome o;
  o.pass = failures == 0;
  o.detail = std::to_string(kAc9Renamings) + " renamings x " + std::to_string(kAc9Words) + " words on " +
             std::to_string(corpus_names().size()) + " programs: " + std::to_string(checks) + " checks, " +
             std::to_string(failures) + " failures";
  if (!first_bad.empty()) o.detail += "; first: " + first_bad;
  return o;
}

std::set<std::string> split_list(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::string> only, expect_red;
  for (int k = 1; k < argc; ++k) {
    const std::string a = argv[k];
    if (a == "--only" && k + 1 < argc) {
      only = split_list(argv[++k]);
    } else if (a == "--expect-red" && k + 1 < argc) {
      expect_red = split_list(argv[++k]);
    } else {
      std::cerr << "usage: acceptance [--only AC1,...] [--expect-red AC5,...]\n";
      return 2;
    }
  }

  std::optional<Ac3Data> ac3_data;
  const auto data = [&]() -> const Ac3Data& {
    if (!ac3_data) ac3_data = run_ac3();
    return *ac3_data;
  };
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"AC1", ac1},
      {"AC2", ac2},
      {"AC3", [&] { return ac3(data()); }},
      {"AC4", [&] { return ac4(data()); }},
      {"AC5", ac5},
      {"AC6", ac6},
      {"AC7", ac7},
      {"AC8", ac8},
      {"AC9", ac9},
  };

  std::set<std::string> red;
  for (const auto& [id, run] : criteria) {
    if (!only.empty() && only.count(id) == 0) continue;
    const auto start = Clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) red.insert(id);
    std::cout << id << (o.pass ? " PASS " : " FAIL ") << o.detail << " [" << fmt(since(start)) << " s]"
              << std::endl;
  }
  if (expect_red.empty()) return red.empty() ? 0 : 1;
  for (const auto& id : expect_red)
    if (!only.empty() && only.count(id) == 0) red.insert(id);  // not run, treat as expected
  if (red == expect_red) {
    std::cout << "failing criteria match the expected set {";
    for (auto it = expect_red.begin(); it != expect_red.end(); ++it) std::cout << (it == expect_red.begin() ? "" : ",") << *it;
    std::cout << "}" << std::endl;
    return 0;
  }
  std::cout << "failing criteria differ from the expected set" << std::endl;
  return 1;
}
