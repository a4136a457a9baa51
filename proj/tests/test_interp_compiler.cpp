#include "doctest.h"
#include "polycheck/diagnostics.hpp"
#include "polycheck/interp.hpp"
#include "polycheck/rewriter.hpp"
#include "test_support.hpp"

using namespace polycheck;
using namespace polycheck::testing;

namespace {

using Table = std::vector<std::pair<std::map<std::string, bool>, std::map<std::string, bool>>>;

// All input/output boolean valuations accepted by `f`, with loop positions
// fixed by `positions` on word `w`.
Table relation(const ProgramFormula& f, const Word& w = {}, const fo::Valuation& positions = {}) {
  std::set<std::string> names = f.bin;
  names.insert(f.bout.begin(), f.bout.end());
  const std::vector<std::string> vs(names.begin(), names.end());
  Table out;
  fo::Evaluator ev(w);
  const std::size_t n = vs.size();
  for (std::size_t in = 0; in < (1u << n); ++in)
    for (std::size_t o = 0; o < (1u << n); ++o) {
      fo::Valuation val = positions;
      std::map<std::string, bool> mi, mo;
      for (std::size_t k = 0; k < n; ++k) {
        const bool bi = (in >> k) & 1;
        const bool bo = (o >> k) & 1;
        mi[vs[k]] = bi;
        mo[vs[k]] = bo;
        val.emplace_back(in_var(vs[k]), bi);
        if (f.bout.count(vs[k]) != 0) {
          val.emplace_back(out_var(vs[k]), bo);
        } else if (bo != bi) {
          goto skip;  // unwritten booleans keep their value
        }
      }
      if (ev.eval(f.phi, val)) out.emplace_back(mi, mo);
    skip:;
    }
  return out;
}

// The formula denotes a total function from inputs to outputs.
bool functional(const ProgramFormula& f, const Word& w = {}, const fo::Valuation& positions = {}) {
  std::map<std::map<std::string, bool>, int> images;
  for (const auto& [in, out] : relation(f, w, positions)) ++images[in];
  std::set<std::string> names = f.bin;
  names.insert(f.bout.begin(), f.bout.end());
  if (images.size() != (1u << names.size())) return false;
  for (const auto& [in, k] : images)
    if (k != 1) return false;
  return true;
}

Interpretation compile_corpus(const std::string& name) {
  return compile_interpretation(rewrite_to_simple(load_corpus(name)).simple);
}

}  // namespace

TEST_CASE("basic program formulas") {
  CHECK(pf_true().bout.empty());
  const ProgramFormula s = pf_set_true("b");
  CHECK(s.bout == std::set<std::string>{"b"});
  const Table ts = relation(s);
  REQUIRE(ts.size() == 2);
  for (const auto& [in, out] : ts) CHECK(out.at("b"));

  const ProgramFormula c = pf_check(sp::Cond::boolean("b"));
  CHECK(c.bin == std::set<std::string>{"b"});
  CHECK(relation(c).size() == 1);
}

TEST_CASE("conditional formulas are functional") {
  const ProgramFormula f =
      pf_if(sp::Cond::boolean("a"), pf_set_true("b"), compose_formulas(pf_set_true("c"), pf_set_true("b")));
  CHECK(functional(f));
  for (const auto& [in, out] : relation(f)) {
    CHECK(out.at("b"));
    CHECK(out.at("c") == (in.at("c") || !in.at("a")));
  }
  CHECK(pf_if(sp::Cond::constant(true), pf_true(), pf_true()).phi->kind == fo::Kind::True);
}

TEST_CASE("composition threads booleans") {
  // a := true; if a then b := true
  const ProgramFormula f = compose_formulas(pf_set_true("a"), pf_if(sp::Cond::boolean("a"), pf_set_true("b"), pf_true()));
  CHECK(functional(f));
  for (const auto& [in, out] : relation(f)) {
    CHECK(out.at("a"));
    CHECK(out.at("b"));
  }
  // if a then b := true; if b then c := true
  const ProgramFormula g = compose_formulas(pf_if(sp::Cond::boolean("a"), pf_set_true("b"), pf_true()),
                                            pf_if(sp::Cond::boolean("b"), pf_set_true("c"), pf_true()));
  CHECK(functional(g));
  for (const auto& [in, out] : relation(g)) CHECK(out.at("c") == (in.at("c") || in.at("b") || in.at("a")));
  CHECK(fo::qrank(g.phi) <= 1);
}

TEST_CASE("iterating a loop that remembers an earlier letter") {
  // for i: if seen then hit := true; if label(i) == 'a' then seen := true
  const ProgramFormula step = compose_formulas(
      pf_if(sp::Cond::boolean("seen"), pf_set_true("hit"), pf_true()),
      pf_if(sp::Cond::label("i", 'a'), pf_set_true("seen"), pf_true()));
  const ProgramFormula loop = iterate_formula(step, "i", hl::Direction::Forward);
  CHECK(loop.bout == std::set<std::string>{"hit", "seen"});
  for (const Word& w : all_words({'a', 'b'}, 4)) {
    CAPTURE(quote_word(w));
    CHECK(functional(loop, w));
    // simulate
    const auto expect = [&](bool seen, bool hit) {
      for (Letter c : w) {
        if (seen) hit = true;
        if (c == 'a') seen = true;
      }
      return std::pair{seen, hit};
    };
    for (const auto& [in, out] : relation(loop, w)) {
      const auto [seen, hit] = expect(in.at("seen"), in.at("hit"));
      CHECK(out.at("seen") == seen);
      CHECK(out.at("hit") == hit);
    }
  }
  const Table ba = relation(loop, word("ba"));
  for (const auto& [in, out] : ba)
    if (!in.at("seen") && !in.at("hit")) CHECK((out.at("seen") && !out.at("hit")));
  CHECK(fo::qrank(loop.phi) <= fo::qrank(step.phi) + 4 + 2 + 1);
}

TEST_CASE("backward loops and prefixes of loops") {
  // remembers whether the last-visited letter was an 'a'
  const ProgramFormula step = pf_if(sp::Cond::label("i", 'a'), pf_set_true("b"), pf_true());
  const ProgramFormula back = iterate_formula(step, "i", hl::Direction::Backward);
  const ProgramFormula before = iterate_formula(step, "i", hl::Direction::Backward, std::string("p"));
  const fo::Var p = pos_var("p");
  for (const Word& w : all_words({'a', 'b'}, 4)) {
    CAPTURE(quote_word(w));
    for (const auto& [in, out] : relation(back, w)) {
      bool any = in.at("b");
      for (Letter c : w) any = any || c == 'a';
      CHECK(out.at("b") == any);
    }
    for (int k = 0; k < static_cast<int>(w.size()); ++k)
      for (const auto& [in, out] : relation(before, w, {{p, k}})) {
        bool any = in.at("b");
        for (int q = k + 1; q < static_cast<int>(w.size()); ++q) any = any || w[q] == 'a';
        CHECK(out.at("b") == any);
      }
  }
}

TEST_CASE("swap interpretation") {
  const Interpretation f = compile_corpus("asToBs");
  REQUIRE(f.tags.size() == 2);
  CHECK(f.tags[0].letter == Letter{'b'});
  CHECK_FALSE(f.tags[1].letter.has_value());
  CHECK(f.tags[1].index == 1);
  CHECK(f.max_arity() == 1);
  CHECK(eval_interpretation(f, word("abc")) == word("bbc"));
  CHECK(eval_interpretation(f, word("aaa")) == word("bbb"));
  CHECK(eval_interpretation(f, Word{}).empty());
}

TEST_CASE("interpretations agree with simple programs") {
  for (const char* name : {"identity", "reverse", "prefixes", "asToBs", "compress_as", "get_first_word",
                           "get_last_word", "reverse_add_hash"}) {
    CAPTURE(name);
    const hl::Program p = load_corpus(name);
    const sp::Program s = rewrite_to_simple(p).simple;
    const Interpretation f = compile_interpretation(s);
    for (const Word& w : all_words(alphabet_of(p), 4)) {
      CAPTURE(quote_word(w));
      bool total = true;
      CHECK(eval_interpretation(f, w, &total) == sp::eval_simple(s, w));
      CHECK(total);
    }
  }
}

TEST_CASE("first word on all short words") {
  const sp::Program s = rewrite_to_simple(load_corpus("get_first_word")).simple;
  const Interpretation f = compile_interpretation(s);
  for (const Word& w : all_words({'a', ' '}, 5)) CHECK(eval_interpretation(f, w) == sp::eval_simple(s, w));
}

TEST_CASE("loop-only programs need no quantifiers") {
  for (const char* name : {"identity", "reverse", "prefixes", "asToBs", "reverse_add_hash"}) {
    CAPTURE(name);
    CHECK(compile_corpus(name).qrank() == 0);
  }
  CHECK(compile_corpus("prefixes").max_arity() == 2);
  CHECK(compile_corpus("compress_as").qrank() > 0);
}

TEST_CASE("rendering lists tags and formulas") {
  const std::string text = to_string(compile_corpus("asToBs"));
  CHECK(text.find("constants: {'a', 'b'}") == 0);
  CHECK(text.find("t1 arity 1 out 'b'") != std::string::npos);
  CHECK(text.find("t2 arity 1 out x1") != std::string::npos);
  CHECK(text.find("dom t1: label(x1) == 'a'") != std::string::npos);
}

TEST_CASE("shadowed positions are rejected") {
  const sp::Program p = sp::parse_simple(
      "for i in input do\n"
      "    for i in input do\n"
      "        print label(i)\n"
      "    done\n"
      "done\n");
  CHECK_THROWS_AS(compile_interpretation(p), std::invalid_argument);
}
