#include "doctest.h"
#include "polycheck/diagnostics.hpp"
#include "polycheck/rewriter.hpp"
#include "polycheck/simple_fp.hpp"
#include "test_support.hpp"

using namespace polycheck;
using namespace polycheck::testing;

namespace {

// "first a" program: prints every letter until the first 'a', inclusive.
const char* kUntilA =
    "let seen := false in\n"
    "for i in input do\n"
    "    if not (seen) then\n"
    "        print label(i)\n"
    "        if label(i) == 'a' then\n"
    "            seen := true\n"
    "        else\n"
    "            skip\n"
    "        endif\n"
    "    else\n"
    "        skip\n"
    "    endif\n"
    "done\n";

}  // namespace

TEST_CASE("evaluation of hand-written programs") {
  const sp::Program p = sp::parse_simple(kUntilA);
  CHECK(p.bools == std::vector<std::string>{"seen"});
  CHECK(sp::eval_simple(p, word("bbabab")) == word("bba"));
  CHECK(sp::eval_simple(p, word("bbb")) == word("bbb"));
  CHECK(sp::eval_simple(p, Word{}).empty());

  const sp::Program rev = sp::parse_simple(
      "for i in reversed(input) do\n"
      "    print label(i)\n"
      "done\n");
  CHECK(sp::eval_simple(rev, word("abc")) == word("cba"));

  const sp::Program pairs = sp::parse_simple(
      "for i in input do\n"
      "    for j in input do\n"
      "        if i < j then\n"
      "            print label(j)\n"
      "        else\n"
      "            skip\n"
      "        endif\n"
      "    done\n"
      "    print '#'\n"
      "done\n");
  CHECK(sp::eval_simple(pairs, word("abc")) == word("bc#c##"));
}

TEST_CASE("loop booleans restart at every iteration") {
  const sp::Program p = sp::parse_simple(
      "for i in input do\n"
      "    let b := false in\n"
      "    if b then\n"
      "        print 'x'\n"
      "    else\n"
      "        print label(i)\n"
      "    endif\n"
      "    b := true\n"
      "done\n");
  CHECK(sp::eval_simple(p, word("ab")) == word("ab"));
}

TEST_CASE("printing and parsing round-trip") {
  const sp::Program p = sp::parse_simple(kUntilA);
  CHECK(sp::parse_simple(sp::to_string(p)) == p);
  for (const auto& name : corpus_names()) {
    CAPTURE(name);
    const sp::Program s = rewrite_to_simple(load_corpus(name)).simple;
    CHECK(sp::parse_simple(sp::to_string(s)) == s);
  }
}

TEST_CASE("malformed programs") {
  CHECK_THROWS_AS(sp::parse_simple("for i in input do print label(i)"), CompileError);
  CHECK_THROWS_AS(sp::parse_simple("print label(\n"), CompileError);
  try {
    sp::parse_simple("if then");
    FAIL("accepted");
  } catch (const CompileError& e) {
    CHECK(e.category() == ErrorCategory::Syntax);
  }
}

TEST_CASE("metrics and constants") {
  const sp::Program p = sp::parse_simple(kUntilA);
  const sp::Metrics m = sp::metrics(p);
  CHECK(m.loop_depth == 1);
  CHECK(m.bool_depth == 1);
  CHECK(m.size == 7);  // for, two ifs, print, set, two skips
  CHECK(sp::constants(p) == std::vector<Letter>{'a'});

  const sp::Metrics prefixes = sp::metrics(rewrite_to_simple(load_corpus("prefixes")).simple);
  CHECK(prefixes.loop_depth == 2);
  CHECK(prefixes.bool_depth == 0);
}

TEST_CASE("simple programs of the corpus agree with their sources") {
  for (const auto& name : corpus_names()) {
    CAPTURE(name);
    const hl::Program p = load_corpus(name);
    const sp::Program s = rewrite_to_simple(p).simple;
    for (const Word& w : random_words(alphabet_of(p), 40, 9, 21)) CHECK(sp::eval_simple(s, w) == run_word(p, w));
  }
}
