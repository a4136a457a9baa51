#include <algorithm>
#include <map>
#include <random>

#include "doctest.h"
#include "polycheck/hl_interpreter.hpp"
#include "test_support.hpp"

using namespace polycheck;
using namespace polycheck::testing;

namespace {

// All factors w[i..j] containing the subsequence ab, i ascending then j
// descending, each followed by '#'.
Word subwords_oracle(const Word& w) {
  Word out;
  const int n = static_cast<int>(w.size());
  for (int i = 0; i < n; ++i)
    for (int j = n - 1; j >= 0; --j) {
      if (j < i) continue;
      const Word factor(w.begin() + i, w.begin() + j + 1);
      auto a = std::find(factor.begin(), factor.end(), Letter{'a'});
      if (a == factor.end() || std::find(a, factor.end(), Letter{'b'}) == factor.end()) continue;
      out.insert(out.end(), factor.begin(), factor.end());
      out.push_back('#');
    }
  return out;
}

Word rename(const Word& w, const std::map<Letter, Letter>& f) {
  Word out;
  for (Letter c : w) out.push_back(f.count(c) != 0 ? f.at(c) : c);
  return out;
}

}  // namespace

TEST_CASE("reference outputs") {
  CHECK(run_word(load_corpus("asToBs"), word("abc")) == word("bbc"));
  CHECK(run_word(load_corpus("map_reverse"), word("hello world")) == word("olleh dlrow"));
  CHECK(run_word(load_corpus("subwords_ab"), word("ab")) == word("ab#"));
  CHECK(run_word(load_corpus("reverse"), word("abc")) == word("cba"));
  CHECK(run_word(load_corpus("prefixes"), word("abc")) == word("a#ab#abc#"));
  CHECK(run_word(load_corpus("compress_as"), word("aabaaa")) == word("aba"));
  CHECK(run_word(load_corpus("get_first_word"), word("ab cd ef")) == word("ab"));
  CHECK(run_word(load_corpus("get_last_word"), word("ab cd ef")) == word("ef"));
  CHECK(run_word(load_corpus("reverse_add_hash"), word("ab")) == word("ba#"));
}

TEST_CASE("subwords program against a brute-force enumeration") {
  const hl::Program p = load_corpus("subwords_ab");
  for (const Word& w : all_words({'a', 'b', 'c'}, 5)) {
    CAPTURE(quote_word(w));
    CHECK(run_word(p, w) == subwords_oracle(w));
  }
}

TEST_CASE("windows between two positions") {
  const hl::Program p = load_source(
      "def getBetween(l : [Char] with (i, j)) : [Char] :=\n"
      "  for (k, c) in enumerate(l) do\n"
      "    if i <= k and k <= j then\n"
      "      yield c\n"
      "    endif\n"
      "  done\n"
      "\n"
      "def main(w : [Char]) : [Char] :=\n"
      "  for (i, c) in enumerate(w) do\n"
      "    for (j, d) in enumerate(w) do\n"
      "      for (k, e) in enumerate(getBetween(w with (i, j))) do\n"
      "        yield e\n"
      "      done\n"
      "      yield '#'\n"
      "    done\n"
      "  done\n");
  for (const Word& w : {word("abcd"), word("xy"), Word{}}) {
    Word expect;
    for (std::size_t i = 0; i < w.size(); ++i)
      for (std::size_t j = 0; j < w.size(); ++j) {
        for (std::size_t k = i; k <= j; ++k) expect.push_back(w[k]);
        expect.push_back('#');
      }
    CHECK(run_word(p, w) == expect);
  }
  // (i, j) = (1, 2) on "abcd" is the seventh window.
  const Word out = run_word(p, word("abcd"));
  CHECK(std::u32string(out.begin(), out.end()).find(U"#bc#") != std::u32string::npos);
}

TEST_CASE("support constants") {
  CHECK(support_constants(load_corpus("asToBs")) == std::set<Letter>{'a', 'b'});
  CHECK(support_constants(load_corpus("identity")).empty());
  CHECK(support_constants(load_corpus("subwords_ab")) == std::set<Letter>{'#', 'a', 'b'});
}

TEST_CASE("nested outputs and boolean results") {
  const hl::Program p = load_source(
      "def twice(w : [Char]) : [[Char]] :=\n"
      "  yield w\n"
      "  yield w\n"
      "\n"
      "def main(w : [Char]) : [[Char]] :=\n"
      "  return twice(w)\n");
  const auto v = std::get<NestedWord>(eval_program(p, NestedWord::word(word("ab"))));
  CHECK(v.depth == 2);
  CHECK(format(v) == "ab#ab");
  CHECK(format(v, OutputFormat::Nested) == "[\"ab\", \"ab\"]");

  const hl::Program q = load_source(
      "def main(w : [Char]) : Bool :=\n"
      "  for (i, c) in enumerate(w) do\n"
      "    if c === 'a' then\n"
      "      return True\n"
      "    endif\n"
      "  done\n"
      "  return False\n");
  CHECK(std::get<bool>(eval_program(q, NestedWord::word(word("ba")))));
  CHECK_FALSE(std::get<bool>(eval_program(q, NestedWord::word(word("bb")))));
}

TEST_CASE("outputs commute with renamings that fix the support") {
  std::mt19937 rng(7);
  const std::vector<Letter> pool{'a', 'b', 'c', 'd', 'x', 'y', ' ', '#', 'z', 'q'};
  for (const auto& name : corpus_names()) {
    CAPTURE(name);
    const hl::Program p = load_corpus(name);
    const auto support = support_constants(p);
    std::vector<Letter> free;
    for (Letter c : pool)
      if (support.count(c) == 0) free.push_back(c);
    REQUIRE_FALSE(free.empty());
    std::map<Letter, Letter> f;
    for (Letter c : free) f[c] = free[rng() % free.size()];
    std::vector<Letter> alphabet(support.begin(), support.end());
    alphabet.insert(alphabet.end(), free.begin(), free.end());
    for (const Word& w : random_words(alphabet, 20, 8, 11)) CHECK(run_word(p, rename(w, f)) == rename(run_word(p, w), f));
  }
}

TEST_CASE("determinism") {
  const hl::Program p = load_corpus("map_reverse");
  for (const Word& w : random_words({'a', 'b', ' '}, 20, 10, 3)) CHECK(run_word(p, w) == run_word(p, w));
}
