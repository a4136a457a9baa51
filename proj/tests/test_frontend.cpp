#include <string>

#include "doctest.h"
#include "polycheck/diagnostics.hpp"
#include "polycheck/frontend.hpp"
#include "polycheck/hl_interpreter.hpp"
#include "test_support.hpp"

using namespace polycheck;
using namespace polycheck::testing;

namespace {

ErrorCategory category_of(const std::string& text) {
  try {
    typecheck_program(parse_program(text));
  } catch (const CompileError& e) {
    return e.category();
  }
  FAIL("program was accepted");
  return ErrorCategory::Runtime;
}

}  // namespace

TEST_CASE("every corpus program parses and typechecks") {
  for (const auto& name : corpus_names()) {
    CAPTURE(name);
    const hl::Program p = load_corpus(name);
    CHECK(signature(p.main_function()) == "(Out[1], 0) -> Out[1]");
  }
}

TEST_CASE("subwords program: function count and signatures") {
  const hl::Program p = load_corpus("subwords_ab");
  CHECK(p.functions.size() == 4);
  CHECK(p.main == "main");
  CHECK(signature(*p.find("getBetween")) == "(Out[1], 2) -> Out[1]");
  CHECK(signature(*p.find("containsAB")) == "(Out[1], 0) -> Bool");
}

TEST_CASE("swap program shape") {
  const hl::Program p = load_corpus("asToBs");
  REQUIRE(p.functions.size() == 1);
  const auto* loop = std::get_if<hl::s::For>(&p.functions[0].body.node);
  REQUIRE(loop != nullptr);
  CHECK(loop->dir == hl::Direction::Forward);
  CHECK(std::holds_alternative<hl::s::If>(loop->body->node));
}

TEST_CASE("syntax errors carry a position") {
  try {
    parse_program("");
    FAIL("empty input accepted");
  } catch (const CompileError& e) {
    CHECK(e.category() == ErrorCategory::Syntax);
    CHECK(std::string(e.what()).find("expected function definition") != std::string::npos);
    CHECK(e.span().line == 1);
  }
}

TEST_CASE("unsupported equalities are rejected with their own diagnostic") {
  auto rejected = [](const std::string& file) {
    return category_of(read_text(std::string(POLYCHECK_CORPUS_DIR) + "/rejected/" + file));
  };
  CHECK(rejected("eq_different_indices.pr") == ErrorCategory::CrossListComparison);
  CHECK(rejected("eq_boolean.pr") == ErrorCategory::BooleanArgument);
  CHECK(rejected("eq_shadowing.pr") == ErrorCategory::Shadowing);
  CHECK(rejected("pcp.pr") == ErrorCategory::NestedWordEquality);
}

TEST_CASE("language restrictions") {
  const std::string head = "def main(w : [Char]) : [Char] :=\n";
  CHECK(category_of(head + "  while True do skip done\n") == ErrorCategory::WhileOrRecursion);
  CHECK(category_of(head + "  yield g(w)\n") == ErrorCategory::WhileOrRecursion);
  CHECK(category_of(head + "  w := w\n") == ErrorCategory::MutationViolation);
  CHECK(category_of(head +
                    "  for (i, c) in enumerate(w) do\n"
                    "    let mut b := False in\n"
                    "    b := False\n"
                    "  done\n") == ErrorCategory::BooleanReset);
  CHECK(category_of(head + "  yield q\n") == ErrorCategory::UnknownName);
}

TEST_CASE("typechecking is idempotent") {
  for (const auto& name : corpus_names()) {
    CAPTURE(name);
    const hl::Program p = load_corpus(name);
    CHECK(typecheck_program(p) == p);
  }
}

TEST_CASE("pretty printing round-trips") {
  for (const auto& name : corpus_names()) {
    CAPTURE(name);
    const hl::Program p = load_corpus(name);
    CHECK(typecheck_program(parse_program(hl::to_string(p))) == p);
  }
}

TEST_CASE("pre- and postcondition formulas") {
  const Word ab = word("xaby");
  CHECK(fo::qrank(parse_spec("true")) == 0);
  CHECK(eval_formula(parse_spec("true"), {}));
  CHECK(eval_formula(parse_spec("contains_factor(\"ab\")"), ab));
  CHECK_FALSE(eval_formula(parse_spec("contains_factor(\"ab\")"), word("axb")));
  CHECK(eval_formula(parse_spec("ends_with(\"a\")"), word("ba")));
  CHECK_FALSE(eval_formula(parse_spec("ends_with(\"a\")"), word("ab")));
  CHECK(eval_formula(parse_spec("starts_with(\"xa\")"), ab));
  CHECK(eval_formula(parse_spec("forall x. exists y. x <= y and label(y) == 'y'"), ab));
  CHECK(eval_formula(parse_spec("exists x. exists y. x != y and label(x) != 'a'"), ab));
  CHECK_THROWS_AS(parse_spec("label(x) == 'a'"), CompileError);
  CHECK_THROWS_AS(parse_spec("forall x"), CompileError);
}

TEST_CASE("factor sugar matches a direct substring test") {
  const auto f = parse_spec("contains_factor(\"ab\")");
  const auto e = parse_spec("ends_with(\"ab\")");
  const auto s = parse_spec("starts_with(\"ab\")");
  for (const Word& w : all_words({'a', 'b', kBlank}, 5)) {
    const std::u32string str(w.begin(), w.end());
    CHECK(eval_formula(f, w) == (str.find(U"ab") != std::u32string::npos));
    CHECK(eval_formula(e, w) == (str.size() >= 2 && str.substr(str.size() - 2) == U"ab"));
    CHECK(eval_formula(s, w) == (str.rfind(U"ab", 0) == 0));
  }
}
