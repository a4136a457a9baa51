#pragma once

// Tokenizer shared by the program, formula and simple-program parsers.

#include <string>
#include <string_view>
#include <vector>

#include "polycheck/diagnostics.hpp"
#include "polycheck/letters.hpp"

namespace polycheck::detail {

enum class Tok { Ident, Char, String, Symbol, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier or symbol spelling
  Word word;         // decoded literal contents
  SourceSpan span;
};

/// Throws CompileError(Syntax) on malformed input.
std::vector<Token> tokenize(std::string_view source);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Tok::End; }

  bool is(std::string_view text, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return (t.kind == Tok::Symbol || t.kind == Tok::Ident) && t.text == text;
  }
  bool accept(std::string_view text) {
    if (!is(text)) return false;
    next();
    return true;
  }
  const Token& expect(std::string_view text);
  std::string expect_ident(std::string_view what);

  [[noreturn]] void fail(const std::string& expected) const;

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

std::string describe(const Token& t);

}  // namespace polycheck::detail
