#include "lexer.hpp"

#include <array>

namespace polycheck::detail {

namespace {

constexpr std::array<std::string_view, 19> kSymbols = {
    "<=>", "===", ":=", "==", "!=", "<=", ">=", "=>", "<", ">", "=", "(", ")", "[", "]", ",", ":", ".", ";",
};

bool ident_start(Letter c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool ident_char(Letter c) { return ident_start(c) || (c >= '0' && c <= '9') || c == '\''; }

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
  Word text;
  try {
    text = decode_utf8(source);
  } catch (const std::invalid_argument& e) {
    throw CompileError(ErrorCategory::Syntax, {1, 1}, e.what());
  }
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&] {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  auto fail = [&](SourceSpan at, const std::string& msg) { throw CompileError(ErrorCategory::Syntax, at, msg); };

  while (i < text.size()) {
    Letter c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance();
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance();
      continue;
    }
    SourceSpan span{line, col};
    if (ident_start(c)) {
      Token t{Tok::Ident, {}, {}, span};
      while (i < text.size() && ident_char(text[i])) {
        t.text += static_cast<char>(text[i]);
        advance();
      }
      out.push_back(std::move(t));
      continue;
    }
    if (c == '\'' || c == '"') {
      const Letter quote = c;
      advance();
      Token t{quote == '\'' ? Tok::Char : Tok::String, {}, {}, span};
      for (;;) {
        if (i >= text.size() || text[i] == '\n') fail(span, "unterminated literal");
        Letter d = text[i];
        if (d == quote) {
          advance();
          break;
        }
        if (d == '\\') {
          advance();
          if (i >= text.size()) fail(span, "unterminated literal");
          Letter e = text[i];
          if (e == 'n') {
            t.word.push_back('\n');
            advance();
          } else if (e == 't') {
            t.word.push_back('\t');
            advance();
          } else if (e == '\\' || e == '\'' || e == '"') {
            t.word.push_back(e);
            advance();
          } else if (e == 'b') {
            static constexpr std::string_view kBlankName = "blank";
            for (char k : kBlankName) {
              if (i >= text.size() || text[i] != static_cast<Letter>(k)) fail(span, "unknown escape sequence");
              advance();
            }
            t.word.push_back(kBlank);
          } else {
            fail(span, "unknown escape sequence");
          }
          continue;
        }
        t.word.push_back(d);
        advance();
      }
      if (t.kind == Tok::Char && t.word.size() != 1) fail(span, "character literal must contain exactly one letter");
      out.push_back(std::move(t));
      continue;
    }
    bool matched = false;
    for (std::string_view sym : kSymbols) {
      if (i + sym.size() > text.size()) continue;
      bool ok = true;
      for (std::size_t k = 0; k < sym.size(); ++k)
        if (text[i + k] != static_cast<Letter>(sym[k])) ok = false;
      if (!ok) continue;
      out.push_back(Token{Tok::Symbol, std::string(sym), {}, span});
      for (std::size_t k = 0; k < sym.size(); ++k) advance();
      matched = true;
      break;
    }
    if (!matched) fail(span, "unexpected character '" + encode_utf8(c) + "'");
  }
  out.push_back(Token{Tok::End, {}, {}, {line, col}});
  return out;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Char: return "character literal";
    case Tok::String: return "string literal";
    default: return "'" + t.text + "'";
  }
}

const Token& TokenStream::expect(std::string_view text) {
  if (!is(text)) fail("'" + std::string(text) + "'");
  return next();
}

std::string TokenStream::expect_ident(std::string_view what) {
  if (peek().kind != Tok::Ident) fail(std::string(what));
  return next().text;
}

void TokenStream::fail(const std::string& expected) const {
  throw CompileError(ErrorCategory::Syntax, peek().span, "expected " + expected + ", found " + describe(peek()));
}

}  // namespace polycheck::detail
