#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace polycheck {

/// A letter of the (conceptually infinite) input alphabet, stored as a
/// Unicode scalar value.
using Letter = char32_t;
using Word = std::vector<Letter>;

/// Stands for "some letter outside the support". Lives in the private-use
/// area so that no program constant can collide with it.
inline constexpr Letter kBlank = 0xE000;

/// Throws std::invalid_argument on malformed input.
Word decode_utf8(std::string_view text);

std::string encode_utf8(Letter c);
std::string encode_utf8(const Word& w);

/// Renders a letter as a single-quoted literal, escaping quotes and
/// backslashes; the blank letter is rendered as '\blank'.
std::string quote_letter(Letter c);

/// Double-quoted rendering of a word, same escaping rules.
std::string quote_word(const Word& w);

}  // namespace polycheck
