#include "polycheck/letters.hpp"

#include <stdexcept>

namespace polycheck {

Word decode_utf8(std::string_view text) {
  Word out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    auto b0 = static_cast<unsigned char>(text[i]);
    int extra = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      extra = 1;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      extra = 2;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      extra = 3;
    } else {
      throw std::invalid_argument("malformed UTF-8 lead byte");
    }
    for (int k = 1; k <= extra; ++k) {
      if (i + k >= text.size()) throw std::invalid_argument("truncated UTF-8 sequence");
      auto b = static_cast<unsigned char>(text[i + k]);
      if ((b & 0xC0) != 0x80) throw std::invalid_argument("malformed UTF-8 continuation byte");
      cp = (cp << 6) | (b & 0x3F);
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
      throw std::invalid_argument("invalid Unicode scalar value");
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string encode_utf8(Letter c) {
  std::string s;
  if (c < 0x80) {
    s += static_cast<char>(c);
  } else if (c < 0x800) {
    s += static_cast<char>(0xC0 | (c >> 6));
    s += static_cast<char>(0x80 | (c & 0x3F));
  } else if (c < 0x10000) {
    s += static_cast<char>(0xE0 | (c >> 12));
    s += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    s += static_cast<char>(0x80 | (c & 0x3F));
  } else {
    s += static_cast<char>(0xF0 | (c >> 18));
    s += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
    s += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
    s += static_cast<char>(0x80 | (c & 0x3F));
  }
  return s;
}

std::string encode_utf8(const Word& w) {
  std::string s;
  for (Letter c : w) s += encode_utf8(c);
  return s;
}

namespace {

std::string escaped(Letter c, char quote) {
  if (c == kBlank) return "\\blank";
  if (c == static_cast<Letter>(quote) || c == U'\\') return std::string("\\") + static_cast<char>(c);
  if (c == U'\n') return "\\n";
  if (c == U'\t') return "\\t";
  return encode_utf8(c);
}

}  // namespace

std::string quote_letter(Letter c) { return "'" + escaped(c, '\'') + "'"; }

std::string quote_word(const Word& w) {
  std::string s = "\"";
  for (Letter c : w) s += escaped(c, '"');
  return s + "\"";
}

}  // namespace polycheck
