#pragma once

// Shared fixtures: corpus loading and word enumeration.

#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "polycheck/frontend.hpp"
#include "polycheck/hl_interpreter.hpp"

namespace polycheck::testing {

inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names{
      "identity", "reverse",     "prefixes",         "asToBs",       "compress_as",   "get_first_word",
      "get_last_word", "reverse_add_hash", "map_reverse", "litteral_test", "subwords_ab", "bibtex"};
  return names;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string corpus_path(const std::string& name) { return std::string(POLYCHECK_CORPUS_DIR) + "/" + name + ".pr"; }

inline hl::Program load_corpus(const std::string& name) {
  return typecheck_program(parse_program(read_text(corpus_path(name))));
}

inline hl::Program load_source(const std::string& text) { return typecheck_program(parse_program(text)); }

/// support(p) ∪ {blank}.
inline std::vector<Letter> alphabet_of(const hl::Program& p) {
  std::set<Letter> s = support_constants(p);
  s.insert(kBlank);
  return {s.begin(), s.end()};
}

inline Word word(std::string_view utf8) { return decode_utf8(utf8); }

/// Every word over `alphabet` of length at most `max_length`, shortest first.
inline std::vector<Word> all_words(const std::vector<Letter>& alphabet, int max_length) {
  std::vector<Word> out{Word{}};
  std::size_t begin = 0;
  for (int len = 1; len <= max_length; ++len) {
    const std::size_t end = out.size();
    for (std::size_t k = begin; k < end; ++k)
      for (Letter c : alphabet) {
        Word w = out[k];
        w.push_back(c);
        out.push_back(std::move(w));
      }
    begin = end;
  }
  return out;
}

inline std::vector<Word> random_words(const std::vector<Letter>& alphabet, int count, int max_length,
                                      std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> len(0, max_length);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::vector<Word> out;
  for (int k = 0; k < count; ++k) {
    Word w(static_cast<std::size_t>(len(rng)));
    for (auto& c : w) c = alphabet[pick(rng)];
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace polycheck::testing
