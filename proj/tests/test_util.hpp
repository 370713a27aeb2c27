#pragma once

// Shared corpus generators for tests. Everything is driven by the
// deterministic Rng so failures reproduce.

#include <string>
#include <vector>

#include "morphseg/core.hpp"
#include "morphseg/rng.hpp"

namespace morphseg::testutil {

// NFC-safe alphabet mixing ASCII, accented Latin and Cyrillic.
inline const std::vector<std::string>& letter_pool() {
  static const std::vector<std::string> pool = {
      "a", "b", "c", "d", "e", "g", "k", "l", "m", "n", "o", "r", "s", "t",
      "é", "ü", "ő", "č", "š",
      "г", "э", "м", "т", "л", "х", "и", "й", "б", "д"};
  return pool;
}

inline std::string random_morpheme(Rng& rng, std::size_t max_len = 6) {
  const auto& pool = letter_pool();
  const std::size_t len = 1 + rng.below(max_len);
  std::string s;
  for (std::size_t i = 0; i < len; ++i) {
    s += pool[rng.below(pool.size())];
  }
  return s;
}

inline Segmentation random_segmentation(Rng& rng, std::size_t max_morphemes = 4) {
  const std::size_t n = 1 + rng.below(max_morphemes);
  std::vector<std::string> morphemes;
  for (std::size_t i = 0; i < n; ++i) morphemes.push_back(random_morpheme(rng));
  return Segmentation(morphemes);
}

inline CategoryMask random_category(Rng& rng) {
  return parse_category(all_category_codes()[rng.below(8)]);
}

inline WordEntry random_word_entry(Rng& rng) {
  WordEntry e;
  e.segmentation = random_segmentation(rng);
  // Half the time the word is the concatenation (surface-style), half the
  // time an independent string (canonical divergence).
  e.word = rng.below(2) == 0 ? e.segmentation->concat() : random_morpheme(rng, 8);
  e.category = random_category(rng);
  return e;
}

inline Dataset random_word_dataset(Rng& rng, std::size_t n,
                                   std::string language = "xxx") {
  Dataset d;
  d.language = std::move(language);
  d.kind = DatasetKind::word_level;
  for (std::size_t i = 0; i < n; ++i) d.words.push_back(random_word_entry(rng));
  return d;
}

inline SentenceEntry random_sentence_entry(Rng& rng,
                                           std::size_t max_tokens = 6) {
  const std::size_t n = 1 + rng.below(max_tokens);
  std::vector<Segmentation> segs;
  std::string sentence;
  for (std::size_t i = 0; i < n; ++i) {
    Segmentation seg = random_segmentation(rng, 3);
    if (i) sentence += ' ';
    sentence += seg.concat();
    segs.push_back(std::move(seg));
  }
  SentenceEntry e;
  e.sentence = sentence;
  e.segmented = std::move(segs);
  return e;
}

}  // namespace morphseg::testutil
