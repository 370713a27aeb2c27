#pragma once

#include <compare>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace morphseg {

// A canonical morpheme: NFC text, nonempty, no whitespace, no "@@".
class Morpheme {
 public:
  explicit Morpheme(std::string text);

  const std::string& str() const { return text_; }

  auto operator<=>(const Morpheme&) const = default;

 private:
  std::string text_;
};

// Ordered sequence of canonical morphemes; a root word is a single
// morpheme. For surface segmenters the concatenation of morphemes equals
// the word; canonical segmenters may diverge from it.
class Segmentation {
 public:
  explicit Segmentation(std::vector<Morpheme> morphemes);
  explicit Segmentation(const std::vector<std::string>& morphemes);
  Segmentation(std::initializer_list<std::string> morphemes);

  const std::vector<Morpheme>& morphemes() const { return morphemes_; }
  std::size_t size() const { return morphemes_.size(); }
  const Morpheme& operator[](std::size_t i) const { return morphemes_[i]; }

  // Concatenation of the morpheme texts (the surface reading).
  std::string concat() const;

  auto operator<=>(const Segmentation&) const = default;

 private:
  std::vector<Morpheme> morphemes_;
};

// Word-formation processes of one word, as a 3-bit mask. The code order
// is inflection, derivation, compound ("110" = inflection + derivation).
struct CategoryMask {
  bool inflection = false;
  bool derivation = false;
  bool compound = false;

  std::string code() const;

  auto operator<=>(const CategoryMask&) const = default;
};

// The 8 codes "000".."111" in ascending binary order.
const std::vector<std::string>& all_category_codes();

struct WordEntry {
  std::string word;
  std::optional<Segmentation> segmentation;
  std::optional<CategoryMask> category;
  // Donor language for augmented entries; never serialized (the file
  // format has no column for it).
  std::optional<std::string> source_language;
};

struct SentenceEntry {
  std::string sentence;
  // One Segmentation per whitespace token of `sentence`, when present.
  std::optional<std::vector<Segmentation>> segmented;
};

enum class DatasetKind { word_level, sentence_level };

struct Dataset {
  std::string language;  // ISO 639-3, e.g. "eng", "mon"
  DatasetKind kind = DatasetKind::word_level;
  std::vector<WordEntry> words;          // used when kind == word_level
  std::vector<SentenceEntry> sentences;  // used when kind == sentence_level

  std::size_t size() const {
    return kind == DatasetKind::word_level ? words.size() : sentences.size();
  }
};

// --- Parsing and serialization of the TSV formats ---

// "110" -> mask; malformed codes raise FormatError naming the value.
CategoryMask parse_category(std::string_view code);

// "sheep @@y @@ness" -> [sheep, y, ness]. Non-initial morphemes carry the
// " @@" prefix marker; markers are stripped. Errors report byte offsets.
Segmentation parse_segmentation(std::string_view field);

// Exact inverse of parse_segmentation: joins with " @@".
std::string format_segmentation(const Segmentation& seg);

// One word-level TSV line. `columns`: 1 = word, 2 = word + segmentation,
// 3 = word + segmentation + category. `line_number` (1-based) is used in
// error messages when nonzero.
WordEntry parse_word_line(std::string_view line, int columns,
                          std::size_t line_number = 0);

std::string format_word_line(const WordEntry& entry, int columns);

// One sentence-level TSV line: sentence TAB segmented-sentence. Token
// counts of the two fields must agree.
SentenceEntry parse_sentence_line(std::string_view line,
                                  std::size_t line_number = 0);

std::string format_sentence_line(const SentenceEntry& entry);

// --- Whole-file I/O (UTF-8, Unix newlines, no header, no quoting) ---

// `columns` = 0 infers the schema from the first line and then enforces
// it for the rest of the file.
Dataset read_word_file(const std::string& path, std::string language,
                       int columns = 0);
Dataset read_sentence_file(const std::string& path, std::string language);

void write_word_file(const std::string& path, const Dataset& data,
                     int columns);
void write_sentence_file(const std::string& path, const Dataset& data);

// Column count of a word-level line (tabs + 1); validates the range.
int detect_columns(std::string_view first_line);

}  // namespace morphseg
