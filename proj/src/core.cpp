#include "morphseg/core.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "morphseg/error.hpp"
#include "morphseg/text.hpp"

namespace morphseg {

namespace {

constexpr std::string_view kSeparator = " @@";  // space, at, at
constexpr std::string_view kMarker = "@@";

std::string where(std::size_t line_number) {
  return line_number == 0 ? std::string()
                          : " on line " + std::to_string(line_number);
}

void check_morpheme_text(const std::string& text) {
  if (text.empty()) throw FormatError("empty morpheme");
  if (contains_whitespace(text)) {
    throw FormatError("morpheme contains whitespace: \"" + text + "\"");
  }
  if (text.find(kMarker) != std::string::npos) {
    throw FormatError("morpheme contains \"@@\": \"" + text + "\"");
  }
}

}  // namespace

Morpheme::Morpheme(std::string text) : text_(std::move(text)) {
  check_morpheme_text(text_);
}

Segmentation::Segmentation(std::vector<Morpheme> morphemes)
    : morphemes_(std::move(morphemes)) {
  if (morphemes_.empty()) {
    throw FormatError("segmentation must contain at least one morpheme");
  }
}

Segmentation::Segmentation(const std::vector<std::string>& morphemes) {
  morphemes_.reserve(morphemes.size());
  for (const std::string& m : morphemes) morphemes_.emplace_back(m);
  if (morphemes_.empty()) {
    throw FormatError("segmentation must contain at least one morpheme");
  }
}

Segmentation::Segmentation(std::initializer_list<std::string> morphemes)
    : Segmentation(std::vector<std::string>(morphemes)) {}

std::string Segmentation::concat() const {
  std::string out;
  for (const Morpheme& m : morphemes_) out += m.str();
  return out;
}

std::string CategoryMask::code() const {
  std::string c(3, '0');
  if (inflection) c[0] = '1';
  if (derivation) c[1] = '1';
  if (compound) c[2] = '1';
  return c;
}

const std::vector<std::string>& all_category_codes() {
  static const std::vector<std::string> codes = {"000", "001", "010", "011",
                                                 "100", "101", "110", "111"};
  return codes;
}

CategoryMask parse_category(std::string_view code) {
  if (code.size() != 3 || code.find_first_not_of("01") != std::string_view::npos) {
    throw FormatError("malformed category code: \"" + std::string(code) +
                      "\" (expected three binary digits)");
  }
  CategoryMask mask;
  mask.inflection = code[0] == '1';
  mask.derivation = code[1] == '1';
  mask.compound = code[2] == '1';
  return mask;
}

Segmentation parse_segmentation(std::string_view field) {
  if (field.empty()) throw FormatError("empty segmentation field");
  const std::string normalized = nfc(field);
  std::string_view s = normalized;

  if (s.substr(0, kMarker.size()) == kMarker) {
    throw FormatError("marker on first morpheme at byte offset 0");
  }

  std::vector<Morpheme> morphemes;
  std::size_t start = 0;
  while (true) {
    std::size_t sep = s.find(kSeparator, start);
    std::size_t end = (sep == std::string_view::npos) ? s.size() : sep;
    std::string_view piece = s.substr(start, end - start);
    if (piece.empty()) {
      throw FormatError("empty morpheme at byte offset " +
                        std::to_string(start));
    }
    try {
      morphemes.emplace_back(std::string(piece));
    } catch (const FormatError& e) {
      throw FormatError(std::string(e.what()) + " at byte offset " +
                        std::to_string(start));
    }
    if (sep == std::string_view::npos) break;
    start = sep + kSeparator.size();
    if (start >= s.size()) {
      throw FormatError("dangling marker at byte offset " +
                        std::to_string(sep));
    }
  }
  return Segmentation(std::move(morphemes));
}

std::string format_segmentation(const Segmentation& seg) {
  std::string out;
  bool first = true;
  for (const Morpheme& m : seg.morphemes()) {
    if (!first) out += kSeparator;
    out += m.str();
    first = false;
  }
  return out;
}

namespace {

std::string parse_word_field(std::string_view field) {
  std::string word = nfc(field);
  if (word.empty()) throw FormatError("empty word field");
  if (word.find('\t') != std::string::npos ||
      word.find('\n') != std::string::npos) {
    throw FormatError("word contains control whitespace");
  }
  return word;
}

}  // namespace

WordEntry parse_word_line(std::string_view line, int columns,
                          std::size_t line_number) {
  if (columns < 1 || columns > 3) {
    throw ConfigError("word-level schema must have 1, 2 or 3 columns");
  }
  std::vector<std::string> fields = split_char(line, '\t');
  if (fields.size() != static_cast<std::size_t>(columns)) {
    throw FormatError("expected " + std::to_string(columns) +
                      " tab-separated fields, got " +
                      std::to_string(fields.size()) + where(line_number));
  }
  WordEntry entry;
  try {
    entry.word = parse_word_field(fields[0]);
    if (columns >= 2) entry.segmentation = parse_segmentation(fields[1]);
    if (columns >= 3) entry.category = parse_category(fields[2]);
  } catch (const FormatError& e) {
    throw FormatError(std::string(e.what()) + where(line_number));
  }
  return entry;
}

std::string format_word_line(const WordEntry& entry, int columns) {
  if (columns < 1 || columns > 3) {
    throw ConfigError("word-level schema must have 1, 2 or 3 columns");
  }
  std::string line = entry.word;
  if (columns >= 2) {
    if (!entry.segmentation) {
      throw DataError("entry for \"" + entry.word + "\" has no segmentation");
    }
    line += '\t';
    line += format_segmentation(*entry.segmentation);
  }
  if (columns >= 3) {
    if (!entry.category) {
      throw DataError("entry for \"" + entry.word + "\" has no category");
    }
    line += '\t';
    line += entry.category->code();
  }
  return line;
}

SentenceEntry parse_sentence_line(std::string_view line,
                                  std::size_t line_number) {
  std::vector<std::string> fields = split_char(line, '\t');
  if (fields.size() != 2) {
    throw FormatError("expected 2 tab-separated fields, got " +
                      std::to_string(fields.size()) + where(line_number));
  }
  SentenceEntry entry;
  std::vector<Segmentation> segmented;
  std::vector<std::string> tokens;
  try {
    entry.sentence = nfc(fields[0]);
    tokens = split_whitespace(entry.sentence);
    std::vector<std::string> seg_tokens = split_whitespace(nfc(fields[1]));

    // Rejoin segmented tokens: a token beginning with "@@" continues the
    // previous word.
    std::string current;
    for (const std::string& tok : seg_tokens) {
      if (tok.rfind("@@", 0) == 0) {
        if (current.empty()) {
          throw FormatError("marker on first morpheme of a token");
        }
        current += " " + tok;
      } else {
        if (!current.empty()) segmented.push_back(parse_segmentation(current));
        current = tok;
      }
    }
    if (!current.empty()) segmented.push_back(parse_segmentation(current));
  } catch (const FormatError& e) {
    throw FormatError(std::string(e.what()) + where(line_number));
  }

  if (segmented.size() != tokens.size()) {
    throw FormatError("token count mismatch: sentence has " +
                      std::to_string(tokens.size()) +
                      " tokens but segmentation has " +
                      std::to_string(segmented.size()) + where(line_number));
  }
  entry.segmented = std::move(segmented);
  return entry;
}

std::string format_sentence_line(const SentenceEntry& entry) {
  if (!entry.segmented) {
    throw DataError("sentence entry has no segmentation");
  }
  std::string line = entry.sentence;
  line += '\t';
  bool first = true;
  for (const Segmentation& seg : *entry.segmented) {
    if (!first) line += ' ';
    line += format_segmentation(seg);
    first = false;
  }
  return line;
}

int detect_columns(std::string_view first_line) {
  std::size_t tabs = 0;
  for (char c : first_line) {
    if (c == '\t') ++tabs;
  }
  if (tabs > 2) {
    throw FormatError("word-level line has " + std::to_string(tabs + 1) +
                      " columns; expected at most 3");
  }
  return static_cast<int>(tabs) + 1;
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  // Trailing blank line from a final newline is not an entry.
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

}  // namespace

Dataset read_word_file(const std::string& path, std::string language,
                       int columns) {
  Dataset data;
  data.language = std::move(language);
  data.kind = DatasetKind::word_level;
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) return data;
  if (columns == 0) columns = detect_columns(lines.front());
  data.words.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    data.words.push_back(parse_word_line(lines[i], columns, i + 1));
  }
  return data;
}

Dataset read_sentence_file(const std::string& path, std::string language) {
  Dataset data;
  data.language = std::move(language);
  data.kind = DatasetKind::sentence_level;
  std::vector<std::string> lines = read_lines(path);
  data.sentences.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    data.sentences.push_back(parse_sentence_line(lines[i], i + 1));
  }
  return data;
}

void write_word_file(const std::string& path, const Dataset& data,
                     int columns) {
  if (data.kind != DatasetKind::word_level) {
    throw DataError("expected a word-level dataset");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  for (const WordEntry& e : data.words) {
    out << format_word_line(e, columns) << '\n';
  }
}

void write_sentence_file(const std::string& path, const Dataset& data) {
  if (data.kind != DatasetKind::sentence_level) {
    throw DataError("expected a sentence-level dataset");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  for (const SentenceEntry& e : data.sentences) {
    out << format_sentence_line(e) << '\n';
  }
}

}  // namespace morphseg
