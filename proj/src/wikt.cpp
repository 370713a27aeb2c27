#include "morphseg/wikt.hpp"

#include <algorithm>
#include <fstream>

#include "morphseg/error.hpp"
#include "morphseg/text.hpp"

namespace morphseg {

namespace {

std::string trim(std::string_view s) {
  std::size_t lo = 0, hi = s.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
  return std::string(s.substr(lo, hi - lo));
}

bool looks_like_language_code(const std::string& s) {
  if (s.size() < 2) return false;
  std::size_t letters = 0;
  for (char c : s) {
    if (c >= 'a' && c <= 'z') {
      ++letters;
    } else if (c != '-' && !(c >= '0' && c <= '9')) {
      return false;
    }
  }
  // "en", "eng", "nds-de", ... : a short lowercase chunk first.
  return letters >= 2 && s.size() <= 11 && s[0] >= 'a' && s[0] <= 'z' &&
         s.find("--") == std::string::npos;
}

// Strips [[link|text]] -> text, [[link]] -> link, bold/italic quotes.
std::string strip_markup(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s.substr(i, 2) == "[[") {
      const std::size_t close = s.find("]]", i + 2);
      if (close == std::string_view::npos) {
        out += s.substr(i);
        break;
      }
      std::string_view inner = s.substr(i + 2, close - i - 2);
      const std::size_t pipe = inner.rfind('|');
      out += pipe == std::string_view::npos ? inner : inner.substr(pipe + 1);
      i = close + 2;
    } else if (s[i] == '\'') {
      ++i;  // quote runs are formatting
    } else {
      out += s[i];
      ++i;
    }
  }
  return out;
}

// Splits template body fields on '|' at nesting depth zero.
std::vector<std::string> split_fields(std::string_view body) {
  std::vector<std::string> fields;
  std::string cur;
  int brace_depth = 0, bracket_depth = 0;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body.substr(i, 2) == "{{") {
      brace_depth++;
      cur += "{{";
      ++i;
    } else if (body.substr(i, 2) == "}}" && brace_depth > 0) {
      brace_depth--;
      cur += "}}";
      ++i;
    } else if (body.substr(i, 2) == "[[") {
      bracket_depth++;
      cur += "[[";
      ++i;
    } else if (body.substr(i, 2) == "]]" && bracket_depth > 0) {
      bracket_depth--;
      cur += "]]";
      ++i;
    } else if (body[i] == '|' && brace_depth == 0 && bracket_depth == 0) {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += body[i];
    }
  }
  fields.push_back(cur);
  return fields;
}

// Resolves one level of template nesting inside a field: {{l|en|word}}
// becomes "word". Returns false when nesting goes deeper.
bool resolve_nested(std::string& field) {
  while (true) {
    const std::size_t open = field.find("{{");
    if (open == std::string::npos) return true;
    const std::size_t close = field.find("}}", open + 2);
    if (close == std::string::npos) return false;
    const std::string inner = field.substr(open + 2, close - open - 2);
    if (inner.find("{{") != std::string::npos) return false;
    const std::vector<std::string> inner_fields = split_fields(inner);
    std::string replacement;
    for (std::size_t i = 1; i < inner_fields.size(); ++i) {
      const std::string f = trim(inner_fields[i]);
      if (f.find('=') == std::string::npos && !f.empty()) replacement = f;
    }
    field = field.substr(0, open) + replacement + field.substr(close + 2);
  }
}

}  // namespace

TemplateScan parse_templates(std::string_view wikitext) {
  TemplateScan scan;
  std::size_t i = 0;
  while (i < wikitext.size()) {
    const std::size_t open = wikitext.find("{{", i);
    if (open == std::string_view::npos) break;
    // Find the matching close, tracking nesting.
    int depth = 0;
    std::size_t j = open;
    std::size_t close = std::string_view::npos;
    while (j < wikitext.size()) {
      if (wikitext.substr(j, 2) == "{{") {
        depth++;
        j += 2;
      } else if (wikitext.substr(j, 2) == "}}") {
        depth--;
        j += 2;
        if (depth == 0) {
          close = j - 2;
          break;
        }
      } else {
        ++j;
      }
    }
    if (close == std::string_view::npos) {
      scan.diagnostics.push_back("unbalanced braces at byte offset " +
                                 std::to_string(open) + "; remainder skipped");
      break;
    }

    const std::string_view body = wikitext.substr(open + 2, close - open - 2);
    i = close + 2;

    std::vector<std::string> fields = split_fields(body);
    EtymTemplate tpl;
    tpl.name = trim(fields.empty() ? "" : fields[0]);
    if (tpl.name.empty()) {
      scan.diagnostics.push_back("template with empty name at byte offset " +
                                 std::to_string(open));
      continue;
    }
    bool ok = true;
    std::size_t first_positional = 1;
    if (fields.size() > 1) {
      const std::string second = trim(fields[1]);
      if (looks_like_language_code(second)) {
        tpl.language = second;
        first_positional = 2;
      }
    }
    for (std::size_t f = first_positional; f < fields.size(); ++f) {
      std::string field = fields[f];
      if (!resolve_nested(field)) {
        scan.diagnostics.push_back("template \"" + tpl.name +
                                   "\" has nesting deeper than one level; "
                                   "skipped");
        ok = false;
        break;
      }
      const std::size_t eq = field.find('=');
      if (eq != std::string::npos) {
        tpl.named_args[trim(field.substr(0, eq))] =
            trim(strip_markup(field.substr(eq + 1)));
      } else {
        tpl.parts.push_back(trim(strip_markup(field)));
      }
    }
    if (ok) scan.templates.push_back(std::move(tpl));
  }
  return scan;
}

CompoundExtraction extract_compounds(const std::vector<PageRecord>& pages,
                                     const std::string& language) {
  CompoundExtraction out;
  out.entries.kind = DatasetKind::word_level;
  out.entries.language = language;
  out.review.kind = DatasetKind::word_level;
  out.review.language = language;

  for (const PageRecord& page : pages) {
    ++out.pages_seen;
    const TemplateScan scan = parse_templates(page.wikitext);
    for (const std::string& d : scan.diagnostics) {
      out.diagnostics.push_back(page.title + ": " + d);
    }
    for (const EtymTemplate& tpl : scan.templates) {
      if (tpl.language != language) continue;
      const bool is_compound = tpl.name == "compound";
      const bool is_affix = tpl.name == "affix";
      if (!is_compound && !is_affix) continue;
      if (tpl.parts.size() < 2) continue;

      // Affix templates qualify only when every part is a free morpheme.
      bool free_parts = true;
      for (const std::string& part : tpl.parts) {
        if (part.empty() || part.front() == '-' || part.back() == '-') {
          free_parts = false;
          break;
        }
      }
      if (is_affix && !free_parts) continue;
      if (!free_parts) continue;  // hyphenated compound parts: skip too

      WordEntry entry;
      std::vector<std::string> morphemes;
      try {
        entry.word = nfc(page.title);
        for (const std::string& part : tpl.parts) morphemes.push_back(nfc(part));
        entry.segmentation = Segmentation(morphemes);
      } catch (const Error& e) {
        out.diagnostics.push_back(page.title + ": " + e.what());
        continue;
      }
      entry.category = parse_category("001");
      if (entry.segmentation->concat() == entry.word) {
        out.entries.words.push_back(std::move(entry));
      } else {
        out.review.words.push_back(std::move(entry));
      }
      ++out.pages_emitted;
      break;  // one entry per page title
    }
  }
  auto by_title = [](const WordEntry& a, const WordEntry& b) {
    return a.word < b.word;
  };
  std::sort(out.entries.words.begin(), out.entries.words.end(), by_title);
  std::sort(out.review.words.begin(), out.review.words.end(), by_title);
  return out;
}

std::vector<PageRecord> read_page_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::vector<PageRecord> pages;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw FormatError("expected 2 tab-separated fields on line " +
                        std::to_string(line_number));
    }
    pages.push_back(PageRecord{line.substr(0, tab), line.substr(tab + 1)});
  }
  return pages;
}

std::set<std::string> root_filter(const std::set<std::string>& inherited,
                                  const std::set<std::string>& derived_or_compound) {
  std::set<std::string> derived_nfc;
  for (const std::string& w : derived_or_compound) derived_nfc.insert(nfc(w));
  std::set<std::string> out;
  for (const std::string& w : inherited) {
    const std::string n = nfc(w);
    if (!derived_nfc.count(n)) out.insert(n);
  }
  return out;
}

}  // namespace morphseg
