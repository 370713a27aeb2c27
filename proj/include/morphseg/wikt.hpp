#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "morphseg/core.hpp"

namespace morphseg {

// One {{...}} etymology template: name, language code, positional parts
// (markup-stripped), key=value arguments.
struct EtymTemplate {
  std::string name;
  std::string language;
  std::vector<std::string> parts;
  std::map<std::string, std::string> named_args;
};

struct TemplateScan {
  std::vector<EtymTemplate> templates;
  std::vector<std::string> diagnostics;
};

// Extracts all top-level {{...}} spans from arbitrary wikitext. Total:
// malformed input produces diagnostics, never an exception. Nested
// templates inside parts are resolved one level deep (replaced by their
// last positional argument); deeper nesting skips the template with a
// diagnostic.
TemplateScan parse_templates(std::string_view wikitext);

struct PageRecord {
  std::string title;
  std::string wikitext;
};

struct CompoundExtraction {
  Dataset entries;  // concatenative compounds, category 001
  Dataset review;   // non-concatenative candidates, kept for manual review
  std::size_t pages_seen = 0;
  std::size_t pages_emitted = 0;
  std::vector<std::string> diagnostics;
};

// Compound extraction over (title, wikitext) pages: "compound" templates
// of the requested language, plus "affix" templates whose parts are all
// free morphemes (no leading or trailing hyphen). Output is sorted by
// title.
CompoundExtraction extract_compounds(const std::vector<PageRecord>& pages,
                                     const std::string& language);

// Reads a 2-column TSV of (title, wikitext-fragment).
std::vector<PageRecord> read_page_file(const std::string& path);

// Second step of root-word extraction: inherited words minus those that
// already appear in the derivational/compound data (exact NFC match).
std::set<std::string> root_filter(const std::set<std::string>& inherited,
                                  const std::set<std::string>& derived_or_compound);

}  // namespace morphseg
