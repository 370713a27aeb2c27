#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "morphseg/rng.hpp"
#include "morphseg/wikt.hpp"

using namespace morphseg;

namespace {

std::vector<std::string> texts(const Segmentation& seg) {
  std::vector<std::string> out;
  for (const Morpheme& m : seg.morphemes()) out.push_back(m.str());
  return out;
}

}  // namespace

TEST_CASE("parse_templates extracts the compound template") {
  TemplateScan scan = parse_templates("{{compound|en|news|paper}}");
  REQUIRE(scan.templates.size() == 1);
  CHECK(scan.templates[0].name == "compound");
  CHECK(scan.templates[0].language == "en");
  CHECK(scan.templates[0].parts == std::vector<std::string>{"news", "paper"});

  scan = parse_templates("Equivalent to {{compound|en|news|paper}}.");
  REQUIRE(scan.templates.size() == 1);
  CHECK(scan.templates[0].parts == std::vector<std::string>{"news", "paper"});

  CHECK(parse_templates("no templates here").templates.empty());
}

TEST_CASE("parse_templates handles named args, markup and spacing") {
  const TemplateScan scan = parse_templates(
      "{{affix|en|basket|ball|t1=container|pos=noun}} and "
      "{{compound|en|[[news]]|[[paper|papers]]}}");
  REQUIRE(scan.templates.size() == 2);
  CHECK(scan.templates[0].name == "affix");
  CHECK(scan.templates[0].parts == std::vector<std::string>{"basket", "ball"});
  CHECK(scan.templates[0].named_args.at("t1") == "container");
  CHECK(scan.templates[0].named_args.at("pos") == "noun");
  CHECK(scan.templates[1].parts == std::vector<std::string>{"news", "papers"});
}

TEST_CASE("parse_templates is total on malformed input") {
  const TemplateScan scan =
      parse_templates("{{compound|en|news|paper}} {{broken|en|x");
  CHECK(scan.templates.size() == 1);
  REQUIRE(!scan.diagnostics.empty());
  CHECK(scan.diagnostics[0].find("unbalanced") != std::string::npos);

  // Never throws on arbitrary bytes.
  Rng rng(9);
  for (int iter = 0; iter < 200; ++iter) {
    std::string junk;
    const char pool[] = "{}|=[]ab ";
    for (int i = 0; i < 30; ++i) junk += pool[rng.below(sizeof(pool) - 1)];
    parse_templates(junk);
  }
}

TEST_CASE("one level of nesting resolves; deeper nesting is flagged") {
  TemplateScan scan = parse_templates("{{compound|en|{{l|en|news}}|paper}}");
  REQUIRE(scan.templates.size() == 1);
  CHECK(scan.templates[0].parts == std::vector<std::string>{"news", "paper"});

  scan = parse_templates("{{compound|en|{{l|en|{{deep|x}}}}|paper}}");
  CHECK(scan.templates.empty());
  REQUIRE(!scan.diagnostics.empty());
  CHECK(scan.diagnostics[0].find("deeper") != std::string::npos);
}

TEST_CASE("extract_compounds emits 3-column entries for compound pages") {
  const std::vector<PageRecord> pages = {
      {"newspaper", "Etymology. Equivalent to {{compound|en|news|paper}}."},
      {"basketball", "From {{affix|en|basket|ball}}."},
      {"plain", "no templates at all"},
      {"worker", "{{affix|en|work|-er}}"},          // bound part: skipped
      {"de-page", "{{compound|de|zeit|ung}}"},      // other language
  };
  const CompoundExtraction out = extract_compounds(pages, "en");
  CHECK(out.pages_seen == 5);
  REQUIRE(out.entries.words.size() == 2);
  CHECK(out.entries.words[0].word == "basketball");
  CHECK(texts(*out.entries.words[0].segmentation) ==
        std::vector<std::string>{"basket", "ball"});
  CHECK(out.entries.words[0].category->code() == "001");
  CHECK(out.entries.words[1].word == "newspaper");
  CHECK(out.review.words.empty());
}

TEST_CASE("non-concatenative compounds go to the review set") {
  const std::vector<PageRecord> pages = {
      {"Bindestrichwort", "{{compound|de|binde|strich|wort}}"},
      {"handwerk", "{{compound|de|hand|werk}}"},
  };
  const CompoundExtraction out = extract_compounds(pages, "de");
  REQUIRE(out.entries.words.size() == 1);
  CHECK(out.entries.words[0].word == "handwerk");
  REQUIRE(out.review.words.size() == 1);
  CHECK(out.review.words[0].word == "Bindestrichwort");
  // Surface property holds for every main-set entry.
  for (const WordEntry& e : out.entries.words) {
    CHECK(e.segmentation->concat() == e.word);
  }
}

TEST_CASE("root_filter subtracts the derived and compound words") {
  // |result| = |inherited| - |inherited ∩ derived|; extra derived-only
  // entries must not affect the count.
  std::set<std::string> inherited, derived;
  for (int i = 0; i < 2791; ++i) inherited.insert("w" + std::to_string(i));
  for (int i = 0; i < 1168; ++i) derived.insert("w" + std::to_string(i));
  for (int i = 5000; i < 5100; ++i) derived.insert("w" + std::to_string(i));
  const std::set<std::string> roots = root_filter(inherited, derived);
  CHECK(roots.size() == 2791 - 1168);

  // Disjoint sets: identity.
  CHECK(root_filter({"a", "b"}, {"c"}) == std::set<std::string>{"a", "b"});
  // Fully covered: empty.
  CHECK(root_filter({"a"}, {"a", "b"}).empty());
}
