#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "morphseg/error.hpp"
#include "morphseg/evaluation.hpp"
#include "morphseg/rng.hpp"
#include "test_util.hpp"

using namespace morphseg;

namespace {

// Brute-force bipartite maximum matching on equal-string edges; the
// independent oracle for the multiset-intersection overlap count.
int matching_oracle(const Segmentation& gold, const Segmentation& pred) {
  const std::size_t n = pred.size();
  std::vector<int> gold_used(gold.size(), 0);
  int best = 0;
  // n <= 6 in oracle tests, so 2^n enumeration of pred subsets is cheap.
  for (std::size_t mask = 0; mask < (1u << n); ++mask) {
    std::fill(gold_used.begin(), gold_used.end(), 0);
    int matched = 0;
    bool feasible = true;
    for (std::size_t i = 0; i < n && feasible; ++i) {
      if (!(mask & (1u << i))) continue;
      feasible = false;
      for (std::size_t j = 0; j < gold.size(); ++j) {
        if (!gold_used[j] && gold[j].str() == pred[i].str()) {
          gold_used[j] = 1;
          feasible = true;
          ++matched;
          break;
        }
      }
    }
    if (feasible) best = std::max(best, matched);
  }
  return best;
}

WordEntry gold_entry(const std::vector<std::string>& morphemes,
                     const std::string& code = "") {
  WordEntry e;
  e.segmentation = Segmentation(morphemes);
  e.word = e.segmentation->concat();
  if (!code.empty()) e.category = parse_category(code);
  return e;
}

}  // namespace

TEST_CASE("morpheme overlap counts multiset intersection") {
  PairScore s = morpheme_overlap(Segmentation({"sheep", "y", "ness"}),
                                 Segmentation({"sheep", "y", "ness"}));
  CHECK(s.correct == 3);
  CHECK(s.n_pred == 3);
  CHECK(s.n_gold == 3);

  s = morpheme_overlap(Segmentation({"sheep", "y", "ness"}),
                       Segmentation({"sheep", "iness"}));
  CHECK(s.correct == 1);
  CHECK(s.n_pred == 2);
  CHECK(s.n_gold == 3);

  s = morpheme_overlap(Segmentation({"fun", "y", "est"}),
                       Segmentation({"funn", "i", "est"}));
  CHECK(s.correct == 1);
  CHECK(s.n_pred == 3);
  CHECK(s.n_gold == 3);
}

TEST_CASE("overlap equals brute-force maximum matching") {
  Rng rng(5);
  for (int iter = 0; iter < 500; ++iter) {
    // Small alphabet so duplicate morphemes are common.
    auto make = [&rng] {
      std::vector<std::string> ms;
      const std::size_t n = 1 + rng.below(6);
      for (std::size_t i = 0; i < n; ++i) {
        ms.push_back(std::string(1, static_cast<char>('a' + rng.below(3))));
      }
      return Segmentation(ms);
    };
    const Segmentation gold = make(), pred = make();
    CHECK(morpheme_overlap(gold, pred).correct == matching_oracle(gold, pred));
  }
}

TEST_CASE("overlap swap symmetry") {
  Rng rng(19);
  for (int iter = 0; iter < 300; ++iter) {
    const Segmentation a = testutil::random_segmentation(rng);
    const Segmentation b = testutil::random_segmentation(rng);
    const PairScore ab = score_pair(a, b);
    const PairScore ba = score_pair(b, a);
    CHECK(ab.correct == ba.correct);
    CHECK(ab.n_pred == ba.n_gold);
    CHECK(ab.n_gold == ba.n_pred);
    CHECK(ab.edit_distance == ba.edit_distance);
  }
}

TEST_CASE("levenshtein on formatted segmentation strings") {
  CHECK(levenshtein("fun @@y @@est", "fun @@y @@est") == 0);
  CHECK(levenshtein("fun @@y @@est", "funn @@i @@est") == 2);
  CHECK(levenshtein("hot @@pot", "hotpot") == 3);
  // Computed over Unicode scalars, not bytes.
  CHECK(levenshtein("гэр", "гэс") == 1);
  CHECK(levenshtein("", "abc") == 3);
}

TEST_CASE("levenshtein satisfies the triangle inequality") {
  Rng rng(23);
  for (int iter = 0; iter < 300; ++iter) {
    const std::string a = testutil::random_morpheme(rng, 8);
    const std::string b = testutil::random_morpheme(rng, 8);
    const std::string c = testutil::random_morpheme(rng, 8);
    CHECK(levenshtein(a, c) <= levenshtein(a, b) + levenshtein(b, c));
  }
}

TEST_CASE("F1 is 1 iff multisets are equal; distance 0 iff strings equal") {
  Rng rng(29);
  for (int iter = 0; iter < 300; ++iter) {
    const Segmentation gold = testutil::random_segmentation(rng);
    Segmentation pred = testutil::random_segmentation(rng);
    if (rng.below(2) == 0) {
      // Shuffled copy: equal as multisets.
      std::vector<std::string> ms;
      for (const Morpheme& m : gold.morphemes()) ms.push_back(m.str());
      Rng inner(iter);
      inner.shuffle(ms);
      pred = Segmentation(ms);
    }
    const PairScore s = score_pair(gold, pred);
    const bool full = s.correct == s.n_pred && s.correct == s.n_gold;
    std::vector<std::string> gs, ps;
    for (const Morpheme& m : gold.morphemes()) gs.push_back(m.str());
    for (const Morpheme& m : pred.morphemes()) ps.push_back(m.str());
    std::sort(gs.begin(), gs.end());
    std::sort(ps.begin(), ps.end());
    CHECK(full == (gs == ps));
    CHECK((s.edit_distance == 0) ==
          (format_segmentation(gold) == format_segmentation(pred)));
  }
}

TEST_CASE("aggregate pools counts (micro)") {
  const std::vector<WordEntry> gold = {gold_entry({"sheep", "y", "ness"}),
                                       gold_entry({"sheep", "y", "ness"})};
  const std::vector<Segmentation> pred = {Segmentation({"sheep", "iness"}),
                                          Segmentation({"sheep", "y", "ness"})};
  // Pair scores (1,2,3) and (3,3,3).
  const MetricsReport r = aggregate(gold, pred);
  CHECK(r.sum_correct == 4);
  CHECK(r.sum_pred == 5);
  CHECK(r.sum_gold == 6);
  CHECK(format_percent(r.precision) == "80.00");
  CHECK(format_percent(r.recall) == "66.67");
  CHECK(format_percent(r.f1) == "72.73");
}

TEST_CASE("aggregate trivial cases") {
  const std::vector<WordEntry> gold = {gold_entry({"walk", "ed"}),
                                       gold_entry({"hot", "pot"})};
  const std::vector<Segmentation> pred = {Segmentation({"walk", "ed"}),
                                          Segmentation({"hot", "pot"})};
  MetricsReport r = aggregate(gold, pred);
  CHECK(r.precision == 1.0);
  CHECK(r.recall == 1.0);
  CHECK(r.f1 == 1.0);
  CHECK(r.avg_levenshtein == 0.0);

  // Singleton aggregation equals the pair's own ratios.
  const std::vector<WordEntry> g1 = {gold_entry({"sheep", "y", "ness"})};
  const std::vector<Segmentation> p1 = {Segmentation({"sheep", "iness"})};
  r = aggregate(g1, p1);
  CHECK(r.precision == doctest::Approx(0.5));
  CHECK(r.recall == doctest::Approx(1.0 / 3.0));
  CHECK(r.f1 == doctest::Approx(0.4));
}

TEST_CASE("aggregate length mismatch is an alignment error") {
  const std::vector<WordEntry> gold = {gold_entry({"a"})};
  CHECK_THROWS_AS(aggregate(gold, {}), DataError);
}

TEST_CASE("aggregated counts equal sums of per-pair counts") {
  Rng rng(31);
  std::vector<WordEntry> gold;
  std::vector<Segmentation> pred;
  std::vector<PairScore> scores;
  for (int i = 0; i < 200; ++i) {
    WordEntry e;
    e.segmentation = testutil::random_segmentation(rng);
    e.word = e.segmentation->concat();
    e.category = parse_category(all_category_codes()[rng.below(8)]);
    gold.push_back(std::move(e));
    pred.push_back(testutil::random_segmentation(rng));
    scores.push_back(score_pair(*gold.back().segmentation, pred.back()));
  }
  const MetricsReport r = aggregate(gold, pred);
  std::int64_t c = 0, p = 0, g = 0, e = 0;
  for (const PairScore& s : scores) {
    c += s.correct;
    p += s.n_pred;
    g += s.n_gold;
    e += s.edit_distance;
  }
  CHECK(r.sum_correct == c);
  CHECK(r.sum_pred == p);
  CHECK(r.sum_gold == g);
  CHECK(r.sum_edit == e);
  // Per-category counts partition the totals.
  std::int64_t n_cat = 0;
  for (const auto& [code, sub] : r.per_category) n_cat += sub.n_instances;
  CHECK(n_cat == r.n_instances);
  // Threaded scoring produces the identical report.
  const MetricsReport r4 = aggregate(gold, pred, MatchPolicy::multiset, 4);
  CHECK(r4.sum_correct == r.sum_correct);
  CHECK(r4.sum_edit == r.sum_edit);
  CHECK(r4.f1 == r.f1);
}

TEST_CASE("gold entry without segmentation is rejected") {
  WordEntry e;
  e.word = "x";
  CHECK_THROWS_AS(aggregate({e}, {Segmentation({"x"})}), DataError);
}

TEST_CASE("macro average of the winning row") {
  const std::map<std::string, double> row = {
      {"ces", 93.84}, {"eng", 93.63}, {"fra", 95.73},
      {"ita", 97.43}, {"lat", 99.38}, {"rus", 99.35},
      {"mon", 98.51}, {"hun", 98.72}, {"spa", 99.04}};
  CHECK(format_fixed2(macro_average(row)) == "97.29");
  CHECK(macro_average({{"x", 50.0}}) == 50.0);
  CHECK(macro_average({{"x", 0.0}, {"y", 100.0}}) == 50.0);
  CHECK_THROWS_AS(macro_average({}), DataError);
}

TEST_CASE("sentence evaluation scores every aligned token") {
  Dataset gold, pred;
  gold.kind = pred.kind = DatasetKind::sentence_level;
  gold.sentences.push_back(parse_sentence_line(
      "Би өдөр эмээ уусан\tБи өдөр эм @@ээ уух @@сан"));
  pred.sentences = gold.sentences;
  MetricsReport r = evaluate_sentences(gold, pred);
  CHECK(r.precision == 1.0);
  CHECK(r.recall == 1.0);
  CHECK(r.f1 == 1.0);
  CHECK(r.avg_levenshtein == 0.0);
  CHECK(r.n_instances == 4);

  // Token scored (0,1,2): no shared morpheme string.
  pred.sentences[0] = parse_sentence_line(
      "Би өдөр эмээ уусан\tБи өдөр эмээ уух @@сан");
  r = evaluate_sentences(gold, pred);
  CHECK(r.sum_correct == 4);  // Би, өдөр, уух, сан match; эмээ token scores 0
  CHECK(r.sum_pred == 5);
  CHECK(r.sum_gold == 6);

  // Misalignment names the sentence index.
  Dataset empty;
  empty.kind = DatasetKind::sentence_level;
  CHECK_THROWS_AS(evaluate_sentences(gold, empty), DataError);
  Dataset bad = pred;
  bad.sentences[0] = parse_sentence_line("Би өдөр\tБи өдөр");
  CHECK_THROWS_WITH_AS(evaluate_sentences(gold, bad),
                       doctest::Contains("sentence 1"), DataError);
}

TEST_CASE("positional matching policy") {
  const Segmentation gold({"a", "b", "a"});
  const Segmentation swapped({"b", "a", "a"});
  CHECK(morpheme_overlap(gold, swapped, MatchPolicy::multiset).correct == 3);
  CHECK(morpheme_overlap(gold, swapped, MatchPolicy::positional).correct == 1);
}

TEST_CASE("length analysis buckets partition lengths") {
  const std::vector<LengthBucket> buckets = parse_length_buckets("1:5,5:10,10:");
  REQUIRE(buckets.size() == 3);
  for (std::size_t len = 1; len < 30; ++len) {
    int hits = 0;
    for (const LengthBucket& b : buckets) hits += b.contains(len) ? 1 : 0;
    CHECK(hits == 1);
  }

  // All words length 4, one bucket: the single cell equals corpus F1.
  std::vector<WordEntry> gold = {gold_entry({"walk", "ed"}, "100"),
                                 gold_entry({"hot", "pot"}, "001")};
  gold[0].word = "wlkd";
  gold[1].word = "htpt";
  const std::vector<Segmentation> pred = {Segmentation({"walk", "ed"}),
                                          Segmentation({"hotpot"})};
  const LengthAnalysis a =
      analyze_by_length(gold, pred, parse_length_buckets("1:5"));
  const MetricsReport corpus = aggregate(gold, pred);
  REQUIRE(a.f1.count("100") == 1);
  REQUIRE(a.f1.count("001") == 1);
  CHECK(*a.f1.at("100")[0] == doctest::Approx(1.0));
  // Micro-F1 over both entries differs per category but the combined
  // table is consistent with the corpus when there is one category.
  CHECK(corpus.f1 > 0.0);

  // Empty bucket is marked, not zero.
  const LengthAnalysis b =
      analyze_by_length(gold, pred, parse_length_buckets("1:5,20:"));
  CHECK_FALSE(b.f1.at("100")[1].has_value());
  const std::string tsv = length_analysis_tsv(b);
  CHECK(tsv.find('-') != std::string::npos);

  // Perfect predictions give 100 in every nonempty cell.
  const std::vector<Segmentation> perfect = {Segmentation({"walk", "ed"}),
                                             Segmentation({"hot", "pot"})};
  const LengthAnalysis c =
      analyze_by_length(gold, perfect, parse_length_buckets("1:5,5:"));
  for (const auto& [code, row] : c.f1) {
    for (const auto& cell : row) {
      if (cell) CHECK(*cell == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("best system per category with lexicographic tie-breaking") {
  auto report_with = [](double f1_a, double f1_b) {
    MetricsReport r;
    MetricsReport a, b;
    a.f1 = f1_a;
    b.f1 = f1_b;
    r.per_category["000"] = a;
    r.per_category["100"] = b;
    return r;
  };
  std::map<std::string, MetricsReport> reports;
  reports["sysB"] = report_with(0.9, 0.4);
  // Single system wins everything.
  auto best = best_per_category(reports);
  CHECK(best.at("000").system == "sysB");
  CHECK(best.at("100").system == "sysB");
  CHECK_FALSE(best.at("000").tie);

  reports["sysA"] = report_with(0.9, 0.2);
  best = best_per_category(reports);
  CHECK(best.at("000").system == "sysA");  // exact tie -> smaller name
  CHECK(best.at("000").tie);
  CHECK(best.at("100").system == "sysB");  // elementwise argmax
  CHECK_FALSE(best.at("100").tie);
}

TEST_CASE("percent formatting rounds half to even at 2 decimals") {
  // 0.125 and 0.375 are exact in binary: true half-way cases.
  CHECK(round2(0.125) == 0.12);
  CHECK(round2(0.375) == 0.38);
  CHECK(format_percent(0.4) == "40.00");
  CHECK(format_percent(2.0 / 3.0) == "66.67");
  CHECK(round2(72.727272) == doctest::Approx(72.73));
}

TEST_CASE("report JSON carries percentage-scale values") {
  const std::vector<WordEntry> gold = {gold_entry({"sheep", "y", "ness"}, "010"),
                                       gold_entry({"sheep", "y", "ness"}, "010")};
  const std::vector<Segmentation> pred = {Segmentation({"sheep", "iness"}),
                                          Segmentation({"sheep", "y", "ness"})};
  const std::string json = report_json(aggregate(gold, pred));
  CHECK(json.find("\"precision\": 80.0") != std::string::npos);
  CHECK(json.find("\"f1\": 72.73") != std::string::npos);
  CHECK(json.find("per_category") != std::string::npos);
  CHECK(json.find("\"010\"") != std::string::npos);
}
