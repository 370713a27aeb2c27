#include "morphseg/evaluation.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <cstdio>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "morphseg/error.hpp"
#include "morphseg/utf8.hpp"

namespace morphseg {

PairScore morpheme_overlap(const Segmentation& gold, const Segmentation& pred,
                           MatchPolicy policy) {
  PairScore s;
  s.n_gold = static_cast<std::int64_t>(gold.size());
  s.n_pred = static_cast<std::int64_t>(pred.size());
  if (policy == MatchPolicy::positional) {
    const std::size_t n = std::min(gold.size(), pred.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (gold[i] == pred[i]) ++s.correct;
    }
    return s;
  }
  std::unordered_map<std::string, std::int64_t> counts;
  for (const Morpheme& m : gold.morphemes()) ++counts[m.str()];
  for (const Morpheme& m : pred.morphemes()) {
    auto it = counts.find(m.str());
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++s.correct;
    }
  }
  return s;
}

std::int64_t levenshtein(std::string_view gold_string,
                         std::string_view pred_string) {
  const std::u32string a = utf8_decode(gold_string);
  const std::u32string b = utf8_decode(pred_string);
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::int64_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<std::int64_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = static_cast<std::int64_t>(i);
    for (std::size_t j = 1; j <= m; ++j) {
      const std::int64_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

PairScore score_pair(const Segmentation& gold, const Segmentation& pred,
                     MatchPolicy policy) {
  PairScore s = morpheme_overlap(gold, pred, policy);
  s.edit_distance =
      levenshtein(format_segmentation(gold), format_segmentation(pred));
  return s;
}

MetricsReport reduce_scores(const std::vector<PairScore>& scores) {
  MetricsReport r;
  r.n_instances = static_cast<std::int64_t>(scores.size());
  for (const PairScore& s : scores) {
    r.sum_correct += s.correct;
    r.sum_pred += s.n_pred;
    r.sum_gold += s.n_gold;
    r.sum_edit += s.edit_distance;
  }
  r.precision = r.sum_pred > 0
                    ? static_cast<double>(r.sum_correct) / r.sum_pred
                    : 0.0;
  r.recall = r.sum_gold > 0 ? static_cast<double>(r.sum_correct) / r.sum_gold
                            : 0.0;
  r.f1 = (r.precision + r.recall) > 0.0
             ? 2.0 * r.precision * r.recall / (r.precision + r.recall)
             : 0.0;
  r.avg_levenshtein =
      r.n_instances > 0 ? static_cast<double>(r.sum_edit) / r.n_instances
                        : 0.0;
  return r;
}

namespace {

std::vector<PairScore> score_all(const std::vector<WordEntry>& gold,
                                 const std::vector<Segmentation>& pred,
                                 MatchPolicy policy, unsigned threads) {
  std::vector<PairScore> scores(gold.size());
  auto score_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      scores[i] = score_pair(*gold[i].segmentation, pred[i], policy);
    }
  };
  if (threads <= 1 || gold.size() < 2 * threads) {
    score_range(0, gold.size());
    return scores;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (gold.size() + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(gold.size(), lo + chunk);
    if (lo < hi) pool.emplace_back(score_range, lo, hi);
  }
  for (std::thread& th : pool) th.join();
  return scores;
}

}  // namespace

MetricsReport aggregate(const std::vector<WordEntry>& gold,
                        const std::vector<Segmentation>& pred,
                        MatchPolicy policy, unsigned threads) {
  if (gold.size() != pred.size()) {
    throw DataError("alignment error: " + std::to_string(gold.size()) +
                    " gold entries vs " + std::to_string(pred.size()) +
                    " predictions");
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold[i].segmentation) {
      throw DataError("gold entry " + std::to_string(i + 1) + " (\"" +
                      gold[i].word + "\") has no segmentation");
    }
  }
  const std::vector<PairScore> scores = score_all(gold, pred, policy, threads);
  MetricsReport report = reduce_scores(scores);

  std::map<std::string, std::vector<PairScore>> by_category;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].category) {
      by_category[gold[i].category->code()].push_back(scores[i]);
    }
  }
  for (const auto& [code, subset] : by_category) {
    report.per_category[code] = reduce_scores(subset);
  }
  return report;
}

double macro_average(const std::map<std::string, double>& per_language_f1) {
  if (per_language_f1.empty()) {
    throw DataError("macro average over an empty language map");
  }
  double sum = 0.0;
  for (const auto& [lang, f1] : per_language_f1) sum += f1;
  return sum / static_cast<double>(per_language_f1.size());
}

MetricsReport evaluate_sentences(const Dataset& gold, const Dataset& pred,
                                 MatchPolicy policy) {
  if (gold.kind != DatasetKind::sentence_level ||
      pred.kind != DatasetKind::sentence_level) {
    throw DataError("sentence evaluation requires sentence-level datasets");
  }
  if (gold.sentences.size() != pred.sentences.size()) {
    throw DataError("alignment error: " +
                    std::to_string(gold.sentences.size()) +
                    " gold sentences vs " +
                    std::to_string(pred.sentences.size()) + " predicted");
  }
  std::vector<PairScore> scores;
  for (std::size_t i = 0; i < gold.sentences.size(); ++i) {
    const SentenceEntry& g = gold.sentences[i];
    const SentenceEntry& p = pred.sentences[i];
    if (!g.segmented || !p.segmented) {
      throw DataError("sentence " + std::to_string(i + 1) +
                      " lacks a segmentation");
    }
    if (g.segmented->size() != p.segmented->size()) {
      throw DataError("alignment error in sentence " + std::to_string(i + 1) +
                      ": " + std::to_string(g.segmented->size()) +
                      " gold tokens vs " +
                      std::to_string(p.segmented->size()) + " predicted");
    }
    for (std::size_t t = 0; t < g.segmented->size(); ++t) {
      scores.push_back(score_pair((*g.segmented)[t], (*p.segmented)[t],
                                  policy));
    }
  }
  return reduce_scores(scores);
}

std::string LengthBucket::label() const {
  std::string s = std::to_string(lo) + ":";
  if (hi) s += std::to_string(*hi);
  return s;
}

std::vector<LengthBucket> parse_length_buckets(std::string_view spec) {
  std::vector<LengthBucket> buckets;
  std::size_t start = 0;
  auto parse_size = [](std::string_view s) -> std::size_t {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos) {
      throw ConfigError("bad length bucket bound: \"" + std::string(s) + "\"");
    }
    return static_cast<std::size_t>(std::stoull(std::string(s)));
  };
  while (start <= spec.size()) {
    std::size_t comma = spec.find(',', start);
    std::string_view part = spec.substr(
        start, comma == std::string_view::npos ? spec.size() - start
                                               : comma - start);
    std::size_t colon = part.find(':');
    if (colon == std::string_view::npos) {
      throw ConfigError("length bucket \"" + std::string(part) +
                        "\" must look like lo:hi or lo:");
    }
    LengthBucket b;
    b.lo = parse_size(part.substr(0, colon));
    std::string_view hi = part.substr(colon + 1);
    if (!hi.empty()) {
      b.hi = parse_size(hi);
      if (*b.hi <= b.lo) {
        throw ConfigError("empty length bucket \"" + std::string(part) + "\"");
      }
    }
    buckets.push_back(b);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (buckets.empty()) throw ConfigError("no length buckets given");
  return buckets;
}

LengthAnalysis analyze_by_length(const std::vector<WordEntry>& gold,
                                 const std::vector<Segmentation>& pred,
                                 const std::vector<LengthBucket>& buckets,
                                 MatchPolicy policy) {
  if (gold.size() != pred.size()) {
    throw DataError("alignment error: " + std::to_string(gold.size()) +
                    " gold entries vs " + std::to_string(pred.size()) +
                    " predictions");
  }
  // (category, bucket) -> scores
  std::map<std::string, std::vector<std::vector<PairScore>>> cells;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold[i].category) {
      throw DataError("length analysis requires categories; entry " +
                      std::to_string(i + 1) + " (\"" + gold[i].word +
                      "\") has none");
    }
    if (!gold[i].segmentation) {
      throw DataError("gold entry " + std::to_string(i + 1) +
                      " has no segmentation");
    }
    const std::string code = gold[i].category->code();
    auto [it, inserted] = cells.try_emplace(code);
    if (inserted) it->second.resize(buckets.size());
    const std::size_t len = utf8_length(gold[i].word);
    for (std::size_t b = 0; b < buckets.size(); ++b) {
      if (buckets[b].contains(len)) {
        it->second[b].push_back(
            score_pair(*gold[i].segmentation, pred[i], policy));
      }
    }
  }
  LengthAnalysis out;
  out.buckets = buckets;
  for (const auto& [code, per_bucket] : cells) {
    std::vector<std::optional<double>> row(buckets.size());
    for (std::size_t b = 0; b < buckets.size(); ++b) {
      if (!per_bucket[b].empty()) {
        row[b] = reduce_scores(per_bucket[b]).f1;
      }
    }
    out.f1[code] = std::move(row);
  }
  return out;
}

std::string length_analysis_tsv(const LengthAnalysis& analysis) {
  std::string out = "category";
  for (const LengthBucket& b : analysis.buckets) out += "\t" + b.label();
  out += "\n";
  for (const auto& [code, row] : analysis.f1) {
    out += code;
    for (const std::optional<double>& f1 : row) {
      out += "\t";
      out += f1 ? format_percent(*f1) : "-";
    }
    out += "\n";
  }
  return out;
}

std::map<std::string, BestSystem> best_per_category(
    const std::map<std::string, MetricsReport>& reports) {
  if (reports.empty()) throw DataError("no system reports given");
  const auto& first_categories = reports.begin()->second.per_category;
  for (const auto& [name, report] : reports) {
    if (report.per_category.size() != first_categories.size()) {
      throw DataError("system \"" + name +
                      "\" does not share the category keys of the others");
    }
    for (const auto& [code, sub] : report.per_category) {
      if (!first_categories.count(code)) {
        throw DataError("system \"" + name + "\" has extra category " + code);
      }
    }
  }
  std::map<std::string, BestSystem> best;
  for (const auto& [code, unused] : first_categories) {
    BestSystem b;
    bool first = true;
    for (const auto& [name, report] : reports) {
      const double f1 = report.per_category.at(code).f1;
      if (first || f1 > b.f1) {
        b.system = name;
        b.f1 = f1;
        b.tie = false;
        first = false;
      } else if (f1 == b.f1) {
        b.tie = true;  // map order means b.system is already the smaller name
      }
    }
    best[code] = b;
  }
  return best;
}

double round2(double x) {
  const int saved = std::fegetround();
  std::fesetround(FE_TONEAREST);  // ties to even
  const double r = std::nearbyint(x * 100.0) / 100.0;
  std::fesetround(saved);
  return r;
}

std::string format_fixed2(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", round2(value));
  return buf;
}

std::string format_percent(double unit_value) {
  return format_fixed2(unit_value * 100.0);
}

namespace {

nlohmann::ordered_json report_to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["precision"] = round2(r.precision * 100.0);
  j["recall"] = round2(r.recall * 100.0);
  j["f1"] = round2(r.f1 * 100.0);
  j["avg_levenshtein"] = round2(r.avg_levenshtein);
  j["n"] = r.n_instances;
  if (!r.per_category.empty()) {
    nlohmann::ordered_json cats;
    for (const auto& [code, sub] : r.per_category) {
      cats[code] = report_to_json(sub);
    }
    j["per_category"] = std::move(cats);
  }
  return j;
}

}  // namespace

std::string report_json(const MetricsReport& report) {
  return report_to_json(report).dump(2);
}

std::string report_tsv(const MetricsReport& report) {
  std::string out;
  auto row = [&out](const std::string& scope, const MetricsReport& r) {
    out += scope + "\tprecision\t" + format_percent(r.precision) + "\n";
    out += scope + "\trecall\t" + format_percent(r.recall) + "\n";
    out += scope + "\tf1\t" + format_percent(r.f1) + "\n";
    out += scope + "\tavg_levenshtein\t" + format_fixed2(r.avg_levenshtein) +
           "\n";
    out += scope + "\tn\t" + std::to_string(r.n_instances) + "\n";
  };
  row("all", report);
  for (const auto& [code, sub] : report.per_category) row(code, sub);
  return out;
}

}  // namespace morphseg
