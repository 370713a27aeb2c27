#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "morphseg/core.hpp"

namespace morphseg {

// How a predicted morpheme is matched against the gold morphemes:
// multiset counts matches order-insensitively (duplicates respected),
// positional requires the same slot.
enum class MatchPolicy { multiset, positional };

struct PairScore {
  std::int64_t correct = 0;
  std::int64_t n_pred = 0;
  std::int64_t n_gold = 0;
  std::int64_t edit_distance = 0;
};

// correct / n_pred / n_gold for one gold-prediction pair.
PairScore morpheme_overlap(const Segmentation& gold, const Segmentation& pred,
                           MatchPolicy policy = MatchPolicy::multiset);

// Unit-cost edit distance over Unicode scalar values.
std::int64_t levenshtein(std::string_view gold_string,
                         std::string_view pred_string);

// Full per-pair score: overlap plus edit distance of the formatted
// segmentation fields (" @@" separators included).
PairScore score_pair(const Segmentation& gold, const Segmentation& pred,
                     MatchPolicy policy = MatchPolicy::multiset);

struct MetricsReport {
  // Unit scale [0, 1]; percentages only at presentation time.
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double avg_levenshtein = 0.0;
  std::int64_t n_instances = 0;

  // Aggregated counts the ratios were computed from.
  std::int64_t sum_correct = 0;
  std::int64_t sum_pred = 0;
  std::int64_t sum_gold = 0;
  std::int64_t sum_edit = 0;

  std::map<std::string, MetricsReport> per_category;
};

// Builds a report from per-pair scores (micro aggregation: ratios over
// pooled counts).
MetricsReport reduce_scores(const std::vector<PairScore>& scores);

// Word-level evaluation. Predictions are aligned with gold by position;
// every gold entry must have a segmentation. Per-category sub-reports are
// computed over the subset of entries carrying that gold category.
// `threads` > 1 fans per-pair scoring out over contiguous shards; results
// are merged in shard order, so the report does not depend on it.
MetricsReport aggregate(const std::vector<WordEntry>& gold,
                        const std::vector<Segmentation>& pred,
                        MatchPolicy policy = MatchPolicy::multiset,
                        unsigned threads = 1);

// Unweighted mean of per-language F1 percentages.
double macro_average(const std::map<std::string, double>& per_language_f1);

// Sentence-level evaluation: every aligned token pair contributes one
// PairScore; no category breakdown.
MetricsReport evaluate_sentences(const Dataset& gold, const Dataset& pred,
                                 MatchPolicy policy = MatchPolicy::multiset);

// --- Analyses ---

// Half-open word-length range [lo, hi); no hi means unbounded.
struct LengthBucket {
  std::size_t lo = 0;
  std::optional<std::size_t> hi;

  bool contains(std::size_t len) const {
    return len >= lo && (!hi || len < *hi);
  }
  std::string label() const;
};

// Parses "1:5,5:10,10:" into buckets.
std::vector<LengthBucket> parse_length_buckets(std::string_view spec);

struct LengthAnalysis {
  std::vector<LengthBucket> buckets;
  // category code -> per-bucket micro-F1 (unit scale); nullopt marks an
  // empty bucket, which is reported as such rather than as 0.
  std::map<std::string, std::vector<std::optional<double>>> f1;
};

LengthAnalysis analyze_by_length(const std::vector<WordEntry>& gold,
                                 const std::vector<Segmentation>& pred,
                                 const std::vector<LengthBucket>& buckets,
                                 MatchPolicy policy = MatchPolicy::multiset);

// TSV rendering of the length analysis (categories x buckets).
std::string length_analysis_tsv(const LengthAnalysis& analysis);

struct BestSystem {
  std::string system;
  double f1 = 0.0;  // unit scale
  bool tie = false;
};

// Per category, the system with the highest F1; exact ties go to the
// lexicographically smaller system name and are flagged.
std::map<std::string, BestSystem> best_per_category(
    const std::map<std::string, MetricsReport>& reports);

// --- Presentation ---

// Round-half-even to 2 decimals (applied to percentage-scale values).
double round2(double x);

// Unit-scale value -> percentage string with 2 decimals.
std::string format_percent(double unit_value);

// 2-decimal fixed formatting of an already-scaled value.
std::string format_fixed2(double value);

// JSON report: {precision, recall, f1, avg_levenshtein, n,
// per_category:{...}} with percentage-scale 2-decimal values.
std::string report_json(const MetricsReport& report);

// Flat TSV rendering: metric, value pairs plus per-category rows.
std::string report_tsv(const MetricsReport& report);

}  // namespace morphseg
