#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "morphseg/core.hpp"
#include "morphseg/rng.hpp"

namespace morphseg {

// Exact fraction; split arithmetic never goes through floating point.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

// Parses "0.8", "4/5" or "1" into an exact fraction.
Fraction parse_fraction(std::string_view s);

struct SplitSpec {
  Fraction train{8, 10};
  Fraction dev{1, 10};
  Fraction test{1, 10};
  std::uint64_t seed = kDefaultSeed;

  // Throws ConfigError unless all fractions are positive and sum to 1.
  void validate() const;
};

struct SplitResult {
  Dataset train;
  Dataset dev;
  Dataset test;
};

// Category-stratified split. Within each category the per-split counts
// deviate from the exact fractional targets by at most one; remainders go
// to train first, then dev. Output entries are ordered by (category code,
// original index). Deterministic given the seed.
SplitResult stratified_split(const Dataset& data, const SplitSpec& spec);

struct ExcludeResult {
  Dataset kept;
  std::size_t removed = 0;
};

// Removes every word that appears as a whitespace token of any protected
// sentence (exact NFC match).
ExcludeResult exclude_overlap(const Dataset& train_dev,
                              const Dataset& protected_sentences);

// Per-category resampling. Undersampling draws without replacement;
// oversampling keeps every original entry and adds uniform draws with
// replacement. Categories absent from `targets` are kept as they are.
Dataset resample_by_category(const Dataset& data,
                             const std::map<std::string, std::int64_t>& targets,
                             std::uint64_t seed);

// Default donor categories: the non-inflection codes.
const std::set<std::string>& non_inflection_categories();

// Appends donor entries whose category is in `categories`, recording the
// donor language as entry provenance.
Dataset crosslingual_augment(const Dataset& target,
                             const std::vector<Dataset>& donors,
                             const std::set<std::string>& categories);

struct CategoryHistogram {
  std::map<std::string, std::int64_t> counts;
  std::int64_t total = 0;
};

CategoryHistogram corpus_stats(const Dataset& data);

}  // namespace morphseg
