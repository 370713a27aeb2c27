#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "morphseg/core.hpp"
#include "morphseg/rng.hpp"

namespace morphseg {

// Per-character boundary tags: true marks the first character of a
// segment (B), false continues it (I). The first character is always B.
using BoundaryLabeling = std::vector<bool>;

// Linear model over character n-gram features (n <= 3, window +-2) plus
// position buckets; one weight per label (index 0 = B, 1 = I).
struct LinearTagger {
  std::map<std::string, std::array<double, 2>> weights;
};

// Surface segment -> canonical morpheme counts, with (segment, is_final)
// context tried before the position-insensitive table; identity when
// unseen.
struct RewriteTable {
  std::map<std::string, std::map<std::string, std::int64_t>> contextual[2];
  std::map<std::string, std::map<std::string, std::int64_t>> plain;
};

struct LabelerModel {
  LinearTagger tagger;
  RewriteTable rewrites;
  std::string language;
};

struct TaggerTrainOptions {
  std::size_t epochs = 8;
  std::uint64_t seed = kDefaultSeed;
};

// Averaged perceptron over boundary targets derived from align_canonical
// spans; also harvests the rewrite table from (span text, morpheme)
// pairs.
LabelerModel train_tagger(const Dataset& train, const TaggerTrainOptions& opts);

// Raw per-position label scores (positions 1..len-1; position 0 is
// forced B and carries no scores).
std::vector<std::array<double, 2>> position_scores(const std::string& word,
                                                   const LinearTagger& tagger);

// Tags from entmax-normalized scores; B wins only when strictly more
// probable, so an untrained tagger keeps words whole.
BoundaryLabeling predict_boundaries(const std::string& word,
                                    const LinearTagger& tagger);

// Splits a word at the B positions of its labeling.
std::vector<std::string> surface_segments(const std::string& word,
                                          const BoundaryLabeling& labels);

// Canonical morpheme for one surface segment.
std::string rewrite_segment(const std::string& segment, bool is_final,
                            const RewriteTable& rewrites);

// Full pipeline: tag, split, canonicalize.
Segmentation labeler_predict(const std::string& word, const LabelerModel& model);

}  // namespace morphseg
