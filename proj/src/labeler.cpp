#include "morphseg/labeler.hpp"

#include <algorithm>

#include "morphseg/align.hpp"
#include "morphseg/entmax.hpp"
#include "morphseg/error.hpp"
#include "morphseg/utf8.hpp"

namespace morphseg {

namespace {

constexpr std::size_t kWindow = 2;
constexpr std::size_t kMaxNgram = 3;
constexpr std::size_t kPositionBuckets = 5;

std::string char_at(const std::u32string& cps, std::ptrdiff_t i) {
  if (i < 0) return "<s>";
  if (static_cast<std::size_t>(i) >= cps.size()) return "</s>";
  return utf8_encode(cps[static_cast<std::size_t>(i)]);
}

// Features describing the decision "does a segment start at position p".
std::vector<std::string> features(const std::u32string& cps, std::size_t p) {
  std::vector<std::string> out;
  out.reserve(16);
  const std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(p);
  for (std::size_t n = 1; n <= kMaxNgram; ++n) {
    for (std::ptrdiff_t start = pos - static_cast<std::ptrdiff_t>(kWindow);
         start + static_cast<std::ptrdiff_t>(n) <=
         pos + static_cast<std::ptrdiff_t>(kWindow) + 1;
         ++start) {
      std::string gram;
      for (std::size_t i = 0; i < n; ++i) {
        gram += char_at(cps, start + static_cast<std::ptrdiff_t>(i));
      }
      out.push_back(std::to_string(n) + "g" +
                    std::to_string(start - pos) + ":" + gram);
    }
  }
  out.push_back("from_start:" + std::to_string(std::min(p, kPositionBuckets)));
  out.push_back("from_end:" +
                std::to_string(std::min(cps.size() - p, kPositionBuckets)));
  return out;
}

std::array<double, 2> score_features(const std::vector<std::string>& feats,
                                     const LinearTagger& tagger) {
  std::array<double, 2> s{0.0, 0.0};
  for (const std::string& f : feats) {
    auto it = tagger.weights.find(f);
    if (it != tagger.weights.end()) {
      s[0] += it->second[0];
      s[1] += it->second[1];
    }
  }
  return s;
}

// B-labeled positions derived from non-empty alignment spans.
BoundaryLabeling labels_from_spans(
    std::size_t len, const std::vector<std::pair<std::size_t, std::size_t>>& spans) {
  BoundaryLabeling labels(len, false);
  if (!labels.empty()) labels[0] = true;
  for (const auto& [start, end] : spans) {
    if (start < end && start < len) labels[start] = true;
  }
  return labels;
}

}  // namespace

std::vector<std::array<double, 2>> position_scores(const std::string& word,
                                                   const LinearTagger& tagger) {
  const std::u32string cps = utf8_decode(word);
  std::vector<std::array<double, 2>> scores;
  for (std::size_t p = 1; p < cps.size(); ++p) {
    scores.push_back(score_features(features(cps, p), tagger));
  }
  return scores;
}

BoundaryLabeling predict_boundaries(const std::string& word,
                                    const LinearTagger& tagger) {
  const std::u32string cps = utf8_decode(word);
  BoundaryLabeling labels(cps.size(), false);
  if (labels.empty()) return labels;
  labels[0] = true;
  for (std::size_t p = 1; p < cps.size(); ++p) {
    const std::array<double, 2> s = score_features(features(cps, p), tagger);
    const std::vector<double> probs = entmax15({s[0], s[1]});
    labels[p] = probs[0] > probs[1];
  }
  return labels;
}

std::vector<std::string> surface_segments(const std::string& word,
                                          const BoundaryLabeling& labels) {
  const std::u32string cps = utf8_decode(word);
  std::vector<std::string> segments;
  std::string current;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (i > 0 && i < labels.size() && labels[i]) {
      segments.push_back(current);
      current.clear();
    }
    current += utf8_encode(cps[i]);
  }
  if (!current.empty()) segments.push_back(current);
  return segments;
}

std::string rewrite_segment(const std::string& segment, bool is_final,
                            const RewriteTable& rewrites) {
  auto argmax = [](const std::map<std::string, std::int64_t>& counts)
      -> const std::string* {
    const std::string* best = nullptr;
    std::int64_t best_count = 0;
    for (const auto& [canonical, count] : counts) {
      if (best == nullptr || count > best_count) {
        best = &canonical;  // ties keep the lexicographically smaller key
        best_count = count;
      }
    }
    return best;
  };
  const auto& ctx = rewrites.contextual[is_final ? 1 : 0];
  if (auto it = ctx.find(segment); it != ctx.end()) {
    if (const std::string* r = argmax(it->second)) return *r;
  }
  if (auto it = rewrites.plain.find(segment); it != rewrites.plain.end()) {
    if (const std::string* r = argmax(it->second)) return *r;
  }
  return segment;
}

LabelerModel train_tagger(const Dataset& train, const TaggerTrainOptions& opts) {
  if (train.kind != DatasetKind::word_level || train.words.empty()) {
    throw DataError("tagger training needs a nonempty word-level dataset");
  }

  LabelerModel model;
  model.language = train.language;

  // Alignment targets and the rewrite table do not depend on the weights;
  // both are fixed before the perceptron loop.
  struct Example {
    std::u32string cps;
    BoundaryLabeling gold;
  };
  std::vector<Example> examples;
  for (const WordEntry& e : train.words) {
    if (!e.segmentation) {
      throw DataError("entry \"" + e.word + "\" has no gold segmentation");
    }
    const AlignedEntry aligned = align_canonical(e.word, *e.segmentation);
    Example ex;
    ex.cps = utf8_decode(e.word);
    ex.gold = labels_from_spans(ex.cps.size(), aligned.spans);

    const std::size_t k = aligned.spans.size();
    for (std::size_t i = 0; i < k; ++i) {
      const auto [start, end] = aligned.spans[i];
      if (start >= end) continue;  // degenerate span, no surface segment
      const std::string span_text =
          utf8_encode(std::u32string_view(ex.cps).substr(start, end - start));
      const std::string& canonical = (*e.segmentation)[i].str();
      const bool is_final = i + 1 == k;
      ++model.rewrites.contextual[is_final ? 1 : 0][span_text][canonical];
      ++model.rewrites.plain[span_text][canonical];
    }
    examples.push_back(std::move(ex));
  }

  // Averaged perceptron with lazily accumulated weight sums.
  std::map<std::string, std::array<double, 2>> w;
  std::map<std::string, std::array<double, 2>> acc;
  std::map<std::string, std::uint64_t> last_touched;
  std::uint64_t t = 1;

  auto update = [&](const std::vector<std::string>& feats, int label,
                    double delta) {
    for (const std::string& f : feats) {
      auto& cur = w[f];
      auto& sum = acc[f];
      auto& last = last_touched[f];
      sum[0] += cur[0] * static_cast<double>(t - last);
      sum[1] += cur[1] * static_cast<double>(t - last);
      last = t;
      cur[label] += delta;
    }
  };

  std::vector<std::size_t> order(examples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(mix_seed(opts.seed, "tagger"));

  for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t idx : order) {
      const Example& ex = examples[idx];
      for (std::size_t p = 1; p < ex.cps.size(); ++p) {
        const std::vector<std::string> feats = features(ex.cps, p);
        std::array<double, 2> s{0.0, 0.0};
        for (const std::string& f : feats) {
          auto it = w.find(f);
          if (it != w.end()) {
            s[0] += it->second[0];
            s[1] += it->second[1];
          }
        }
        const int predicted = s[0] > s[1] ? 0 : 1;
        const int gold = ex.gold[p] ? 0 : 1;
        if (predicted != gold) {
          update(feats, gold, +1.0);
          update(feats, predicted, -1.0);
        }
        ++t;
      }
    }
  }

  for (const auto& [f, cur] : w) {
    auto& sum = acc[f];
    const std::uint64_t last = last_touched[f];
    sum[0] += cur[0] * static_cast<double>(t - last);
    sum[1] += cur[1] * static_cast<double>(t - last);
    const double total = static_cast<double>(t);
    const std::array<double, 2> avg{sum[0] / total, sum[1] / total};
    if (avg[0] != 0.0 || avg[1] != 0.0) model.tagger.weights[f] = avg;
  }
  return model;
}

Segmentation labeler_predict(const std::string& word, const LabelerModel& model) {
  if (word.empty()) throw DataError("cannot segment an empty word");
  const BoundaryLabeling labels = predict_boundaries(word, model.tagger);
  const std::vector<std::string> segments = surface_segments(word, labels);
  std::vector<std::string> morphemes;
  morphemes.reserve(segments.size());
  for (std::size_t i = 0; i < segments.size(); ++i) {
    morphemes.push_back(rewrite_segment(segments[i], i + 1 == segments.size(),
                                        model.rewrites));
  }
  return Segmentation(morphemes);
}

}  // namespace morphseg
