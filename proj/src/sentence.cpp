#include "morphseg/sentence.hpp"

#include <algorithm>

#include "morphseg/error.hpp"
#include "morphseg/text.hpp"

namespace morphseg {

std::vector<std::string> tokenize(const std::string& sentence) {
  return split_whitespace(sentence);
}

ContextModel train_context(const Dataset& train) {
  if (train.kind != DatasetKind::sentence_level || train.sentences.empty()) {
    throw DataError("context training needs a nonempty sentence-level dataset");
  }
  ContextModel model;
  model.language = train.language;
  for (const SentenceEntry& entry : train.sentences) {
    if (!entry.segmented) {
      throw DataError("training sentence \"" + entry.sentence +
                      "\" has no segmentation");
    }
    const std::vector<std::string> tokens = tokenize(entry.sentence);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const std::string analysis = format_segmentation((*entry.segmented)[i]);
      ++model.analyses[tokens[i]][analysis];
      if (i > 0) {
        ++model.neighbors[0][tokens[i]][tokens[i - 1]][analysis];
      }
      if (i + 1 < tokens.size()) {
        ++model.neighbors[1][tokens[i]][tokens[i + 1]][analysis];
      }
    }
  }
  return model;
}

namespace {

std::int64_t neighbor_count(const ContextModel& ctx, int side,
                            const std::string& word,
                            const std::string& neighbor,
                            const std::string& analysis) {
  const auto& table = ctx.neighbors[side];
  auto w = table.find(word);
  if (w == table.end()) return 0;
  auto nb = w->second.find(neighbor);
  if (nb == w->second.end()) return 0;
  auto an = nb->second.find(analysis);
  return an == nb->second.end() ? 0 : an->second;
}

}  // namespace

SentenceEntry segment_sentence(const std::string& sentence,
                               const ContextModel* context,
                               const Segmenter* fallback) {
  if (context == nullptr && fallback == nullptr) {
    throw ConfigError("sentence segmentation needs a context model, a "
                      "fallback segmenter, or both");
  }
  SentenceEntry out;
  out.sentence = nfc(sentence);
  const std::vector<std::string> tokens = tokenize(out.sentence);
  std::vector<Segmentation> segmented;
  segmented.reserve(tokens.size());

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& token = tokens[i];
    const std::map<std::string, std::int64_t>* candidates = nullptr;
    if (context != nullptr) {
      auto it = context->analyses.find(token);
      if (it != context->analyses.end() && !it->second.empty()) {
        candidates = &it->second;
      }
    }
    if (candidates == nullptr) {
      if (fallback == nullptr) {
        throw DataError("token \"" + token +
                        "\" is unknown and no fallback segmenter is set");
      }
      segmented.push_back(fallback->segment(token));
      continue;
    }
    if (candidates->size() == 1) {
      segmented.push_back(parse_segmentation(candidates->begin()->first));
      continue;
    }
    // Ambiguous: smoothed neighbour-count product over the observed
    // context.
    const std::string* best = nullptr;
    double best_score = 0.0;
    std::int64_t best_lexicon = 0;
    std::size_t best_pieces = 0;
    for (const auto& [analysis, lex_count] : *candidates) {
      double score = 1.0;
      if (i > 0) {
        score *= static_cast<double>(
            neighbor_count(*context, 0, token, tokens[i - 1], analysis) + 1);
      }
      if (i + 1 < tokens.size()) {
        score *= static_cast<double>(
            neighbor_count(*context, 1, token, tokens[i + 1], analysis) + 1);
      }
      const std::size_t pieces = parse_segmentation(analysis).size();
      const bool better =
          best == nullptr || score > best_score ||
          (score == best_score &&
           (lex_count > best_lexicon ||
            (lex_count == best_lexicon && pieces < best_pieces)));
      if (better) {
        best = &analysis;
        best_score = score;
        best_lexicon = lex_count;
        best_pieces = pieces;
      }
    }
    segmented.push_back(parse_segmentation(*best));
  }
  out.segmented = std::move(segmented);
  return out;
}

}  // namespace morphseg
