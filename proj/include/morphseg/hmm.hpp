#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "morphseg/bpe.hpp"
#include "morphseg/core.hpp"

namespace morphseg {

// Morpheme slots of the word grammar PREFIX* ROOT+ SUFFIX*.
enum class Slot { prefix = 0, root = 1, suffix = 2 };

// Transition structure: words start in PREFIX or ROOT; PREFIX continues
// or hands over to ROOT; ROOT may repeat (compounds), move to SUFFIX or
// end; SUFFIX repeats or ends. Every accepted path visits ROOT.
struct SlotGrammar {
  double start_prefix = 0.0;
  double start_root = 1.0;
  double prefix_to_prefix = 0.0;
  double prefix_to_root = 0.0;
  double root_to_root = 0.0;
  double root_to_suffix = 0.0;
  double root_to_end = 1.0;
  double suffix_to_suffix = 0.0;
  double suffix_to_end = 0.0;
};

struct HmmModel {
  SlotGrammar grammar;
  // Per-slot morpheme emission distributions.
  std::array<std::map<std::string, double>, 3> lexicon;
  // Canonical morpheme -> surface morph distribution (identity included).
  std::map<std::string, std::map<std::string, double>> emitter;
  std::string language;
};

struct HmmInitOptions {
  std::size_t max_affix_len = 4;
  std::size_t max_candidates = 200;
  // Morph candidates further than this from their morpheme are dropped.
  std::int64_t max_morph_edit = 2;
};

// Supervised initialization from gold segmentations: roots are identified
// from standalone words (falling back to the longest morpheme), affixes
// from their position relative to the root block, and surface morphs are
// harvested from character alignments. Counts are smoothed add-0.1.
HmmModel hmm_init(const Dataset& train, const HmmInitOptions& opts);

// Unsupervised initialization: affix candidates are frequent word-edge
// substrings up to max_affix_len (capped at max_candidates per slot),
// roots are whole words and affix-stripped residuals; all distributions
// uniform.
HmmModel hmm_init_unsupervised(const WordCounts& words,
                               const HmmInitOptions& opts);

struct EmOptions {
  std::size_t max_iters = 10;
  double tol = 1e-4;
};

struct EmStats {
  // Corpus log-likelihood under the parameters each iteration started
  // with; non-decreasing.
  std::vector<double> loglik;
  double final_loglik = 0.0;
  double last_param_delta = 0.0;
  std::size_t iterations = 0;
};

// Forward-backward EM over the segmentation lattice. Underivable words
// raise DataError naming the first one. After the final iteration,
// parameters below 1e-10 are pruned and the rest renormalized.
EmStats em_train(HmmModel& model, const WordCounts& words,
                 const EmOptions& opts);

// Marginal log-probability of a word under the model (all derivations).
double hmm_word_loglik(const std::string& word, const HmmModel& model);

struct HmmDecode {
  explicit HmmDecode(Segmentation seg) : canonical(std::move(seg)) {}

  Segmentation canonical;          // the morpheme sequence
  std::vector<std::string> morphs; // chosen surface morphs (concat == word)
  std::vector<Slot> states;
  double logprob = 0.0;
  bool fallback = false;  // underivable word analyzed as a whole-word root
};

HmmDecode viterbi_segment(const std::string& word, const HmmModel& model);

}  // namespace morphseg
