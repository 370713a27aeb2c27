#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "morphseg/bpe.hpp"
#include "morphseg/error.hpp"
#include "morphseg/logspace.hpp"
#include "morphseg/morfessor.hpp"
#include "morphseg/rng.hpp"
#include "morphseg/ulm.hpp"
#include "morphseg/utf8.hpp"
#include "morphseg/wordpiece.hpp"
#include "test_util.hpp"

using namespace morphseg;

namespace {

std::vector<std::string> texts(const Segmentation& seg) {
  std::vector<std::string> out;
  for (const Morpheme& m : seg.morphemes()) out.push_back(m.str());
  return out;
}

// Enumerates every cover of `word` by vocabulary pieces; returns the
// maximum product log-probability and the total (marginal) in logs.
struct Enumeration {
  double best = kLogZero;
  double total = kLogZero;
  std::size_t best_pieces = 0;
};

void enumerate_covers(const std::u32string& cps, std::size_t pos,
                      const UnigramVocab& vocab, double logp,
                      std::size_t pieces, Enumeration& out) {
  if (pos == cps.size()) {
    out.total = log_add(out.total, logp);
    if (logp > out.best ||
        (logp == out.best && pieces < out.best_pieces)) {
      out.best = logp;
      out.best_pieces = pieces;
    }
    return;
  }
  std::string piece;
  for (std::size_t end = pos + 1; end <= cps.size(); ++end) {
    piece += utf8_encode(cps[end - 1]);
    auto it = vocab.log_prob.find(piece);
    if (it == vocab.log_prob.end() || it->second == kLogZero) continue;
    enumerate_covers(cps, end, vocab, logp + it->second, pieces + 1, out);
  }
}

Enumeration enumerate_word(const std::string& word, const UnigramVocab& vocab) {
  Enumeration out;
  enumerate_covers(utf8_decode(word), 0, vocab, 0.0, 0, out);
  return out;
}

UnigramVocab random_vocab(Rng& rng, const std::string& alphabet) {
  UnigramVocab vocab;
  std::vector<std::string> pieces;
  for (char c : alphabet) pieces.push_back(std::string(1, c));
  const std::size_t extras = 2 + rng.below(8);
  for (std::size_t i = 0; i < extras; ++i) {
    std::string p;
    const std::size_t len = 2 + rng.below(3);
    for (std::size_t k = 0; k < len; ++k) {
      p += alphabet[rng.below(alphabet.size())];
    }
    pieces.push_back(p);
  }
  double total = 0.0;
  std::vector<double> weights;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    weights.push_back(0.05 + rng.uniform01());
    total += weights.back();
  }
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    vocab.log_prob[pieces[i]] = std::log(weights[i] / total);
  }
  return vocab;
}

std::string random_word(Rng& rng, const std::string& alphabet,
                        std::size_t max_len) {
  const std::size_t len = 1 + rng.below(max_len);
  std::string w;
  for (std::size_t i = 0; i < len; ++i) {
    w += alphabet[rng.below(alphabet.size())];
  }
  return w;
}

}  // namespace

// --- BPE ---

TEST_CASE("bpe_train merges the most frequent pair") {
  const MergeTable t = bpe_train({{"abab", 1}, {"ab", 1}}, 1);
  REQUIRE(t.merges.size() == 1);
  CHECK(t.merges[0] == std::pair<std::string, std::string>("a", "b"));

  CHECK(bpe_train({{"abc", 5}}, 0).merges.empty());

  const MergeTable aa = bpe_train({{"aa", 2}}, 1);
  REQUIRE(aa.merges.size() == 1);
  CHECK(aa.merges[0] == std::pair<std::string, std::string>("a", "a"));
}

TEST_CASE("bpe_train stops early when pairs run out") {
  const MergeTable t = bpe_train({{"ab", 1}}, 10);
  CHECK(t.merges.size() == 1);
}

TEST_CASE("bpe tie-breaking is lexicographic") {
  // "ba" and "ab" pairs both occur once.
  const MergeTable t = bpe_train({{"ab", 1}, {"ba", 1}}, 1);
  REQUIRE(t.merges.size() == 1);
  CHECK(t.merges[0] == std::pair<std::string, std::string>("a", "b"));
}

TEST_CASE("bpe_encode applies merges in order") {
  MergeTable t;
  t.alphabet = {"a", "b"};
  t.merges = {{"a", "b"}};
  CHECK(texts(bpe_encode("ab", t)) == std::vector<std::string>{"ab"});

  const MergeTable empty;
  CHECK(texts(bpe_encode("abc", empty)) ==
        std::vector<std::string>{"a", "b", "c"});
  // Unknown characters stay singleton pieces.
  CHECK(texts(bpe_encode("axb", t)) == std::vector<std::string>{"a", "x", "b"});
}

TEST_CASE("bpe surface property and monotone piece counts") {
  Rng rng(77);
  WordCounts words;
  for (int i = 0; i < 60; ++i) {
    words[random_word(rng, "abcd", 8)] += 1 + rng.below(5);
  }
  const MergeTable table = bpe_train(words, 30);
  for (const auto& [word, unused] : words) {
    std::size_t prev = std::string::npos;
    for (std::size_t k = 0; k <= table.merges.size(); k += 5) {
      MergeTable partial;
      partial.alphabet = table.alphabet;
      partial.merges.assign(table.merges.begin(), table.merges.begin() + k);
      const Segmentation seg = bpe_encode(word, partial);
      CHECK(seg.concat() == word);
      CHECK(seg.size() <= prev);
      prev = seg.size();
    }
  }
  // Determinism.
  const MergeTable again = bpe_train(words, 30);
  CHECK(again.merges == table.merges);
}

// --- WordPiece ---

TEST_CASE("wordpiece_encode greedy longest match") {
  WordPieceVocab vocab;
  for (char c : std::string("invaluable")) {
    vocab.initial.insert(std::string(1, c));
    vocab.continuation.insert(std::string(1, c));
  }
  vocab.initial.insert("in");
  vocab.continuation.insert("val");
  vocab.continuation.insert("uable");
  CHECK(texts(wordpiece_encode("invaluable", vocab)) ==
        std::vector<std::string>{"in", "val", "uable"});

  vocab.initial.insert("invaluable");
  CHECK(texts(wordpiece_encode("invaluable", vocab)) ==
        std::vector<std::string>{"invaluable"});

  WordPieceVocab chars;
  for (char c : std::string("abc")) {
    chars.initial.insert(std::string(1, c));
    chars.continuation.insert(std::string(1, c));
  }
  CHECK(texts(wordpiece_encode("abc", chars)) ==
        std::vector<std::string>{"a", "b", "c"});

  CHECK_THROWS_AS(wordpiece_encode("abq", chars), DataError);
}

TEST_CASE("wordpiece training covers its corpus") {
  Rng rng(31);
  WordCounts words;
  for (int i = 0; i < 40; ++i) {
    words[random_word(rng, "abc", 6)] += 1 + rng.below(4);
  }
  const WordPieceVocab vocab = wordpiece_train(words, 12);
  for (const auto& [word, unused] : words) {
    const Segmentation seg = wordpiece_encode(word, vocab);
    CHECK(seg.concat() == word);
  }
}

// --- ULM ---

TEST_CASE("ulm encode picks the max-probability cover") {
  UnigramVocab vocab;
  vocab.log_prob["a"] = std::log(0.5);
  vocab.log_prob["b"] = std::log(0.5);
  CHECK(texts(ulm_encode("ab", vocab)) == std::vector<std::string>{"a", "b"});

  vocab.log_prob["a"] = std::log(0.2);
  vocab.log_prob["b"] = std::log(0.2);
  vocab.log_prob["ab"] = std::log(0.6);
  CHECK(texts(ulm_encode("ab", vocab)) == std::vector<std::string>{"ab"});

  // Exact tie: 0.2 * 0.2 == 0.04; fewer pieces win.
  vocab.log_prob["ab"] = std::log(0.04);
  CHECK(texts(ulm_encode("ab", vocab)) == std::vector<std::string>{"ab"});

  CHECK_THROWS_AS(ulm_encode("abq", vocab), DataError);
}

TEST_CASE("ulm leftmost-longest tie break") {
  // "aaa" with p(a) = p(aa): covers a+aa and aa+a tie on probability and
  // piece count; leftmost-longest picks aa+a.
  UnigramVocab vocab;
  vocab.log_prob["a"] = std::log(0.25);
  vocab.log_prob["aa"] = std::log(0.25);
  vocab.log_prob["b"] = std::log(0.5);
  CHECK(texts(ulm_encode("aaa", vocab)) == std::vector<std::string>{"aa", "a"});
}

TEST_CASE("ulm Viterbi and marginal match exhaustive enumeration") {
  Rng rng(123);
  for (int iter = 0; iter < 200; ++iter) {
    const UnigramVocab vocab = random_vocab(rng, "abc");
    const std::string word = random_word(rng, "abc", 10);
    const Enumeration e = enumerate_word(word, vocab);
    REQUIRE(e.best != kLogZero);  // single chars always present
    const Segmentation seg = ulm_encode(word, vocab);
    double logp = 0.0;
    for (const auto& m : seg.morphemes()) logp += vocab.log_prob.at(m.str());
    CHECK(std::abs(logp - e.best) < 1e-9);
    CHECK(seg.concat() == word);
    CHECK(std::abs(ulm_word_loglik(word, vocab) - e.total) < 1e-9);
  }
}

TEST_CASE("ulm EM shifts mass onto a productive piece") {
  UnigramVocab vocab;
  vocab.log_prob["a"] = std::log(1.0 / 3.0);
  vocab.log_prob["b"] = std::log(1.0 / 3.0);
  vocab.log_prob["ab"] = std::log(1.0 / 3.0);
  ulm_em_step(vocab, {{"abab", 2}});
  // Hand enumeration of the four covers of "abab": posteriors 1/16 (abab
  // as characters), 9/16 (ab+ab), 3/16 and 3/16 (mixed). Expected counts
  // per word: ab 1.5, a 0.5, b 0.5, so p(ab) = 0.6.
  CHECK(std::exp(vocab.log_prob.at("ab")) == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(std::exp(vocab.log_prob.at("a")) == doctest::Approx(0.2).epsilon(1e-9));
}

TEST_CASE("ulm EM never decreases the corpus log-likelihood") {
  Rng rng(321);
  WordCounts words;
  for (int i = 0; i < 50; ++i) {
    words[random_word(rng, "abcd", 8)] += 1 + rng.below(4);
  }
  UnigramVocab vocab = random_vocab(rng, "abcd");
  double prev = kLogZero;
  for (int it = 0; it < 10; ++it) {
    const double ll = ulm_em_step(vocab, words);
    if (it > 0) CHECK(ll >= prev - 1e-9);
    prev = ll;
  }
}

TEST_CASE("ulm training collapses a degenerate corpus to its alphabet") {
  UlmTrainOptions opts;
  opts.vocab_size = 1;
  const UnigramVocab vocab = ulm_train({{"aaaa", 4}}, opts);
  REQUIRE(vocab.log_prob.size() == 1);
  CHECK(std::exp(vocab.log_prob.at("a")) == doctest::Approx(1.0));

  UlmTrainOptions bad;
  bad.vocab_size = 1;
  CHECK_THROWS_AS(ulm_train({{"ab", 1}}, bad), ConfigError);
}

TEST_CASE("ulm probabilities sum to one and cover all characters") {
  Rng rng(99);
  WordCounts words;
  for (int i = 0; i < 80; ++i) {
    words[random_word(rng, "abcde", 7)] += 1 + rng.below(3);
  }
  UlmTrainOptions opts;
  opts.vocab_size = 12;
  const UnigramVocab vocab = ulm_train(words, opts);
  double total = 0.0;
  for (const auto& [piece, lp] : vocab.log_prob) total += std::exp(lp);
  CHECK(std::abs(total - 1.0) < 1e-9);
  for (char c : std::string("abcde")) {
    CHECK(vocab.log_prob.count(std::string(1, c)) == 1);
  }
  // Every training word still encodable; surface property holds.
  for (const auto& [word, unused] : words) {
    CHECK(ulm_encode(word, vocab).concat() == word);
  }
}

// --- Morfessor ---

namespace {

// Independent cost oracle: prices an explicit morph-count assignment with
// the same two-part scheme as the model under test.
double cost_oracle(const std::map<std::string, std::int64_t>& counts,
                   std::int64_t boundary, const MorfessorModel& char_model) {
  double sum = 0.0;
  std::int64_t n = boundary;
  for (const auto& [m, c] : counts) {
    sum += static_cast<double>(c) * std::log(static_cast<double>(c));
    n += c;
  }
  if (boundary > 0) {
    sum += static_cast<double>(boundary) *
           std::log(static_cast<double>(boundary));
  }
  double corpus =
      -sum + static_cast<double>(n) * std::log(static_cast<double>(n));
  double lexicon = 0.0;
  for (const auto& [m, c] : counts) {
    lexicon += char_model.end_cost;
    for (char32_t cp : utf8_decode(m)) {
      lexicon += char_model.char_cost.at(utf8_encode(cp));
    }
  }
  return corpus + lexicon;
}

}  // namespace

TEST_CASE("morfessor finds the shared stem of an inflectional family") {
  const WordCounts words = {{"walked", 5}, {"walks", 5}, {"walk", 5}};
  const MorfessorModel model = morfessor_train(words);
  CHECK(model.lexicon.count("walk") == 1);
  CHECK(model.lexicon.count("ed") == 1);
  CHECK(model.lexicon.count("s") == 1);
  CHECK(model.analyses.at("walked") ==
        std::vector<std::string>{"walk", "ed"});

  // The chosen configuration beats the all-unsplit one under the cost
  // oracle.
  const double chosen = cost_oracle(model.lexicon, model.boundary_tokens, model);
  const double unsplit = cost_oracle({{"walked", 5}, {"walks", 5}, {"walk", 5}},
                                     model.boundary_tokens, model);
  CHECK(chosen < unsplit);

  CHECK(texts(morfessor_encode("walked", model)) ==
        std::vector<std::string>{"walk", "ed"});
}

TEST_CASE("morfessor keeps a generic single word whole") {
  const MorfessorModel model = morfessor_train({{"abcd", 1}});
  CHECK(model.lexicon.size() == 1);
  CHECK(model.lexicon.count("abcd") == 1);
  // Cost comparison oracle: every binary split is more expensive.
  const double chosen = cost_oracle(model.lexicon, model.boundary_tokens, model);
  for (std::size_t k = 1; k < 4; ++k) {
    const std::string left = std::string("abcd").substr(0, k);
    const std::string right = std::string("abcd").substr(k);
    std::map<std::string, std::int64_t> split;
    ++split[left];
    ++split[right];
    CHECK(chosen < cost_oracle(split, model.boundary_tokens, model));
  }
}

TEST_CASE("morfessor degenerate repeated-letter corpus") {
  const MorfessorModel model = morfessor_train({{"aa", 1}});
  CHECK(model.lexicon.size() == 1);
  CHECK(model.lexicon.count("aa") == 1);
  const double whole = cost_oracle({{"aa", 1}}, 1, model);
  const double split = cost_oracle({{"a", 2}}, 1, model);
  CHECK(whole < split);
}

TEST_CASE("morfessor cost bookkeeping matches a from-scratch recompute") {
  Rng rng(17);
  WordCounts words;
  for (int i = 0; i < 50; ++i) {
    words[random_word(rng, "abcdef", 9)] += 1 + rng.below(6);
  }
  const MorfessorModel model = morfessor_train(words);
  CHECK(model.total_cost() ==
        doctest::Approx(morfessor_recompute_cost(model)).epsilon(1e-9));

  // Monotone descent across accepted refinement changes.
  REQUIRE(!model.accepted_costs.empty());
  for (std::size_t i = 1; i < model.accepted_costs.size(); ++i) {
    CHECK(model.accepted_costs[i] <= model.accepted_costs[i - 1] + 1e-9);
  }

  // Every training word is exactly covered by its analysis.
  for (const auto& [word, morphs] : model.analyses) {
    std::string concat;
    for (const std::string& m : morphs) concat += m;
    CHECK(concat == word);
    for (const std::string& m : morphs) CHECK(model.lexicon.count(m) == 1);
  }

  // Determinism.
  const MorfessorModel again = morfessor_train(words);
  CHECK(again.lexicon == model.lexicon);
  CHECK(again.analyses == model.analyses);
}

TEST_CASE("morfessor encode falls back per character on unseen input") {
  const MorfessorModel model = morfessor_train({{"walked", 5}, {"walk", 5}});
  const Segmentation seg = morfessor_encode("walkzq", model);
  CHECK(seg.concat() == "walkzq");
  CHECK(texts(morfessor_encode("walk", model)) ==
        std::vector<std::string>{"walk"});
}
