#include "morphseg/datasets.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "morphseg/error.hpp"
#include "morphseg/text.hpp"

namespace morphseg {

namespace {

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  while (b != 0) {
    std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

void require_word_level(const Dataset& data, const char* what) {
  if (data.kind != DatasetKind::word_level) {
    throw DataError(std::string(what) + " requires a word-level dataset");
  }
}

// Word-level entries grouped by category code, original order preserved.
std::map<std::string, std::vector<std::size_t>> group_by_category(
    const Dataset& data, const char* what) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < data.words.size(); ++i) {
    if (!data.words[i].category) {
      throw DataError(std::string(what) + ": entry " + std::to_string(i + 1) +
                      " (\"" + data.words[i].word + "\") has no category");
    }
    groups[data.words[i].category->code()].push_back(i);
  }
  return groups;
}

}  // namespace

Fraction parse_fraction(std::string_view s) {
  auto fail = [&] {
    throw ConfigError("cannot parse fraction \"" + std::string(s) + "\"");
  };
  if (s.empty()) fail();
  Fraction f;
  const std::size_t slash = s.find('/');
  const std::size_t dot = s.find('.');
  try {
    if (slash != std::string_view::npos) {
      f.num = std::stoll(std::string(s.substr(0, slash)));
      f.den = std::stoll(std::string(s.substr(slash + 1)));
    } else if (dot != std::string_view::npos) {
      const std::string whole(s.substr(0, dot));
      const std::string frac(s.substr(dot + 1));
      if (frac.empty() || frac.size() > 15 ||
          frac.find_first_not_of("0123456789") != std::string::npos) {
        fail();
      }
      std::int64_t den = 1;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
      f.num = (whole.empty() ? 0 : std::stoll(whole)) * den +
              std::stoll(frac);
      f.den = den;
    } else {
      f.num = std::stoll(std::string(s));
      f.den = 1;
    }
  } catch (const std::exception&) {
    fail();
  }
  if (f.den <= 0) fail();
  const std::int64_t g = gcd64(f.num, f.den);
  if (g > 1) {
    f.num /= g;
    f.den /= g;
  }
  return f;
}

void SplitSpec::validate() const {
  for (const Fraction& f : {train, dev, test}) {
    if (f.num <= 0 || f.den <= 0) {
      throw ConfigError("split fractions must be positive");
    }
  }
  // train/td + dev/dd + test/sd == 1, exactly.
  const std::int64_t lhs = train.num * dev.den * test.den +
                           dev.num * train.den * test.den +
                           test.num * train.den * dev.den;
  const std::int64_t rhs = train.den * dev.den * test.den;
  if (lhs != rhs) {
    throw ConfigError("split fractions must sum to exactly 1");
  }
}

SplitResult stratified_split(const Dataset& data, const SplitSpec& spec) {
  require_word_level(data, "stratified_split");
  spec.validate();
  auto groups = group_by_category(data, "stratified_split");

  SplitResult result;
  for (Dataset* d : {&result.train, &result.dev, &result.test}) {
    d->language = data.language;
    d->kind = DatasetKind::word_level;
  }

  // floor(n * num / den) without overflow for desk-scale n.
  auto floor_share = [](std::size_t n, const Fraction& f) {
    return static_cast<std::size_t>(
        static_cast<std::int64_t>(n) * f.num / f.den);
  };

  // Groups iterate in code order, so output is ordered by (category code,
  // original index) and independent of any processing interleave.
  for (auto& [code, indices] : groups) {
    Rng rng(mix_seed(spec.seed, code));
    std::vector<std::size_t> shuffled = indices;
    rng.shuffle(shuffled);

    const std::size_t n = shuffled.size();
    std::size_t n_train = floor_share(n, spec.train);
    std::size_t n_dev = floor_share(n, spec.dev);
    std::size_t n_test = floor_share(n, spec.test);
    std::size_t remainder = n - n_train - n_dev - n_test;
    // Remainders go to train first, then dev, then test.
    if (remainder > 0) { ++n_train; --remainder; }
    if (remainder > 0) { ++n_dev; --remainder; }
    if (remainder > 0) { ++n_test; --remainder; }

    auto emit = [&](Dataset& out, std::size_t lo, std::size_t hi) {
      std::vector<std::size_t> picked(shuffled.begin() + lo,
                                      shuffled.begin() + hi);
      std::sort(picked.begin(), picked.end());
      for (std::size_t idx : picked) out.words.push_back(data.words[idx]);
    };
    emit(result.train, 0, n_train);
    emit(result.dev, n_train, n_train + n_dev);
    emit(result.test, n_train + n_dev, n);
  }
  return result;
}

ExcludeResult exclude_overlap(const Dataset& train_dev,
                              const Dataset& protected_sentences) {
  require_word_level(train_dev, "exclude_overlap");
  if (protected_sentences.kind != DatasetKind::sentence_level) {
    throw DataError("exclude_overlap requires a sentence-level protected set");
  }
  std::unordered_set<std::string> protected_tokens;
  for (const SentenceEntry& s : protected_sentences.sentences) {
    for (std::string& tok : split_whitespace(s.sentence)) {
      protected_tokens.insert(std::move(tok));
    }
  }
  ExcludeResult result;
  result.kept.language = train_dev.language;
  result.kept.kind = DatasetKind::word_level;
  for (const WordEntry& e : train_dev.words) {
    if (protected_tokens.count(e.word)) {
      ++result.removed;
    } else {
      result.kept.words.push_back(e);
    }
  }
  return result;
}

Dataset resample_by_category(const Dataset& data,
                             const std::map<std::string, std::int64_t>& targets,
                             std::uint64_t seed) {
  require_word_level(data, "resample_by_category");
  for (const auto& [code, target] : targets) {
    if (target < 0) {
      throw ConfigError("negative resampling target for category " + code);
    }
    parse_category(code);  // validates the code itself
  }
  auto groups = group_by_category(data, "resample_by_category");
  for (const auto& [code, target] : targets) {
    if (target > 0 && !groups.count(code)) {
      throw DataError("resampling target " + std::to_string(target) +
                      " for category " + code + " which has no entries");
    }
  }

  Dataset out;
  out.language = data.language;
  out.kind = DatasetKind::word_level;
  for (const auto& [code, indices] : groups) {
    auto it = targets.find(code);
    if (it == targets.end()) {
      for (std::size_t idx : indices) out.words.push_back(data.words[idx]);
      continue;
    }
    const std::int64_t target = it->second;
    const std::int64_t have = static_cast<std::int64_t>(indices.size());
    Rng rng(mix_seed(seed, code));
    if (target <= have) {
      // Draw without replacement: shuffle, take the first `target`,
      // restore original order.
      std::vector<std::size_t> shuffled = indices;
      rng.shuffle(shuffled);
      std::vector<std::size_t> picked(shuffled.begin(),
                                      shuffled.begin() + target);
      std::sort(picked.begin(), picked.end());
      for (std::size_t idx : picked) out.words.push_back(data.words[idx]);
    } else {
      // Keep every original once, then duplicate uniform draws.
      for (std::size_t idx : indices) out.words.push_back(data.words[idx]);
      for (std::int64_t k = have; k < target; ++k) {
        const std::size_t pick = static_cast<std::size_t>(
            rng.below(static_cast<std::uint64_t>(have)));
        out.words.push_back(data.words[indices[pick]]);
      }
    }
  }
  return out;
}

const std::set<std::string>& non_inflection_categories() {
  static const std::set<std::string> codes = {"000", "001", "010", "011"};
  return codes;
}

Dataset crosslingual_augment(const Dataset& target,
                             const std::vector<Dataset>& donors,
                             const std::set<std::string>& categories) {
  require_word_level(target, "crosslingual_augment");
  Dataset out = target;
  for (const Dataset& donor : donors) {
    require_word_level(donor, "crosslingual_augment");
    for (const WordEntry& e : donor.words) {
      if (!e.category) {
        throw DataError("crosslingual_augment: donor entry \"" + e.word +
                        "\" has no category");
      }
      if (categories.count(e.category->code())) {
        WordEntry copy = e;
        copy.source_language = donor.language;
        out.words.push_back(std::move(copy));
      }
    }
  }
  return out;
}

CategoryHistogram corpus_stats(const Dataset& data) {
  require_word_level(data, "corpus_stats");
  CategoryHistogram hist;
  for (const WordEntry& e : data.words) {
    if (!e.category) {
      throw DataError("corpus_stats: entry \"" + e.word +
                      "\" has no category");
    }
    ++hist.counts[e.category->code()];
    ++hist.total;
  }
  return hist;
}

}  // namespace morphseg
