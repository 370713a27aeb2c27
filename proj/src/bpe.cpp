#include "morphseg/bpe.hpp"

#include <algorithm>

#include "morphseg/error.hpp"
#include "morphseg/utf8.hpp"

namespace morphseg {

namespace {

std::vector<std::string> to_symbols(const std::string& word) {
  std::vector<std::string> symbols;
  for (char32_t cp : utf8_decode(word)) symbols.push_back(utf8_encode(cp));
  return symbols;
}

using Pair = std::pair<std::string, std::string>;

}  // namespace

MergeTable bpe_train(const WordCounts& words, std::size_t num_merges) {
  MergeTable table;

  std::vector<std::vector<std::string>> seqs;
  std::vector<std::int64_t> freqs;
  for (const auto& [word, count] : words) {
    if (count <= 0) continue;
    std::vector<std::string> symbols = to_symbols(word);
    for (const std::string& s : symbols) table.alphabet.insert(s);
    seqs.push_back(std::move(symbols));
    freqs.push_back(count);
  }

  // Pair frequencies and, for cheap updates, which words contain a pair.
  std::map<Pair, std::int64_t> pair_freq;
  std::map<Pair, std::set<std::size_t>> pair_words;
  for (std::size_t w = 0; w < seqs.size(); ++w) {
    const auto& seq = seqs[w];
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
      Pair p{seq[i], seq[i + 1]};
      pair_freq[p] += freqs[w];
      pair_words[p].insert(w);
    }
  }

  for (std::size_t merge = 0; merge < num_merges; ++merge) {
    // Max frequency; the map's key order makes ties lexicographic.
    const Pair* best = nullptr;
    std::int64_t best_freq = 0;
    for (const auto& [pair, freq] : pair_freq) {
      if (freq > best_freq) {
        best = &pair;
        best_freq = freq;
      }
    }
    if (best == nullptr) break;  // fewer available pairs than num_merges
    const Pair chosen = *best;
    table.merges.push_back(chosen);
    const std::string merged = chosen.first + chosen.second;

    const std::set<std::size_t> affected = pair_words[chosen];
    for (std::size_t w : affected) {
      std::vector<std::string>& seq = seqs[w];
      const std::int64_t f = freqs[w];
      // Remove this word's contribution to pair counts, rewrite, re-add.
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        Pair p{seq[i], seq[i + 1]};
        auto it = pair_freq.find(p);
        it->second -= f;
        if (it->second <= 0) pair_freq.erase(it);
        pair_words[p].erase(w);
      }
      std::vector<std::string> out;
      out.reserve(seq.size());
      for (std::size_t i = 0; i < seq.size();) {
        if (i + 1 < seq.size() && seq[i] == chosen.first &&
            seq[i + 1] == chosen.second) {
          out.push_back(merged);
          i += 2;
        } else {
          out.push_back(seq[i]);
          ++i;
        }
      }
      seq = std::move(out);
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        Pair p{seq[i], seq[i + 1]};
        pair_freq[p] += f;
        pair_words[p].insert(w);
      }
    }
  }
  return table;
}

Segmentation bpe_encode(const std::string& word, const MergeTable& table) {
  if (word.empty()) throw DataError("cannot encode an empty word");
  std::vector<std::string> symbols = to_symbols(word);

  std::map<Pair, std::size_t> rank;
  for (std::size_t i = 0; i < table.merges.size(); ++i) {
    rank.emplace(table.merges[i], i);
  }

  // Repeatedly merging the present pair of lowest rank is equivalent to
  // applying the merges in table order: merging never creates instances
  // of an earlier pair.
  while (symbols.size() > 1) {
    std::size_t best_rank = table.merges.size();
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      auto it = rank.find(Pair{symbols[i], symbols[i + 1]});
      if (it != rank.end() && it->second < best_rank) best_rank = it->second;
    }
    if (best_rank == table.merges.size()) break;
    const Pair& chosen = table.merges[best_rank];
    std::vector<std::string> out;
    out.reserve(symbols.size());
    for (std::size_t i = 0; i < symbols.size();) {
      if (i + 1 < symbols.size() && symbols[i] == chosen.first &&
          symbols[i + 1] == chosen.second) {
        out.push_back(chosen.first + chosen.second);
        i += 2;
      } else {
        out.push_back(symbols[i]);
        ++i;
      }
    }
    symbols = std::move(out);
  }
  return Segmentation(symbols);
}

}  // namespace morphseg
