#include "morphseg/wordpiece.hpp"

#include <algorithm>

#include "morphseg/error.hpp"
#include "morphseg/utf8.hpp"

namespace morphseg {

Segmentation wordpiece_encode(const std::string& word,
                              const WordPieceVocab& vocab) {
  if (word.empty()) throw DataError("cannot encode an empty word");
  const std::u32string cps = utf8_decode(word);

  std::vector<std::string> pieces;
  std::size_t pos = 0;
  while (pos < cps.size()) {
    const std::set<std::string>& table =
        pos == 0 ? vocab.initial : vocab.continuation;
    std::string match;
    std::string candidate;
    for (std::size_t end = pos + 1; end <= cps.size(); ++end) {
      candidate += utf8_encode(cps[end - 1]);
      if (table.count(candidate)) match = candidate;
    }
    if (match.empty()) {
      throw DataError("no piece matches \"" + word + "\" at character " +
                      std::to_string(pos) +
                      (pos == 0 ? "" : " (continuation)"));
    }
    pieces.push_back(match);
    pos += utf8_length(match);
  }
  return Segmentation(pieces);
}

namespace {

// Internal symbols carry a continuation flag; only the texts are emitted.
struct Sym {
  std::string text;
  bool cont = false;

  bool operator<(const Sym& o) const {
    return std::tie(cont, text) < std::tie(o.cont, o.text);
  }
  bool operator==(const Sym& o) const {
    return cont == o.cont && text == o.text;
  }
};

}  // namespace

WordPieceVocab wordpiece_train(const WordCounts& words,
                               std::size_t vocab_size) {
  std::vector<std::vector<Sym>> seqs;
  std::vector<std::int64_t> freqs;
  std::set<Sym> inventory;
  for (const auto& [word, count] : words) {
    if (count <= 0) continue;
    std::vector<Sym> seq;
    bool first = true;
    for (char32_t cp : utf8_decode(word)) {
      seq.push_back(Sym{utf8_encode(cp), !first});
      inventory.insert(seq.back());
      first = false;
    }
    seqs.push_back(std::move(seq));
    freqs.push_back(count);
  }

  auto build_vocab = [&inventory] {
    WordPieceVocab v;
    for (const Sym& s : inventory) {
      (s.cont ? v.continuation : v.initial).insert(s.text);
    }
    return v;
  };

  while (inventory.size() < vocab_size) {
    std::map<Sym, std::int64_t> sym_freq;
    std::map<std::pair<Sym, Sym>, std::int64_t> pair_freq;
    for (std::size_t w = 0; w < seqs.size(); ++w) {
      for (std::size_t i = 0; i < seqs[w].size(); ++i) {
        sym_freq[seqs[w][i]] += freqs[w];
        if (i + 1 < seqs[w].size()) {
          pair_freq[{seqs[w][i], seqs[w][i + 1]}] += freqs[w];
        }
      }
    }
    const std::pair<Sym, Sym>* best = nullptr;
    double best_score = 0.0;
    for (const auto& [pair, freq] : pair_freq) {
      const double score =
          static_cast<double>(freq) /
          (static_cast<double>(sym_freq[pair.first]) *
           static_cast<double>(sym_freq[pair.second]));
      if (best == nullptr || score > best_score) {
        best = &pair;
        best_score = score;
      }
    }
    if (best == nullptr) break;
    const Sym merged{best->first.text + best->second.text, best->first.cont};
    const std::pair<Sym, Sym> chosen = *best;
    inventory.insert(merged);
    for (auto& seq : seqs) {
      std::vector<Sym> out;
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
    }
  }
  return build_vocab();
}

}  // namespace morphseg
