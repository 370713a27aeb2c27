#include "morphseg/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "morphseg/error.hpp"

namespace morphseg {

namespace {

using nlohmann::json;

json header(const std::string& kind, const std::string& language) {
  json j;
  j["format_version"] = kModelFormatVersion;
  j["kind"] = kind;
  j["language"] = language;
  return j;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model file: " + path);
  out << j.dump(1, '\t') << '\n';
}

json read_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("model file " + path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object() || !j.contains("format_version") || !j.contains("kind")) {
    throw FormatError("model file " + path + " lacks the version header");
  }
  if (j["format_version"].get<int>() != kModelFormatVersion) {
    throw FormatError("model file " + path + " has format_version " +
                      j["format_version"].dump() + "; expected " +
                      std::to_string(kModelFormatVersion));
  }
  return j;
}

// --- Segmenter wrappers ---

class BpeSegmenter final : public Segmenter {
 public:
  BpeSegmenter(MergeTable table, std::string language)
      : table_(std::move(table)), language_(std::move(language)) {}
  std::string kind() const override { return "bpe"; }
  const std::string& language() const override { return language_; }
  Segmentation segment(const std::string& word) const override {
    return bpe_encode(word, table_);
  }

 private:
  MergeTable table_;
  std::string language_;
};

class WordPieceSegmenter final : public Segmenter {
 public:
  WordPieceSegmenter(WordPieceVocab vocab, std::string language)
      : vocab_(std::move(vocab)), language_(std::move(language)) {}
  std::string kind() const override { return "wordpiece"; }
  const std::string& language() const override { return language_; }
  Segmentation segment(const std::string& word) const override {
    return wordpiece_encode(word, vocab_);
  }

 private:
  WordPieceVocab vocab_;
  std::string language_;
};

class UlmSegmenter final : public Segmenter {
 public:
  UlmSegmenter(UnigramVocab vocab, std::string language)
      : vocab_(std::move(vocab)), language_(std::move(language)) {}
  std::string kind() const override { return "ulm"; }
  const std::string& language() const override { return language_; }
  Segmentation segment(const std::string& word) const override {
    return ulm_encode(word, vocab_);
  }

 private:
  UnigramVocab vocab_;
  std::string language_;
};

class MorfessorSegmenter final : public Segmenter {
 public:
  MorfessorSegmenter(MorfessorModel model, std::string language)
      : model_(std::move(model)), language_(std::move(language)) {}
  std::string kind() const override { return "morfessor"; }
  const std::string& language() const override { return language_; }
  Segmentation segment(const std::string& word) const override {
    return morfessor_encode(word, model_);
  }

 private:
  MorfessorModel model_;
  std::string language_;
};

class HmmSegmenter final : public Segmenter {
 public:
  explicit HmmSegmenter(HmmModel model) : model_(std::move(model)) {}
  std::string kind() const override { return "hmm"; }
  const std::string& language() const override { return model_.language; }
  Segmentation segment(const std::string& word) const override {
    return viterbi_segment(word, model_).canonical;
  }

 private:
  HmmModel model_;
};

class LabelerSegmenter final : public Segmenter {
 public:
  explicit LabelerSegmenter(LabelerModel model) : model_(std::move(model)) {}
  std::string kind() const override { return "labeler"; }
  const std::string& language() const override { return model_.language; }
  Segmentation segment(const std::string& word) const override {
    return labeler_predict(word, model_);
  }

 private:
  LabelerModel model_;
};

// --- JSON payloads ---

json bpe_to_json(const MergeTable& t) {
  json j;
  j["alphabet"] = t.alphabet;
  json merges = json::array();
  for (const auto& [l, r] : t.merges) merges.push_back(json::array({l, r}));
  j["merges"] = std::move(merges);
  return j;
}

MergeTable bpe_from_json(const json& j) {
  MergeTable t;
  for (const auto& s : j.at("alphabet")) t.alphabet.insert(s.get<std::string>());
  for (const auto& m : j.at("merges")) {
    t.merges.emplace_back(m.at(0).get<std::string>(), m.at(1).get<std::string>());
  }
  return t;
}

json wordpiece_to_json(const WordPieceVocab& v) {
  json j;
  j["initial"] = v.initial;
  j["continuation"] = v.continuation;
  return j;
}

WordPieceVocab wordpiece_from_json(const json& j) {
  WordPieceVocab v;
  for (const auto& s : j.at("initial")) v.initial.insert(s.get<std::string>());
  for (const auto& s : j.at("continuation")) {
    v.continuation.insert(s.get<std::string>());
  }
  return v;
}

json ulm_to_json(const UnigramVocab& v) {
  json j;
  j["log_prob"] = v.log_prob;
  return j;
}

UnigramVocab ulm_from_json(const json& j) {
  UnigramVocab v;
  for (const auto& [piece, lp] : j.at("log_prob").items()) {
    v.log_prob[piece] = lp.get<double>();
  }
  return v;
}

json morfessor_to_json(const MorfessorModel& m) {
  json j;
  j["lexicon"] = m.lexicon;
  j["char_cost"] = m.char_cost;
  j["end_cost"] = m.end_cost;
  j["unknown_char_cost"] = m.unknown_char_cost;
  j["morph_tokens"] = m.morph_tokens;
  j["boundary_tokens"] = m.boundary_tokens;
  j["corpus_cost"] = m.corpus_cost;
  j["lexicon_cost"] = m.lexicon_cost;
  return j;
}

MorfessorModel morfessor_from_json(const json& j) {
  MorfessorModel m;
  for (const auto& [morph, count] : j.at("lexicon").items()) {
    m.lexicon[morph] = count.get<std::int64_t>();
  }
  for (const auto& [c, cost] : j.at("char_cost").items()) {
    m.char_cost[c] = cost.get<double>();
  }
  m.end_cost = j.at("end_cost").get<double>();
  m.unknown_char_cost = j.at("unknown_char_cost").get<double>();
  m.morph_tokens = j.at("morph_tokens").get<std::int64_t>();
  m.boundary_tokens = j.at("boundary_tokens").get<std::int64_t>();
  m.corpus_cost = j.at("corpus_cost").get<double>();
  m.lexicon_cost = j.at("lexicon_cost").get<double>();
  return m;
}

json hmm_to_json(const HmmModel& m) {
  json j;
  const SlotGrammar& g = m.grammar;
  j["grammar"] = {{"start_prefix", g.start_prefix},
                  {"start_root", g.start_root},
                  {"prefix_to_prefix", g.prefix_to_prefix},
                  {"prefix_to_root", g.prefix_to_root},
                  {"root_to_root", g.root_to_root},
                  {"root_to_suffix", g.root_to_suffix},
                  {"root_to_end", g.root_to_end},
                  {"suffix_to_suffix", g.suffix_to_suffix},
                  {"suffix_to_end", g.suffix_to_end}};
  j["lexicon"] = {{"prefix", m.lexicon[0]},
                  {"root", m.lexicon[1]},
                  {"suffix", m.lexicon[2]}};
  j["emitter"] = m.emitter;
  return j;
}

HmmModel hmm_from_json(const json& j, std::string language) {
  HmmModel m;
  m.language = std::move(language);
  const json& g = j.at("grammar");
  m.grammar.start_prefix = g.at("start_prefix").get<double>();
  m.grammar.start_root = g.at("start_root").get<double>();
  m.grammar.prefix_to_prefix = g.at("prefix_to_prefix").get<double>();
  m.grammar.prefix_to_root = g.at("prefix_to_root").get<double>();
  m.grammar.root_to_root = g.at("root_to_root").get<double>();
  m.grammar.root_to_suffix = g.at("root_to_suffix").get<double>();
  m.grammar.root_to_end = g.at("root_to_end").get<double>();
  m.grammar.suffix_to_suffix = g.at("suffix_to_suffix").get<double>();
  m.grammar.suffix_to_end = g.at("suffix_to_end").get<double>();
  const char* slots[3] = {"prefix", "root", "suffix"};
  for (int s = 0; s < 3; ++s) {
    for (const auto& [morpheme, p] : j.at("lexicon").at(slots[s]).items()) {
      m.lexicon[s][morpheme] = p.get<double>();
    }
  }
  for (const auto& [morpheme, morphs] : j.at("emitter").items()) {
    for (const auto& [surface, p] : morphs.items()) {
      m.emitter[morpheme][surface] = p.get<double>();
    }
  }
  return m;
}

json labeler_to_json(const LabelerModel& m) {
  json j;
  json weights;
  for (const auto& [f, w] : m.tagger.weights) {
    weights[f] = json::array({w[0], w[1]});
  }
  j["weights"] = std::move(weights);
  j["rewrites_nonfinal"] = m.rewrites.contextual[0];
  j["rewrites_final"] = m.rewrites.contextual[1];
  j["rewrites_plain"] = m.rewrites.plain;
  return j;
}

LabelerModel labeler_from_json(const json& j, std::string language) {
  LabelerModel m;
  m.language = std::move(language);
  for (const auto& [f, w] : j.at("weights").items()) {
    m.tagger.weights[f] = {w.at(0).get<double>(), w.at(1).get<double>()};
  }
  auto read_counts = [](const json& src, auto& dst) {
    for (const auto& [segment, counts] : src.items()) {
      for (const auto& [canonical, count] : counts.items()) {
        dst[segment][canonical] = count.template get<std::int64_t>();
      }
    }
  };
  read_counts(j.at("rewrites_nonfinal"), m.rewrites.contextual[0]);
  read_counts(j.at("rewrites_final"), m.rewrites.contextual[1]);
  read_counts(j.at("rewrites_plain"), m.rewrites.plain);
  return m;
}

json context_to_json(const ContextModel& m) {
  json j;
  j["analyses"] = m.analyses;
  j["left"] = m.neighbors[0];
  j["right"] = m.neighbors[1];
  return j;
}

ContextModel context_from_json(const json& j, std::string language) {
  ContextModel m;
  m.language = std::move(language);
  for (const auto& [word, analyses] : j.at("analyses").items()) {
    for (const auto& [analysis, count] : analyses.items()) {
      m.analyses[word][analysis] = count.get<std::int64_t>();
    }
  }
  const char* sides[2] = {"left", "right"};
  for (int side = 0; side < 2; ++side) {
    for (const auto& [word, nbs] : j.at(sides[side]).items()) {
      for (const auto& [neighbor, analyses] : nbs.items()) {
        for (const auto& [analysis, count] : analyses.items()) {
          m.neighbors[side][word][neighbor][analysis] =
              count.get<std::int64_t>();
        }
      }
    }
  }
  return m;
}

}  // namespace

void save_bpe_model(const std::string& path, const MergeTable& table,
                    const std::string& language) {
  json j = header("bpe", language);
  j.update(bpe_to_json(table));
  write_json(path, j);
}

void save_wordpiece_model(const std::string& path, const WordPieceVocab& vocab,
                          const std::string& language) {
  json j = header("wordpiece", language);
  j.update(wordpiece_to_json(vocab));
  write_json(path, j);
}

void save_ulm_model(const std::string& path, const UnigramVocab& vocab,
                    const std::string& language) {
  json j = header("ulm", language);
  j.update(ulm_to_json(vocab));
  write_json(path, j);
}

void save_morfessor_model(const std::string& path, const MorfessorModel& model,
                          const std::string& language) {
  json j = header("morfessor", language);
  j.update(morfessor_to_json(model));
  write_json(path, j);
}

void save_hmm_model(const std::string& path, const HmmModel& model) {
  json j = header("hmm", model.language);
  j.update(hmm_to_json(model));
  write_json(path, j);
}

void save_labeler_model(const std::string& path, const LabelerModel& model) {
  json j = header("labeler", model.language);
  j.update(labeler_to_json(model));
  write_json(path, j);
}

void save_context_model(const std::string& path, const ContextModel& model) {
  json j = header("context", model.language);
  j.update(context_to_json(model));
  write_json(path, j);
}

std::string peek_model_kind(const std::string& path) {
  return read_json(path).at("kind").get<std::string>();
}

std::unique_ptr<Segmenter> load_segmenter(const std::string& path) {
  const json j = read_json(path);
  const std::string kind = j.at("kind").get<std::string>();
  std::string language = j.value("language", "");
  if (kind == "bpe") {
    return std::make_unique<BpeSegmenter>(bpe_from_json(j), std::move(language));
  }
  if (kind == "wordpiece") {
    return std::make_unique<WordPieceSegmenter>(wordpiece_from_json(j),
                                                std::move(language));
  }
  if (kind == "ulm") {
    return std::make_unique<UlmSegmenter>(ulm_from_json(j), std::move(language));
  }
  if (kind == "morfessor") {
    return std::make_unique<MorfessorSegmenter>(morfessor_from_json(j),
                                                std::move(language));
  }
  if (kind == "hmm") {
    return std::make_unique<HmmSegmenter>(hmm_from_json(j, std::move(language)));
  }
  if (kind == "labeler") {
    return std::make_unique<LabelerSegmenter>(
        labeler_from_json(j, std::move(language)));
  }
  throw ConfigError("model file " + path + " has kind \"" + kind +
                    "\", which is not a word segmenter");
}

ContextModel load_context_model(const std::string& path) {
  const json j = read_json(path);
  const std::string kind = j.at("kind").get<std::string>();
  if (kind != "context") {
    throw ConfigError("model file " + path + " has kind \"" + kind +
                      "\"; expected \"context\"");
  }
  return context_from_json(j, j.value("language", ""));
}

std::unique_ptr<Segmenter> make_bpe_segmenter(MergeTable table,
                                              std::string language) {
  return std::make_unique<BpeSegmenter>(std::move(table), std::move(language));
}
std::unique_ptr<Segmenter> make_wordpiece_segmenter(WordPieceVocab vocab,
                                                    std::string language) {
  return std::make_unique<WordPieceSegmenter>(std::move(vocab),
                                              std::move(language));
}
std::unique_ptr<Segmenter> make_ulm_segmenter(UnigramVocab vocab,
                                              std::string language) {
  return std::make_unique<UlmSegmenter>(std::move(vocab), std::move(language));
}
std::unique_ptr<Segmenter> make_morfessor_segmenter(MorfessorModel model,
                                                    std::string language) {
  return std::make_unique<MorfessorSegmenter>(std::move(model),
                                              std::move(language));
}
std::unique_ptr<Segmenter> make_hmm_segmenter(HmmModel model) {
  return std::make_unique<HmmSegmenter>(std::move(model));
}
std::unique_ptr<Segmenter> make_labeler_segmenter(LabelerModel model) {
  return std::make_unique<LabelerSegmenter>(std::move(model));
}

}  // namespace morphseg
