#pragma once

#include <memory>
#include <string>

#include "morphseg/bpe.hpp"
#include "morphseg/hmm.hpp"
#include "morphseg/labeler.hpp"
#include "morphseg/morfessor.hpp"
#include "morphseg/segmenter.hpp"
#include "morphseg/sentence.hpp"
#include "morphseg/ulm.hpp"
#include "morphseg/wordpiece.hpp"

namespace morphseg {

// Model files are versioned, language-tagged JSON with a fixed header:
// {"format_version": 1, "kind": "...", "language": "..."} plus the
// kind-specific payload.
inline constexpr int kModelFormatVersion = 1;

void save_bpe_model(const std::string& path, const MergeTable& table,
                    const std::string& language);
void save_wordpiece_model(const std::string& path, const WordPieceVocab& vocab,
                          const std::string& language);
void save_ulm_model(const std::string& path, const UnigramVocab& vocab,
                    const std::string& language);
void save_morfessor_model(const std::string& path, const MorfessorModel& model,
                          const std::string& language);
void save_hmm_model(const std::string& path, const HmmModel& model);
void save_labeler_model(const std::string& path, const LabelerModel& model);
void save_context_model(const std::string& path, const ContextModel& model);

// Reads just the header kind ("bpe", "ulm", "context", ...).
std::string peek_model_kind(const std::string& path);

// Loads any word-level segmenter model, dispatching on the header kind.
std::unique_ptr<Segmenter> load_segmenter(const std::string& path);

ContextModel load_context_model(const std::string& path);

// Concrete wrappers, exposed so trained models can be used directly.
std::unique_ptr<Segmenter> make_bpe_segmenter(MergeTable table,
                                              std::string language);
std::unique_ptr<Segmenter> make_wordpiece_segmenter(WordPieceVocab vocab,
                                                    std::string language);
std::unique_ptr<Segmenter> make_ulm_segmenter(UnigramVocab vocab,
                                              std::string language);
std::unique_ptr<Segmenter> make_morfessor_segmenter(MorfessorModel model,
                                                    std::string language);
std::unique_ptr<Segmenter> make_hmm_segmenter(HmmModel model);
std::unique_ptr<Segmenter> make_labeler_segmenter(LabelerModel model);

}  // namespace morphseg
