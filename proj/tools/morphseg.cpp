// morphseg: train, apply and evaluate morpheme segmenters on the
// word-level and sentence-level TSV formats.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "morphseg/core.hpp"
#include "morphseg/datasets.hpp"
#include "morphseg/error.hpp"
#include "morphseg/evaluation.hpp"
#include "morphseg/model_io.hpp"
#include "morphseg/sentence.hpp"
#include "morphseg/text.hpp"
#include "morphseg/wikt.hpp"

namespace {

using namespace morphseg;

WordCounts to_word_counts(const Dataset& data) {
  WordCounts counts;
  for (const WordEntry& e : data.words) ++counts[e.word];
  return counts;
}

void print_histogram(const std::string& name, const Dataset& data) {
  const CategoryHistogram h = corpus_stats(data);
  std::printf("%s\ttotal\t%lld\n", name.c_str(),
              static_cast<long long>(h.total));
  for (const auto& [code, count] : h.counts) {
    std::printf("%s\t%s\t%lld\n", name.c_str(), code.c_str(),
                static_cast<long long>(count));
  }
}

std::string default_output(const std::string& input, const char* tag) {
  const std::size_t dot = input.rfind(".tsv");
  const std::string stem =
      dot != std::string::npos && dot == input.size() - 4
          ? input.substr(0, dot)
          : input;
  return stem + "." + tag + ".tsv";
}

struct SplitArgs {
  std::string in, out_train, out_dev, out_test, exclude, language = "und";
  std::string train = "0.8", dev = "0.1", test = "0.1";
  std::uint64_t seed = kDefaultSeed;
};

int cmd_split(const SplitArgs& args) {
  Dataset data = read_word_file(args.in, args.language);
  if (!args.exclude.empty()) {
    const Dataset protected_set = read_sentence_file(args.exclude, args.language);
    const ExcludeResult excluded = exclude_overlap(data, protected_set);
    std::printf("excluded\t%zu\n", excluded.removed);
    data = std::move(excluded.kept);
  }
  SplitSpec spec;
  spec.train = parse_fraction(args.train);
  spec.dev = parse_fraction(args.dev);
  spec.test = parse_fraction(args.test);
  spec.seed = args.seed;
  const SplitResult split = stratified_split(data, spec);

  const std::string out_train =
      args.out_train.empty() ? default_output(args.in, "train") : args.out_train;
  const std::string out_dev =
      args.out_dev.empty() ? default_output(args.in, "dev") : args.out_dev;
  const std::string out_test =
      args.out_test.empty() ? default_output(args.in, "test") : args.out_test;
  write_word_file(out_train, split.train, 3);
  write_word_file(out_dev, split.dev, 3);
  write_word_file(out_test, split.test, 3);
  print_histogram("train", split.train);
  print_histogram("dev", split.dev);
  print_histogram("test", split.test);
  return 0;
}

struct TrainArgs {
  std::string model, in, out, language = "und";
  std::uint64_t seed = kDefaultSeed;
  std::size_t merges = 8000;
  std::size_t vocab_size = 8000;
  std::size_t seed_max_len = 6;
  std::size_t epochs = 8;
  std::size_t iters = 10;
  double tol = 1e-4;
  std::size_t max_affix_len = 4;
  std::size_t max_candidates = 200;
  bool unsupervised = false;
};

int cmd_train(const TrainArgs& args) {
  if (args.model == "context") {
    const Dataset data = read_sentence_file(args.in, args.language);
    const ContextModel ctx = train_context(data);
    save_context_model(args.out, ctx);
    std::printf("trained context model on %zu sentences (%zu word types)\n",
                data.sentences.size(), ctx.analyses.size());
    return 0;
  }

  const Dataset data = read_word_file(args.in, args.language);
  const bool has_segmentation =
      !data.words.empty() && data.words.front().segmentation.has_value();

  if (args.model == "bpe") {
    const MergeTable table = bpe_train(to_word_counts(data), args.merges);
    save_bpe_model(args.out, table, args.language);
    std::printf("trained bpe: %zu merges, alphabet %zu\n", table.merges.size(),
                table.alphabet.size());
  } else if (args.model == "wordpiece") {
    const WordPieceVocab vocab =
        wordpiece_train(to_word_counts(data), args.vocab_size);
    save_wordpiece_model(args.out, vocab, args.language);
    std::printf("trained wordpiece: %zu initial + %zu continuation pieces\n",
                vocab.initial.size(), vocab.continuation.size());
  } else if (args.model == "ulm") {
    UlmTrainOptions opts;
    opts.vocab_size = args.vocab_size;
    opts.seed_max_len = args.seed_max_len;
    const UnigramVocab vocab = ulm_train(to_word_counts(data), opts);
    save_ulm_model(args.out, vocab, args.language);
    std::printf("trained ulm: %zu pieces\n", vocab.log_prob.size());
  } else if (args.model == "morfessor") {
    const MorfessorModel model = morfessor_train(to_word_counts(data));
    save_morfessor_model(args.out, model, args.language);
    std::printf("trained morfessor: %zu morphs, total cost %.3f nats\n",
                model.lexicon.size(), model.total_cost());
  } else if (args.model == "hmm") {
    HmmInitOptions init;
    init.max_affix_len = args.max_affix_len;
    init.max_candidates = args.max_candidates;
    HmmModel model;
    if (args.unsupervised) {
      model = hmm_init_unsupervised(to_word_counts(data), init);
    } else {
      if (!has_segmentation) {
        throw ConfigError(
            "hmm training needs a segmentation column; pass --unsupervised "
            "to train on bare words");
      }
      model = hmm_init(data, init);
    }
    model.language = args.language;
    EmOptions em;
    em.max_iters = args.iters;
    em.tol = args.tol;
    const EmStats stats = em_train(model, to_word_counts(data), em);
    save_hmm_model(args.out, model);
    std::printf("trained hmm: %zu iterations, log-likelihood %.4f\n",
                stats.iterations, stats.final_loglik);
  } else if (args.model == "labeler") {
    if (!has_segmentation) {
      throw ConfigError("labeler training needs a segmentation column");
    }
    TaggerTrainOptions opts;
    opts.epochs = args.epochs;
    opts.seed = args.seed;
    LabelerModel model = train_tagger(data, opts);
    model.language = args.language;
    save_labeler_model(args.out, model);
    std::printf("trained labeler: %zu features, %zu rewrite segments\n",
                model.tagger.weights.size(), model.rewrites.plain.size());
  } else {
    throw ConfigError("unknown model kind \"" + args.model + "\"");
  }
  return 0;
}

struct SegmentArgs {
  std::string model, in, out, context;
  bool sentence = false;
  bool fallback_only = false;
};

int cmd_segment(const SegmentArgs& args) {
  if (!args.sentence) {
    if (!args.context.empty()) {
      throw ConfigError("--context only applies to --sentence mode");
    }
    const std::unique_ptr<Segmenter> segmenter = load_segmenter(args.model);
    const Dataset data = read_word_file(args.in, segmenter->language());
    // Buffer everything so a failing word never leaves a truncated file.
    std::string buffer;
    for (std::size_t i = 0; i < data.words.size(); ++i) {
      const WordEntry& e = data.words[i];
      try {
        buffer += e.word;
        buffer += '\t';
        buffer += format_segmentation(segmenter->segment(e.word));
        buffer += '\n';
      } catch (const Error& err) {
        throw DataError("line " + std::to_string(i + 1) + " (\"" + e.word +
                        "\"): " + err.what());
      }
    }
    std::ofstream file(args.out, std::ios::binary);
    if (!file) throw DataError("cannot write file: " + args.out);
    file << buffer;
    std::printf("segmented %zu words\n", data.words.size());
    return 0;
  }

  // Sentence mode: context model, fallback segmenter, or both.
  std::unique_ptr<Segmenter> fallback;
  ContextModel ctx;
  bool have_ctx = false;
  if (!args.context.empty()) {
    ctx = load_context_model(args.context);
    have_ctx = true;
  }
  if (!args.fallback_only || !have_ctx) {
    fallback = load_segmenter(args.model);
  }
  if (!have_ctx && !fallback) {
    throw ConfigError("sentence mode needs --context and/or a word model");
  }

  std::ifstream in(args.in, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + args.in);
  std::string buffer;
  std::string line;
  std::size_t count = 0;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    const std::string sentence =
        tab == std::string::npos ? line : line.substr(0, tab);
    try {
      const SentenceEntry entry = segment_sentence(
          sentence, have_ctx ? &ctx : nullptr, fallback.get());
      buffer += format_sentence_line(entry);
      buffer += '\n';
    } catch (const Error& err) {
      throw DataError("line " + std::to_string(line_number) + ": " +
                      err.what());
    }
    ++count;
  }
  std::ofstream file(args.out, std::ios::binary);
  if (!file) throw DataError("cannot write file: " + args.out);
  file << buffer;
  std::printf("segmented %zu sentences\n", count);
  return 0;
}

struct EvaluateArgs {
  std::string gold, pred, format = "json", by_length, match = "multiset";
  bool sentence = false;
  bool by_category = false;
  unsigned threads = 0;
};

int cmd_evaluate(const EvaluateArgs& args) {
  const MatchPolicy policy = args.match == "positional"
                                 ? MatchPolicy::positional
                                 : MatchPolicy::multiset;
  if (args.match != "multiset" && args.match != "positional") {
    throw ConfigError("--match must be multiset or positional");
  }
  MetricsReport report;
  std::vector<WordEntry> gold_entries;
  std::vector<Segmentation> predictions;
  if (args.sentence) {
    const Dataset gold = read_sentence_file(args.gold, "und");
    const Dataset pred = read_sentence_file(args.pred, "und");
    report = evaluate_sentences(gold, pred, policy);
  } else {
    const Dataset gold = read_word_file(args.gold, "und");
    const Dataset pred = read_word_file(args.pred, "und", 2);
    if (gold.words.size() != pred.words.size()) {
      throw DataError("alignment error: " + std::to_string(gold.words.size()) +
                      " gold lines vs " + std::to_string(pred.words.size()) +
                      " predicted");
    }
    gold_entries = gold.words;
    for (std::size_t i = 0; i < pred.words.size(); ++i) {
      if (gold.words[i].word != pred.words[i].word) {
        throw DataError("word mismatch on line " + std::to_string(i + 1) +
                        ": gold \"" + gold.words[i].word + "\" vs predicted \"" +
                        pred.words[i].word + "\"");
      }
      predictions.push_back(*pred.words[i].segmentation);
    }
    const unsigned threads =
        args.threads > 0 ? args.threads
                         : std::max(1u, std::thread::hardware_concurrency());
    report = aggregate(gold_entries, predictions, policy, threads);
  }
  if (!args.by_category) report.per_category.clear();

  if (args.format == "json") {
    std::printf("%s\n", report_json(report).c_str());
  } else if (args.format == "tsv") {
    std::fputs(report_tsv(report).c_str(), stdout);
  } else {
    throw ConfigError("--format must be json or tsv");
  }

  if (!args.by_length.empty()) {
    if (args.sentence) {
      throw ConfigError("--by-length applies to word-level evaluation only");
    }
    const LengthAnalysis analysis = analyze_by_length(
        gold_entries, predictions, parse_length_buckets(args.by_length), policy);
    std::fputs(length_analysis_tsv(analysis).c_str(), stdout);
  }
  return 0;
}

struct StatsArgs {
  std::string in, format = "tsv";
};

int cmd_stats(const StatsArgs& args) {
  const Dataset data = read_word_file(args.in, "und");
  const CategoryHistogram h = corpus_stats(data);
  if (args.format == "json") {
    std::string json = "{\n  \"total\": " + std::to_string(h.total) +
                       ",\n  \"counts\": {";
    bool first = true;
    for (const auto& [code, count] : h.counts) {
      json += first ? "\n" : ",\n";
      json += "    \"" + code + "\": " + std::to_string(count);
      first = false;
    }
    json += "\n  }\n}";
    std::printf("%s\n", json.c_str());
  } else if (args.format == "tsv") {
    for (const auto& [code, count] : h.counts) {
      std::printf("%s\t%lld\n", code.c_str(), static_cast<long long>(count));
    }
    std::printf("total\t%lld\n", static_cast<long long>(h.total));
  } else {
    throw ConfigError("--format must be json or tsv");
  }
  return 0;
}

struct ExtractArgs {
  std::string pages, language, out, review, log;
};

int cmd_extract(const ExtractArgs& args) {
  const std::vector<PageRecord> pages = read_page_file(args.pages);
  const CompoundExtraction result = extract_compounds(pages, args.language);
  write_word_file(args.out, result.entries, 3);
  if (!args.review.empty()) {
    write_word_file(args.review, result.review, 3);
  }
  if (!args.log.empty()) {
    std::ofstream log(args.log, std::ios::binary);
    if (!log) throw DataError("cannot write file: " + args.log);
    for (const std::string& d : result.diagnostics) log << d << '\n';
  }
  std::printf("pages\t%zu\nconcatenative\t%zu\nreview\t%zu\ndiagnostics\t%zu\n",
              result.pages_seen, result.entries.words.size(),
              result.review.words.size(), result.diagnostics.size());
  return 0;
}

struct RootFilterArgs {
  std::string inherited, derived, out;
};

std::set<std::string> read_word_set(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) words.insert(line);
  }
  return words;
}

int cmd_root_filter(const RootFilterArgs& args) {
  const std::set<std::string> inherited = read_word_set(args.inherited);
  const std::set<std::string> derived = read_word_set(args.derived);
  const std::set<std::string> roots = root_filter(inherited, derived);
  std::ofstream out(args.out, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + args.out);
  for (const std::string& w : roots) out << w << '\n';
  std::printf("inherited\t%zu\nremoved\t%zu\nroots\t%zu\n", inherited.size(),
              inherited.size() - roots.size(), roots.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"morpheme segmentation toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file mirroring the flags");

  unsigned threads = 0;
  app.add_option("--threads", threads,
                 "cap on worker threads (default: available cores)")
      ->envname("MORPHSEG_THREADS");

  SplitArgs split_args;
  CLI::App* split = app.add_subcommand(
      "split", "stratified train/dev/test split of a 3-column word file");
  split->add_option("--in", split_args.in, "input word-level TSV")->required();
  split->add_option("--train", split_args.train, "train fraction");
  split->add_option("--dev", split_args.dev, "dev fraction");
  split->add_option("--test", split_args.test, "test fraction");
  split->add_option("--seed", split_args.seed, "split seed");
  split->add_option("--exclude", split_args.exclude,
                    "sentence-level TSV whose tokens are removed first");
  split->add_option("--language", split_args.language, "ISO 639-3 code");
  split->add_option("--out-train", split_args.out_train, "train output path");
  split->add_option("--out-dev", split_args.out_dev, "dev output path");
  split->add_option("--out-test", split_args.out_test, "test output path");

  TrainArgs train_args;
  CLI::App* train = app.add_subcommand("train", "train a segmenter model");
  train
      ->add_option("--model", train_args.model,
                   "bpe|wordpiece|ulm|morfessor|hmm|labeler|context")
      ->required();
  train->add_option("--in", train_args.in, "training TSV")->required();
  train->add_option("--out", train_args.out, "model JSON path")->required();
  train->add_option("--language", train_args.language, "ISO 639-3 code");
  train->add_option("--seed", train_args.seed, "training seed");
  train->add_option("--merges", train_args.merges, "bpe merge count");
  train->add_option("--vocab-size", train_args.vocab_size,
                    "ulm/wordpiece vocabulary size");
  train->add_option("--seed-max-len", train_args.seed_max_len,
                    "ulm seed substring length");
  train->add_option("--epochs", train_args.epochs, "labeler epochs");
  train->add_option("--iters", train_args.iters, "hmm EM iterations");
  train->add_option("--tol", train_args.tol, "hmm EM stopping tolerance");
  train->add_option("--max-affix-len", train_args.max_affix_len,
                    "hmm affix candidate length");
  train->add_option("--max-candidates", train_args.max_candidates,
                    "hmm affix candidate count");
  train->add_flag("--unsupervised", train_args.unsupervised,
                  "hmm: train on bare words");

  SegmentArgs segment_args;
  CLI::App* segment = app.add_subcommand("segment", "apply a trained model");
  segment->add_option("--model", segment_args.model, "model JSON")->required();
  segment->add_option("--in", segment_args.in, "input TSV")->required();
  segment->add_option("--out", segment_args.out, "output TSV")->required();
  segment->add_flag("--sentence", segment_args.sentence,
                    "sentence-level input");
  segment->add_option("--context", segment_args.context,
                      "context model JSON (sentence mode)");
  segment->add_flag("--fallback-only", segment_args.fallback_only,
                    "sentence mode: ignore the word model when the context "
                    "model covers a token");

  EvaluateArgs eval_args;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "score predictions against gold");
  evaluate->add_option("--gold", eval_args.gold, "gold TSV")->required();
  evaluate->add_option("--pred", eval_args.pred, "prediction TSV")->required();
  evaluate->add_option("--format", eval_args.format, "json|tsv");
  evaluate->add_flag("--sentence", eval_args.sentence, "sentence-level files");
  evaluate->add_flag("--by-category", eval_args.by_category,
                     "include per-category sub-reports");
  evaluate->add_option("--by-length", eval_args.by_length,
                       "length buckets, e.g. 1:5,5:10,10:");
  evaluate->add_option("--match", eval_args.match,
                       "morpheme matching policy: multiset|positional");

  StatsArgs stats_args;
  CLI::App* stats =
      app.add_subcommand("stats", "per-category histogram of a word file");
  stats->add_option("--in", stats_args.in, "input TSV")->required();
  stats->add_option("--format", stats_args.format, "tsv|json");

  ExtractArgs extract_args;
  CLI::App* extract = app.add_subcommand(
      "extract", "compound extraction from (title, wikitext) pages");
  extract->add_option("--pages", extract_args.pages, "2-column page TSV")
      ->required();
  extract->add_option("--language", extract_args.language,
                      "wiktionary language code, e.g. en")
      ->required();
  extract->add_option("--out", extract_args.out, "output word TSV")->required();
  extract->add_option("--review", extract_args.review,
                      "non-concatenative candidates output");
  extract->add_option("--log", extract_args.log, "diagnostics log");

  RootFilterArgs root_args;
  CLI::App* roots = app.add_subcommand(
      "root-filter", "inherited word list minus derived/compound words");
  roots->add_option("--inherited", root_args.inherited, "word list")
      ->required();
  roots->add_option("--derived", root_args.derived, "word list to subtract")
      ->required();
  roots->add_option("--out", root_args.out, "output word list")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;  // usage/config errors share one exit code
  }

  try {
    if (split->parsed()) return cmd_split(split_args);
    if (train->parsed()) return cmd_train(train_args);
    if (segment->parsed()) return cmd_segment(segment_args);
    if (evaluate->parsed()) {
      eval_args.threads = threads;
      return cmd_evaluate(eval_args);
    }
    if (stats->parsed()) return cmd_stats(stats_args);
    if (extract->parsed()) return cmd_extract(extract_args);
    if (roots->parsed()) return cmd_root_filter(root_args);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
