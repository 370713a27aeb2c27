#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "morphseg/core.hpp"
#include "morphseg/rng.hpp"
#include "test_util.hpp"

#ifndef MORPHSEG_CLI_PATH
#error "MORPHSEG_CLI_PATH must point at the built binary"
#endif

namespace fs = std::filesystem;
using namespace morphseg;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  static int counter = 0;
  const fs::path log =
      fs::temp_directory_path() / ("morphseg_cli_" + std::to_string(counter++));
  const std::string cmd =
      std::string(MORPHSEG_CLI_PATH) + " " + args + " > " + log.string() +
      " 2>&1";
  const int rc = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WEXITSTATUS(rc);
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  result.output = ss.str();
  fs::remove(log);
  return result;
}

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) ++n;
  return n;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class TempDir {
 public:
  TempDir() {
    dir_ = fs::temp_directory_path() /
           ("morphseg_test_" + std::to_string(Rng(::getpid()).next() % 100000) +
            "_" + std::to_string(counter_++));
    fs::create_directories(dir_);
  }
  ~TempDir() { fs::remove_all(dir_); }
  fs::path operator/(const std::string& name) const { return dir_ / name; }

 private:
  fs::path dir_;
  static inline int counter_ = 0;
};

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("split produces 800/100/100 on a uniform 1000-entry file") {
  TempDir tmp;
  std::string data;
  for (int i = 0; i < 1000; ++i) {
    const std::string w = "w" + std::to_string(i);
    data += w + "\t" + w + "\t100\n";
  }
  write_file(tmp / "in.tsv", data);
  const RunResult r = run("split --in " + (tmp / "in.tsv").string());
  CHECK(r.exit_code == 0);
  CHECK(line_count(tmp / "in.train.tsv") == 800);
  CHECK(line_count(tmp / "in.dev.tsv") == 100);
  CHECK(line_count(tmp / "in.test.tsv") == 100);
  CHECK(r.output.find("train\t100\t800") != std::string::npos);

  // Identical flags and seed reproduce the split byte for byte.
  const std::string train_bytes = slurp(tmp / "in.train.tsv");
  const RunResult again = run("split --in " + (tmp / "in.tsv").string());
  CHECK(again.exit_code == 0);
  CHECK(slurp(tmp / "in.train.tsv") == train_bytes);
}

TEST_CASE("split rejects fractions that do not sum to one") {
  TempDir tmp;
  write_file(tmp / "in.tsv", "a\ta\t000\n");
  const RunResult r = run("split --in " + (tmp / "in.tsv").string() +
                          " --train 0.8 --dev 0.1 --test 0.2");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("sum") != std::string::npos);
}

TEST_CASE("split --exclude removes protected words first") {
  TempDir tmp;
  write_file(tmp / "in.tsv", "aaa\taaa\t000\nbbb\tbbb\t000\nccc\tccc\t000\n");
  write_file(tmp / "prot.tsv", "bbb x\tbbb x\n");
  const RunResult r = run("split --in " + (tmp / "in.tsv").string() +
                          " --exclude " + (tmp / "prot.tsv").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("excluded\t1") != std::string::npos);
}

TEST_CASE("hmm training without a segmentation column is a usage error") {
  TempDir tmp;
  write_file(tmp / "words.tsv", "abc\nabd\n");
  RunResult r = run("train --model hmm --in " + (tmp / "words.tsv").string() +
                    " --out " + (tmp / "m.json").string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("unsupervised") != std::string::npos);

  // With --unsupervised the same file trains.
  r = run("train --model hmm --unsupervised --in " +
          (tmp / "words.tsv").string() + " --out " + (tmp / "m.json").string());
  CHECK(r.exit_code == 0);
}

TEST_CASE("train ulm then segment: 1-column in, 2-column out, same lines") {
  TempDir tmp;
  Rng rng(7);
  std::string corpus;
  const std::string alphabet = "abcde";
  for (int i = 0; i < 50; ++i) {
    std::string w;
    const std::size_t len = 2 + rng.below(6);
    for (std::size_t k = 0; k < len; ++k) {
      w += alphabet[rng.below(alphabet.size())];
    }
    corpus += w + "\n";
  }
  write_file(tmp / "train.tsv", corpus);
  RunResult r =
      run("train --model ulm --vocab-size 64 --in " +
          (tmp / "train.tsv").string() + " --out " + (tmp / "ulm.json").string());
  CHECK(r.exit_code == 0);

  write_file(tmp / "words.tsv", "abc\nde\n");
  r = run("segment --model " + (tmp / "ulm.json").string() + " --in " +
          (tmp / "words.tsv").string() + " --out " + (tmp / "pred.tsv").string());
  CHECK(r.exit_code == 0);
  CHECK(line_count(tmp / "pred.tsv") == 2);
  const std::string pred = slurp(tmp / "pred.tsv");
  CHECK(pred.find('\t') != std::string::npos);

  // Identical invocation produces byte-identical output.
  const std::string first = slurp(tmp / "pred.tsv");
  r = run("segment --model " + (tmp / "ulm.json").string() + " --in " +
          (tmp / "words.tsv").string() + " --out " + (tmp / "pred2.tsv").string());
  CHECK(r.exit_code == 0);
  CHECK(slurp(tmp / "pred2.tsv") == first);
}

TEST_CASE("segment rejects a model of the wrong kind") {
  TempDir tmp;
  write_file(tmp / "sent.tsv", "ab cd\ta @@b cd\n");
  RunResult r = run("train --model context --in " + (tmp / "sent.tsv").string() +
                    " --out " + (tmp / "ctx.json").string());
  CHECK(r.exit_code == 0);
  write_file(tmp / "words.tsv", "ab\n");
  r = run("segment --model " + (tmp / "ctx.json").string() + " --in " +
          (tmp / "words.tsv").string() + " --out " + (tmp / "p.tsv").string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("context") != std::string::npos);
}

TEST_CASE("sentence segmentation with a context model and fallback") {
  TempDir tmp;
  write_file(tmp / "sent.tsv",
             "Гэрт эмээ хоол хийв\tГэр @@т эмээ хоол хийх @@в\n"
             "Би өдөр эмээ уусан\tБи өдөр эм @@ээ уух @@сан\n");
  RunResult r = run("train --model context --in " + (tmp / "sent.tsv").string() +
                    " --out " + (tmp / "ctx.json").string());
  CHECK(r.exit_code == 0);

  write_file(tmp / "wtrain.tsv", "хоол\tхоол\nГэрт\tГэр @@т\n");
  r = run("train --model labeler --in " + (tmp / "wtrain.tsv").string() +
          " --out " + (tmp / "lab.json").string());
  CHECK(r.exit_code == 0);

  write_file(tmp / "in.tsv", "Би өдөр эмээ уусан\n");
  r = run("segment --sentence --model " + (tmp / "lab.json").string() +
          " --context " + (tmp / "ctx.json").string() + " --in " +
          (tmp / "in.tsv").string() + " --out " + (tmp / "out.tsv").string());
  CHECK(r.exit_code == 0);
  const std::string out = slurp(tmp / "out.tsv");
  CHECK(out.find("эм @@ээ") != std::string::npos);
  CHECK(out.find("уух @@сан") != std::string::npos);
}

TEST_CASE("evaluate reproduces the hand-derived aggregation") {
  TempDir tmp;
  write_file(tmp / "gold.tsv",
             "sheepiness\tsheep @@y @@ness\nsheepiness\tsheep @@y @@ness\n");
  write_file(tmp / "pred.tsv",
             "sheepiness\tsheep @@iness\nsheepiness\tsheep @@y @@ness\n");
  const RunResult r = run("evaluate --format tsv --gold " +
                          (tmp / "gold.tsv").string() + " --pred " +
                          (tmp / "pred.tsv").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("all\tprecision\t80.00") != std::string::npos);
  CHECK(r.output.find("all\trecall\t66.67") != std::string::npos);
  CHECK(r.output.find("all\tf1\t72.73") != std::string::npos);
}

TEST_CASE("evaluate identical files gives perfect scores and categories") {
  TempDir tmp;
  write_file(tmp / "gold.tsv", "walked\twalk @@ed\t100\nhotpot\thot @@pot\t001\n");
  write_file(tmp / "pred.tsv", "walked\twalk @@ed\nhotpot\thot @@pot\n");
  RunResult r = run("evaluate --by-category --format tsv --gold " +
                    (tmp / "gold.tsv").string() + " --pred " +
                    (tmp / "pred.tsv").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("all\tf1\t100.00") != std::string::npos);
  CHECK(r.output.find("all\tavg_levenshtein\t0.00") != std::string::npos);
  CHECK(r.output.find("100\tf1\t100.00") != std::string::npos);
  CHECK(r.output.find("001\tf1\t100.00") != std::string::npos);

  // JSON format carries the same numbers.
  r = run("evaluate --gold " + (tmp / "gold.tsv").string() + " --pred " +
          (tmp / "pred.tsv").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"f1\": 100.0") != std::string::npos);

  // Length analysis table.
  r = run("evaluate --by-length 1:6,6: --format tsv --gold " +
          (tmp / "gold.tsv").string() + " --pred " + (tmp / "pred.tsv").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("category\t1:6\t6:") != std::string::npos);
}

TEST_CASE("evaluate misalignment exits with a data error") {
  TempDir tmp;
  write_file(tmp / "gold.tsv", "a\ta\nb\tb\n");
  write_file(tmp / "pred.tsv", "a\ta\n");
  const RunResult r = run("evaluate --gold " + (tmp / "gold.tsv").string() +
                          " --pred " + (tmp / "pred.tsv").string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("alignment") != std::string::npos);
}

TEST_CASE("stats prints the category histogram") {
  TempDir tmp;
  write_file(tmp / "in.tsv", "a\ta\t110\nb\tb\t110\nc\tc\t110\n");
  const RunResult r = run("stats --in " + (tmp / "in.tsv").string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("110\t3") != std::string::npos);
  CHECK(r.output.find("total\t3") != std::string::npos);
}

TEST_CASE("extract and root-filter work end to end") {
  TempDir tmp;
  write_file(tmp / "pages.tsv",
             "newspaper\tEquivalent to {{compound|en|news|paper}}.\n"
             "basketball\tFrom {{affix|en|basket|ball}}.\n"
             "worker\t{{affix|en|work|-er}}\n");
  RunResult r = run("extract --pages " + (tmp / "pages.tsv").string() +
                    " --language en --out " + (tmp / "comp.tsv").string() +
                    " --review " + (tmp / "rev.tsv").string());
  CHECK(r.exit_code == 0);
  const std::string out = slurp(tmp / "comp.tsv");
  CHECK(out.find("newspaper\tnews @@paper\t001") != std::string::npos);
  CHECK(out.find("basketball\tbasket @@ball\t001") != std::string::npos);
  CHECK(out.find("worker") == std::string::npos);

  write_file(tmp / "inherited.txt", "book\nnewspaper\nhouse\n");
  write_file(tmp / "derived.txt", "newspaper\nworker\n");
  r = run("root-filter --inherited " + (tmp / "inherited.txt").string() +
          " --derived " + (tmp / "derived.txt").string() + " --out " +
          (tmp / "roots.txt").string());
  CHECK(r.exit_code == 0);
  CHECK(slurp(tmp / "roots.txt") == "book\nhouse\n");
  CHECK(r.output.find("roots\t2") != std::string::npos);
}

TEST_CASE("unknown subcommand and missing options are usage errors") {
  CHECK(run("bogus").exit_code == 2);
  CHECK(run("train --model bpe").exit_code == 2);  // missing --in/--out
  CHECK(run("--help").exit_code == 0);
}
