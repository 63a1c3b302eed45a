#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "support.hpp"

using namespace kvext;
using namespace kvext::testing;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "kvext");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Workspace {
 public:
  Workspace() : dir_(fs::temp_directory_path() / ("kvext-cli-" + std::to_string(counter_++))) {
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  ~Workspace() { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& content) const {
    const auto path = dir_ / name;
    std::ofstream(path) << content;
    return path.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path dir_;
};

std::string record_line(const std::string& id, const std::string& text) {
  nlohmann::ordered_json j{{"id", id}, {"text", text}};
  return j.dump() + "\n";
}

const std::string kEsposallesVocab =
    R"({"categories": ["N", "SN", "O", "L", "S"], "persons": ["H", "W", "HF", "HM", "WF", "WM", "OP"], "separator": "-"})";

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("self-evaluation of htr") {
    Workspace ws;
    const auto refs = ws.write("r.jsonl", record_line("a", "dit dia") + record_line("b", "<N-W>Maria"));
    const auto r = run({"evaluate", "htr", "--refs", refs, "--hyps", refs});
    CHECK(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["cer"] == 0.0);
    CHECK(j["wer"] == 0.0);
    CHECK(j["documents"] == 2);
  }

  TEST_CASE("threshold out of range") {
    Workspace ws;
    const auto refs = ws.write("r.jsonl", record_line("a", "dit"));
    const auto r = run({"evaluate", "ner", "--refs", refs, "--hyps", refs, "--threshold", "1.5"});
    CHECK(r.code == 2);
    CHECK(r.err.find("threshold") != std::string::npos);
    CHECK(run({"evaluate", "ner", "--refs", refs, "--hyps", refs, "--threshold", "0"}).code == 2);
    CHECK(run({"evaluate", "ner", "--refs", refs, "--hyps", refs, "--threshold", "1"}).code == 0);
  }

  TEST_CASE("transform to key-value") {
    Workspace ws;
    const auto vocab = ws.write("v.json", kEsposallesVocab);
    const auto in = ws.write("in.jsonl", record_line("rec", kRecordHtrNer));
    const auto out = ws.path("out.jsonl");
    const auto r = run({"transform", "--input", in, "--output", out, "--regime", "key-value", "--vocab", vocab});
    REQUIRE(r.code == 0);
    std::ifstream file(out);
    std::string line;
    std::getline(file, line);
    CHECK(nlohmann::json::parse(line)["text"] == kRecordKeyValue);

    const auto htr = run({"transform", "--input", in, "--regime", "htr", "--vocab", vocab});
    CHECK(nlohmann::json::parse(htr.out)["text"] == kRecordHtr);
  }

  TEST_CASE("transform shuffling is reproducible") {
    Workspace ws;
    const auto in = ws.write("in.jsonl", record_line("rec", kRecordHtrNer));
    const auto a = run({"transform", "--input", in, "--regime", "key-value", "--shuffle-seed", "5"});
    const auto b = run({"transform", "--input", in, "--regime", "key-value", "--shuffle-seed", "5"});
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(nlohmann::json::parse(a.out)["text"] != kRecordKeyValue);
  }

  TEST_CASE("vocabulary from the environment") {
    Workspace ws;
    const auto vocab = ws.write("v.json", R"({"labels": ["surname"]})");
    const auto in = ws.write("in.jsonl", record_line("a", "<first_name>Marie"));
    CHECK(run({"transform", "--input", in, "--regime", "htr"}).code == 0);
    ::setenv("KVEXT_VOCAB", vocab.c_str(), 1);
    const auto r = run({"transform", "--input", in, "--regime", "htr"});
    ::unsetenv("KVEXT_VOCAB");
    CHECK(r.code == 2);
    CHECK(r.err.find("first_name") != std::string::npos);
  }

  TEST_CASE("missing predictions exit 1 with a report") {
    Workspace ws;
    const auto vocab = ws.write("v.json", kEsposallesVocab);
    const auto refs = ws.write("r.jsonl", record_line("a", "<N-W>Maria") + record_line("b", "<N-H>Jua"));
    const auto hyps = ws.write("h.jsonl", record_line("a", "<N-W>Maria") + record_line("z", "x"));
    for (const char* metric : {"htr", "ner", "iehhr"}) {
      const auto r = run({"evaluate", metric, "--refs", refs, "--hyps", hyps, "--vocab", vocab});
      CHECK(r.code == 1);
      CHECK(r.err.find("'b'") != std::string::npos);
      CHECK(r.err.find("'z'") != std::string::npos);
      const auto j = nlohmann::json::parse(r.out);
      CHECK(j["missing_ids"] == nlohmann::json::array({"b"}));
    }
  }

  TEST_CASE("ner and iehhr reports") {
    Workspace ws;
    const auto vocab = ws.write("v.json", kEsposallesVocab);
    const auto refs = ws.write("r.jsonl", record_line("a", "ab <N-W>Maria <S-W>donsella"));
    const auto hyps = ws.write("h.jsonl", record_line("a", "ab <N-H>Marla <S-W>donsella"));

    const auto ner = run({"evaluate", "ner", "--refs", refs, "--hyps", hyps, "--vocab", vocab});
    REQUIRE(ner.code == 0);
    const auto nj = nlohmann::json::parse(ner.out);
    CHECK(nj["overall"]["matched"] == 1);
    CHECK(nj["per_label"]["S-W"]["f1"] == 100.0);

    const auto axis = run({"evaluate", "ner", "--refs", refs, "--hyps", hyps, "--vocab", vocab, "--axis", "category"});
    CHECK(nlohmann::json::parse(axis.out)["overall"]["matched"] == 2);

    const auto iehhr = run({"evaluate", "iehhr", "--refs", refs, "--hyps", hyps, "--vocab", vocab, "--details"});
    REQUIRE(iehhr.code == 0);
    const auto ij = nlohmann::json::parse(iehhr.out);
    CHECK(ij["basic"] == 90.0);
    CHECK(ij["complete"] == 50.0);
    CHECK(ij["per_word"].size() == 2);

    const auto table = run({"evaluate", "iehhr", "--refs", refs, "--hyps", hyps, "--vocab", vocab, "--format", "table"});
    CHECK(table.code == 0);
    CHECK(table.out.find("Basic") != std::string::npos);
  }

  TEST_CASE("iehhr needs a composite vocabulary") {
    Workspace ws;
    const auto refs = ws.write("r.jsonl", record_line("a", "<N-W>Maria"));
    CHECK(run({"evaluate", "iehhr", "--refs", refs, "--hyps", refs}).code == 2);
  }

  TEST_CASE("stats") {
    Workspace ws;
    const auto in = ws.write("c.jsonl",
                             R"({"id":"p","split":"train","level":"page","text":""})"
                             "\n"
                             R"({"id":"l","split":"train","level":"line","text":"dit <N-W>Maria","parent_id":"p"})"
                             "\n");
    const auto r = run({"stats", "--input", in});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["train"]["pages"] == 1);
    CHECK(j["train"]["lines"] == 1);
    CHECK(j["train"]["words"] == 2);
    CHECK(j["train"]["entities"] == 1);
    CHECK(j["train"]["per_label"]["N-W"] == 1);

    const auto table = run({"stats", "--input", in, "--format", "table"});
    CHECK(table.code == 0);
    CHECK(table.out.find("Pages") != std::string::npos);
  }

  TEST_CASE("import columnar") {
    Workspace ws;
    const auto in = ws.write("t.csv", "surname;first_name\nDurand;Marie\n;Jean\n");
    const auto r = run({"import", "columnar", "--input", in, "--columns", "surname,first_name", "--delimiter",
                        "semicolon", "--header", "--split", "train", "--id-prefix", "popp-"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string first;
    std::getline(lines, first);
    CHECK(first == R"({"id":"popp-1","split":"train","level":"line","text":"<surname>Durand <first_name>Marie"})");

    const auto bad = ws.write("bad.tsv", "a\tb\tc\n");
    const auto mismatch = run({"import", "columnar", "--input", bad, "--columns", "x,y"});
    CHECK(mismatch.code == 2);
    CHECK(mismatch.err.find("ColumnCountMismatch") != std::string::npos);
  }

  TEST_CASE("usage errors") {
    CHECK(run({"evaluate", "htr", "--refs", "/nonexistent/r.jsonl", "--hyps", "/nonexistent/h.jsonl"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"transform", "--bogus"}).code == 2);
    CHECK(run({"--help"}).code == 0);
  }

  TEST_CASE("malformed input exits 2 with the line number") {
    Workspace ws;
    const auto refs = ws.write("r.jsonl", record_line("a", "x") + "{not json}\n");
    const auto r = run({"evaluate", "htr", "--refs", refs, "--hyps", refs});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 2") != std::string::npos);
  }

  TEST_CASE("reports are byte-identical across runs and job counts") {
    Workspace ws;
    Rng rng(12);
    const auto vocab_path = ws.write("v.json", kEsposallesVocab);
    const auto vocab = esposalles_vocab();
    std::string refs;
    std::string hyps;
    for (int i = 0; i < 40; ++i) {
      const auto ref = random_transcript(rng, vocab);
      refs += record_line("d" + std::to_string(i), serialize(ref));
      hyps += record_line("d" + std::to_string(i), serialize(noisy_copy(rng, ref, vocab)));
    }
    const auto r = ws.write("r.jsonl", refs);
    const auto h = ws.write("h.jsonl", hyps);
    for (const char* metric : {"htr", "ner", "iehhr"}) {
      const auto one = run({"evaluate", metric, "--refs", r, "--hyps", h, "--vocab", vocab_path, "--jobs", "1"});
      const auto many = run({"evaluate", metric, "--refs", r, "--hyps", h, "--vocab", vocab_path, "--jobs", "4"});
      const auto again = run({"evaluate", metric, "--refs", r, "--hyps", h, "--vocab", vocab_path, "--jobs", "1"});
      CHECK(one.code == 0);
      CHECK(one.out == many.out);
      CHECK(one.out == again.out);
    }
  }

  TEST_CASE("report files") {
    Workspace ws;
    const auto refs = ws.write("r.jsonl", record_line("a", "dit"));
    const auto out = ws.path("report.json");
    CHECK(run({"evaluate", "htr", "--refs", refs, "--hyps", refs, "--output", out}).code == 0);
    std::ifstream file(out);
    const auto j = nlohmann::json::parse(file);
    CHECK(j["cer"] == 0.0);
  }
}
