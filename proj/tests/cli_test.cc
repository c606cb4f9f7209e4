#include "rexinfer/cli.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rexinfer/coverage.h"
#include "rexinfer/datagen.h"
#include "rexinfer/glushkov.h"
#include "rexinfer/io.h"

namespace rexinfer {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("rexinfer_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& content) {
    std::string p = (dir_ / name).string();
    std::ofstream(p) << content;
    return p;
  }
  std::string path(const std::string& name) { return (dir_ / name).string(); }

  fs::path dir_;
};

Sample read_text(const std::string& text) {
  std::istringstream in(text);
  return read_sample(in);
}

TEST_F(CliTest, GenerateExprSize) {
  auto r = cli({"generate", "--expr", "a", "--size", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "a\na\na\n");
}

TEST_F(CliTest, GenerateFamilySampleOf500) {
  auto r = cli({"generate", "--family", "r1", "--n", "8", "--size", "500", "--seed", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  Sample s = read_text(r.out);
  EXPECT_EQ(s.size(), 500u);
  for (const auto& [w, m] : s.words()) EXPECT_TRUE(accepts(hard_family(8, HardFamily::kR1), w));
}

TEST_F(CliTest, GenerateCoveringAndCoverageTarget) {
  Regex r1 = hard_family(8, HardFamily::kR1);
  auto c = cli({"generate", "--family", "r1", "--n", "8", "--size", "50", "--covering"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(coverage(r1, read_text(c.out)), 1.0);
  auto p = cli({"generate", "--family", "r1", "--n", "8", "--size", "500", "--coverage", "0.7", "--seed", "9"});
  ASSERT_EQ(p.code, 0) << p.err;
  double cov = coverage(r1, read_text(p.out));
  EXPECT_GE(cov, 0.65);
  EXPECT_LE(cov, 0.75);
}

TEST_F(CliTest, GenerateIsReproducible) {
  auto a = cli({"generate", "--expr", "(a b | c)+ d?", "--size", "40", "--seed", "12"});
  auto b = cli({"generate", "--expr", "(a b | c)+ d?", "--size", "40", "--seed", "12"});
  EXPECT_EQ(a.out, b.out);
  auto corpus = cli({"generate", "--corpus", "5", "--alphabet-size", "4", "--k", "2", "--seed", "3"});
  ASSERT_EQ(corpus.code, 0);
  std::istringstream lines(corpus.out);
  int n = 0;
  for (std::string l; std::getline(lines, l); ++n) EXPECT_TRUE(is_deterministic(parse(l))) << l;
  EXPECT_EQ(n, 5);
}

TEST_F(CliTest, GenerateFlagErrors) {
  EXPECT_EQ(cli({"generate"}).code, 2);
  EXPECT_EQ(cli({"generate", "--expr", "a", "--family", "r1", "--n", "3"}).code, 2);
  EXPECT_EQ(cli({"generate", "--expr", "a (", "--size", "1"}).code, 2);
  EXPECT_EQ(cli({"generate", "--family", "r3"}).code, 2);
  EXPECT_EQ(cli({"generate", "--family", "r1", "--n", "2"}).code, 2);
  EXPECT_EQ(cli({"bogus"}).code, 2);
}

TEST_F(CliTest, InferPrintsExpressionAndReport) {
  std::string sample = file("s.txt", "# from a a? b+\na b\na a b\na b b\na b b b\n");
  std::string report = path("r.json");
  std::string automaton = path("g.json");
  auto r = cli({"infer", sample, "--kmax", "2", "--restarts", "3", "--json-report", report, "--dump-automaton",
                automaton, "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  Regex got = parse(r.out.substr(0, r.out.find('\n')));
  for (const char* w : {"ab", "aab", "abb", "abbb"}) {
    Word word;
    for (const char* c = w; *c; ++c) word.push_back(std::string(1, *c));
    EXPECT_TRUE(accepts(got, word));
  }
  std::ifstream in(report);
  auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["expression"], render(got));
  EXPECT_EQ(j["sample"]["size"], 4);
  EXPECT_EQ(j["inference"]["per_k"].size(), 2u);
  EXPECT_EQ(j["inference"]["per_k"][0]["restarts"].size(), 3u);
  EXPECT_TRUE(j["coverage"]["value"].is_number());
  EXPECT_TRUE(j["wall_time_s"].is_number());
  std::ifstream gin(automaton);
  Koa g = koa_from_json(nlohmann::json::parse(gin));
  EXPECT_TRUE(g.is_deterministic());

  auto again = cli({"infer", sample, "--kmax", "2", "--restarts", "3", "--seed", "7"});
  EXPECT_EQ(again.out, r.out);
}

TEST_F(CliTest, InferKmaxOneAndOracle) {
  std::string sample = file("s.txt", "a\na a\na a a\n");
  auto k1 = cli({"infer", sample, "--kmax", "1", "--restarts", "2"});
  ASSERT_EQ(k1.code, 0) << k1.err;
  EXPECT_EQ(stats(parse(k1.out.substr(0, k1.out.find('\n')))).k, 1u);
  auto o = cli({"infer", sample, "--oracle", "--oracle-budget", "6"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out, "a+\n");
}

TEST_F(CliTest, InferDtdLine) {
  std::string sample = file("s.txt", "id price\nid price\nid qty supplier\n");
  auto r = cli({"infer", sample, "--kmax", "1", "--restarts", "1", "--dtd", "item"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("<!ELEMENT item ("), std::string::npos);
}

TEST_F(CliTest, InferInputErrors) {
  auto missing = cli({"infer", path("nope.txt")});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("cannot open"), std::string::npos);
  auto empty = cli({"infer", file("e.txt", "# only a comment\n")});
  EXPECT_EQ(empty.code, 2);
  auto bad = cli({"infer", file("b.txt", "a\na  b\n")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find(":2:"), std::string::npos);
  EXPECT_EQ(cli({"infer", file("ok.txt", "a\n"), "--bw-iters", "zero"}).code, 2);
  EXPECT_EQ(cli({"infer", file("ok2.txt", "a\n"), "--measure", "bits"}).code, 2);
}

TEST_F(CliTest, EvaluateTables) {
  std::string corpus = file("c.txt", "a b? c\n(a | b)+\n");
  std::string report = path("e.json");
  auto r = cli({"evaluate", corpus, "--size", "60", "--covering", "--kmax", "1", "--restarts", "1", "--json-report",
                report});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("by kappa"), std::string::npos);
  EXPECT_NE(r.out.find("[1.0,1.2)"), std::string::npos);
  EXPECT_NE(r.out.find("overall 2/2"), std::string::npos);
  std::ifstream in(report);
  auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["entries"].size(), 2u);
  auto empty = cli({"evaluate", file("none.txt", ""), "--kmax", "1"});
  EXPECT_EQ(empty.code, 0);
  EXPECT_NE(empty.out.find("overall 0/0"), std::string::npos);
  EXPECT_EQ(cli({"evaluate", file("nd.txt", "a? a\n")}).code, 2);
}

TEST_F(CliTest, XmlExtract) {
  std::string doc = file("d.xml", "<store><item><id/><price/></item><item><id/><qty/><supplier/></item></store>");
  auto r = cli({"xml-extract", doc, "--element", "item"});
  ASSERT_EQ(r.code, 0) << r.err;
  Sample s = read_text(r.out);
  EXPECT_EQ(s.size(), 2u);
  auto leaf = cli({"xml-extract", doc, "--element", "id"});
  EXPECT_EQ(leaf.out, "\n\n");
  auto dtd = cli({"xml-extract", doc, "--dtd", "--kmax", "1", "--restarts", "1"});
  ASSERT_EQ(dtd.code, 0) << dtd.err;
  EXPECT_NE(dtd.out.find("<!ELEMENT id EMPTY>"), std::string::npos);
  EXPECT_NE(dtd.out.find("<!ELEMENT store (item+)>"), std::string::npos);
  auto dir = cli({"xml-extract", doc, "--output-dir", path("out")});
  ASSERT_EQ(dir.code, 0);
  EXPECT_EQ(read_sample_file(path("out/item.txt")).size(), 2u);
  auto bad = cli({"xml-extract", file("bad.xml", "<a>\n<b></a>")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("bad.xml:2:4"), std::string::npos);
  auto mixed = cli({"xml-extract", file("m.xml", "<p>x<b/></p>")});
  EXPECT_EQ(mixed.code, 0);
  EXPECT_NE(mixed.err.find("warning"), std::string::npos);
}

TEST_F(CliTest, TranslateBothWays) {
  auto g = cli({"translate", "--expr", "a a? b+"});
  ASSERT_EQ(g.code, 0);
  std::string koa = file("g.json", g.out);
  auto back = cli({"translate", "--automaton", koa});
  ASSERT_EQ(back.code, 0) << back.err;
  EXPECT_EQ(back.out, "a a? b+\n");
  EXPECT_EQ(cli({"translate"}).code, 2);
  EXPECT_EQ(cli({"translate", "--automaton", file("x.json", "{")}).code, 2);
}

}  // namespace
}  // namespace rexinfer
