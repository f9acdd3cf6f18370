#include <gtest/gtest.h>

#include <filesystem>

#include "cli_fixture.hpp"

namespace {

using qad::oracle::CliFixture;
using qad::oracle::CliRun;

const CliFixture& fixture() {
  static const CliFixture f(std::filesystem::temp_directory_path() / "qad_cli_test");
  return f;
}

std::vector<std::string> with_threads(std::vector<std::string> args, int threads) {
  args.insert(args.begin(), {"--threads", std::to_string(threads)});
  return args;
}

TEST(Cli, EverySubcommandSucceeds) {
  for (const auto& [name, args] : fixture().commands()) {
    const auto r = fixture().run(args, "ok");
    EXPECT_EQ(r.code, 0) << name << "\n" << r.err;
    EXPECT_FALSE(r.out.empty() && r.files.empty()) << name;
  }
}

TEST(Cli, OutputsIndependentOfThreadsAndReruns) {
  for (const auto& [name, args] : fixture().commands()) {
    const auto a = fixture().run(with_threads(args, 1), "a");
    const auto b = fixture().run(with_threads(args, 1), "b");
    const auto c = fixture().run(with_threads(args, 8), "c");
    EXPECT_EQ(a, b) << name;
    EXPECT_EQ(a, c) << name;
  }
}

TEST(Cli, EverySubcommandHasHelp) {
  for (const auto& [name, args] : fixture().commands()) {
    const auto r = fixture().run({args[0], args[1], "--help"}, "help");
    EXPECT_EQ(r.code, 0) << name;
    EXPECT_NE(r.out.find("--help"), std::string::npos) << name;
  }
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(fixture().run({}, "u").code, 1);
  const auto unknown = fixture().run({"bogus"}, "u");
  EXPECT_EQ(unknown.code, 1);
  EXPECT_NE(unknown.err.find("Usage"), std::string::npos);
  EXPECT_EQ(fixture().run({"metrics", "score", "--bogus"}, "u").code, 1);
  EXPECT_EQ(fixture().run({"metrics", "score", "--hyp", "x"}, "u").code, 1);
  EXPECT_EQ(fixture().run({"factors", "tag", "--tokens", fixture().in("tokens.txt")}, "u").code, 1);
  EXPECT_EQ(fixture().run({"mbr", "decode", "--nbest", fixture().in("ens.nbest"), "--utility",
                           "external-matrix"}, "u").code,
            1);
}

TEST(Cli, DataErrorsExitTwoAndNameTheFile) {
  const auto missing = fixture().run({"metrics", "score", "--hyp", "/nonexistent/h", "--ref", "r"}, "d");
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("/nonexistent/h"), std::string::npos);

  const auto bad_nbest = fixture().run(
      {"rerank", "apply", "--nbest", fixture().in("sys.hyp"), "--weights", fixture().in("w.tsv")}, "d");
  EXPECT_EQ(bad_nbest.code, 2);
  EXPECT_NE(bad_nbest.err.find("sys.hyp"), std::string::npos);
  EXPECT_NE(bad_nbest.err.find("line 1"), std::string::npos);

  const auto seps = fixture().run(
      {"docdata", "split", "--hyp", fixture().in("doc.hyp"), "--chunks", fixture().in("docs.txt")}, "d");
  EXPECT_EQ(seps.code, 2);
  EXPECT_NE(seps.err.find("doc.hyp:1"), std::string::npos);
}

TEST(Cli, MetricsScoreOnIdenticalFiles) {
  const auto r = fixture().run(
      {"metrics", "score", "--metric", "chrf", "--hyp", fixture().in("sys.ref"), "--ref", fixture().in("sys.ref")},
      "s");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "100.00\tnrefs:1|case:mixed|eff:yes|nc:6|nw:0|space:no|version:2.0.0\n") << r.out;
}

TEST(Cli, PipelineEmitsOneLinePerSegment) {
  const auto r = fixture().run(fixture().commands()[8].second, "p");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 6);
}

TEST(Cli, FactorsCountListsAllCategories) {
  const auto r = fixture().run(fixture().commands()[11].second, "f");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "PER\t1\nLOC\t2\nORG\t0\nMISC\t0\nPRO\t0\nEVT\t0\n");
}

TEST(Cli, DocdataSplitRecoversSentences) {
  const auto r = fixture().run(fixture().commands()[13].second, "ds");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "a b\nc d\ne\nf g\nh\ni\n");
}

TEST(Cli, FilterReportCounts) {
  const auto r = fixture().run(fixture().commands()[14].second, "fr");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
  EXPECT_NE(r.err.find("input=6"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("duplicate=1"), std::string::npos) << r.err;
}

}  // namespace
