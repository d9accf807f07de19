#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "cli.hpp"
#include "test_util.hpp"

using annote::test::data_path;
using annote::test::read_file;
namespace fs = std::filesystem;

namespace {

constexpr const char* kClassicQuery =
    R"(("auteur", ["Alain Juillet"]) ET ("mots-clés", ["désinformation", "intelligence stratégique", "décision"]))";

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("annote_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    kb_ = (dir_ / "kb.facts").string();
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), {"--kb", kb_});
    std::ostringstream out, err;
    const int status = annote::cli::run_cli(args, out, err);
    return {status, out.str(), err.str()};
  }

  std::string write(const std::string& name, const std::string& text) {
    const auto path = (dir_ / name).string();
    std::ofstream(path, std::ios::binary) << text;
    return path;
  }

  void ingest_desk() { ASSERT_EQ(run({"ingest", data_path("desk.facts")}).status, 0); }

  static std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
  }

  fs::path dir_;
  std::string kb_;
};

}  // namespace

TEST_F(CliTest, IngestSeedFacts) {
  const auto r = run({"ingest", data_path("seed_facts.facts")});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "3 objects loaded, 0 rejected\n");
  EXPECT_TRUE(fs::exists(kb_));
}

TEST_F(CliTest, IngestEmptyFile) {
  const auto r = run({"ingest", write("empty.facts", "")});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("0 objects loaded", 0), 0u);
}

TEST_F(CliTest, IngestWithMalformedLine) {
  const auto r = run({"ingest", write("bad.facts",
                                      "annotation(n1, \"a\", [\"v\"], d1).\n"
                                      "annotation(n2, \"a\" [\"v\"], d1).\n")});
  EXPECT_EQ(r.status, 2);
  EXPECT_EQ(r.out, "1 objects loaded, 1 rejected\n");
  EXPECT_NE(r.err.find("line 2:"), std::string::npos) << r.err;
  // The accepted line was still merged.
  EXPECT_EQ(run({"classify"}).out, "n1 Explicit\n1 objects: 1 explicit, 0 implicit\n");
}

TEST_F(CliTest, IngestUnreadableInput) {
  EXPECT_EQ(run({"ingest", (dir_ / "missing.facts").string()}).status, 1);
}

TEST_F(CliTest, IngestMergesAcrossInvocations) {
  ingest_desk();
  const auto again = run({"ingest", data_path("seed_facts.facts")});
  EXPECT_EQ(again.status, 2);
  EXPECT_EQ(again.out, "0 objects loaded, 3 rejected\n");
  EXPECT_EQ(read_file(kb_), read_file(data_path("desk.golden.facts")));
}

TEST_F(CliTest, QueryClassic) {
  ingest_desk();
  const auto r = run({"query", kClassicQuery});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "note_008\nnote_211\nnote_702\n");
}

TEST_F(CliTest, QueryNoMatches) {
  ingest_desk();
  const auto r = run({"query", R"(("auteur", ["nobody"]))"});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "");
}

TEST_F(CliTest, QuerySyntaxErrorShowsCaret) {
  ingest_desk();
  const auto r = run({"query", R"(("a", []))"});
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.err, "error: syntax error at offset 7: expected at least one value string\n"
                   "  (\"a\", [])\n"
                   "         ^\n");
}

TEST_F(CliTest, QueryWithoutKbFile) { EXPECT_EQ(run({"query", kClassicQuery}).status, 1); }

TEST_F(CliTest, QueryConstrainedLeafIsRejected) {
  ingest_desk();
  EXPECT_EQ(run({"query", R"((["pertinent"]))"}).status, 1);
}

TEST_F(CliTest, FindThreeTerms) {
  ingest_desk();
  const auto r = run({"find", "désinformation", "protection du patrimoine", "pertinent"});
  EXPECT_EQ(r.status, 0);
  const auto out = lines(r.out);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0],
            R"(rewrite: ("mots-clés", ["désinformation"]) ET ("mots-clés", ["protection du patrimoine"]) ET )"
            R"((("ordonner", ["pertinent"]) OU ("souligner", ["pertinent"])))");
  EXPECT_EQ(out[1], "note_211");
}

TEST_F(CliTest, FindPertinentShowsOrRewrite) {
  ingest_desk();
  const auto r = run({"find", "pertinent", "--show-paper-form"});
  EXPECT_EQ(r.status, 0);
  const auto out = lines(r.out);
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[0], R"(rewrite: ("ordonner", ["pertinent"]) OU ("souligner", ["pertinent"]))");
  EXPECT_EQ(out[1].rfind("stored form: (\"ordonner\", [(\"pauvre\", 0), ", 0), 0u) << out[1];
  EXPECT_EQ(out[2], "note_211");
  EXPECT_EQ(out[3], "note_56007");
}

TEST_F(CliTest, FindUnresolvedStrict) {
  ingest_desk();
  const auto r = run({"find", "zzz"});
  EXPECT_EQ(r.status, 3);
  EXPECT_NE(r.err.find("unresolved: zzz"), std::string::npos);
  EXPECT_EQ(r.out, "");

  const auto partial = run({"find", "désinformation", "zzz"});
  EXPECT_EQ(partial.status, 3);
  EXPECT_EQ(lines(partial.out).size(), 1u);  // rewrite line only
}

TEST_F(CliTest, FindUnresolvedLenient) {
  ingest_desk();
  const auto r = run({"--lenient", "find", "désinformation", "zzz"});
  EXPECT_EQ(r.status, 0);
  const auto out = lines(r.out);
  ASSERT_EQ(out.size(), 5u);
  EXPECT_EQ(out[1], "unresolved: zzz");
  EXPECT_EQ(out[2], "note_008");
}

TEST_F(CliTest, ClassifyFixtureAllExplicit) {
  ingest_desk();
  const auto r = run({"classify"});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(lines(r.out).back(), "7 objects: 7 explicit, 0 implicit");
}

TEST_F(CliTest, ClassifyReportsImplicit) {
  run({"ingest", write("f.facts",
                       "annotation(n1, _, [\"pertinent\"], d1).\n"
                       "annotation(n2, \"a\", [\"v\"], d1).\n")});
  const auto r = run({"classify"});
  EXPECT_EQ(r.out, "n1 Implicit\nn2 Explicit\n2 objects: 1 explicit, 1 implicit\n");
}

TEST_F(CliTest, ClassifyEmptyKb) {
  run({"ingest", write("empty.facts", "")});
  const auto r = run({"classify"});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.rfind("0 objects", 0), 0u);
}

TEST_F(CliTest, ExplicateImplicitObject) {
  ingest_desk();
  run({"ingest", write("probe.facts", "annotation(probe, _, [\"pertinent\"], doc_X).\n")});
  const auto r = run({"explicate", "probe"});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out,
            "1. probe_x1 support: note_56007\n"
            "   (\"ordonner\", [\"pertinent\"])\n"
            "2. probe_x2 support: note_211\n"
            "   (\"souligner\", [\"pertinent\"])\n");
}

TEST_F(CliTest, ExplicateExplicitObject) {
  ingest_desk();
  const auto r = run({"explicate", "note_211"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("already explicit"), std::string::npos);
}

TEST_F(CliTest, ExplicateErrors) {
  ingest_desk();
  run({"ingest", write("probe.facts", "annotation(probe, _, [\"zzz\"], doc_X).\n")});
  EXPECT_EQ(run({"explicate", "probe"}).status, 4);
  EXPECT_EQ(run({"explicate", "nope"}).status, 1);
}

TEST_F(CliTest, ExplicateCap) {
  ingest_desk();
  run({"ingest", write("probe.facts", "annotation(probe, _, [\"pertinent\"], doc_X).\n")});
  const auto r = run({"--cap", "1", "explicate", "probe"});
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(lines(r.out).size(), 2u);
  EXPECT_EQ(run({"--cap", "0", "explicate", "probe"}).status, 1);
}

TEST_F(CliTest, Chain) {
  ingest_desk();
  EXPECT_EQ(run({"chain", "note_900"}).out, "note_900\nnote_211\ndoc_F\n");
  EXPECT_EQ(run({"chain", "nope"}).status, 1);
}

TEST_F(CliTest, ExportIsCanonical) {
  ingest_desk();
  EXPECT_EQ(run({"export"}).out, read_file(data_path("desk.golden.facts")));
}

TEST_F(CliTest, Stats) {
  ingest_desk();
  const auto out = lines(run({"stats"}).out);
  EXPECT_EQ(out[0], "objects: 7");
}

TEST_F(CliTest, JsonIsOneDocumentWithSameIds) {
  ingest_desk();
  const std::vector<std::vector<std::string>> commands = {
      {"query", kClassicQuery},
      {"find", "désinformation", "protection du patrimoine", "pertinent"},
      {"find", "pertinent"},
  };
  for (const auto& command : commands) {
    auto json_args = command;
    json_args.insert(json_args.begin(), {"--format", "json"});
    const auto j = run(json_args);
    ASSERT_EQ(j.status, 0);
    const auto document = nlohmann::json::parse(j.out);
    std::set<std::string> from_json;
    for (const auto& id : document.at("results")) from_json.insert(id.get<std::string>());

    std::set<std::string> from_text;
    for (const auto& line : lines(run(command).out)) {
      if (line.rfind("note_", 0) == 0) from_text.insert(line);
    }
    EXPECT_EQ(from_json, from_text);
  }
  for (const std::vector<std::string> command :
       {std::vector<std::string>{"classify"}, {"stats"}, {"export"}, {"chain", "note_900"}, {"explicate", "note_211"},
        {"find", "zzz"}, {"ingest", data_path("seed_facts.facts")}}) {
    auto json_args = command;
    json_args.insert(json_args.begin(), {"--format", "json"});
    EXPECT_TRUE(nlohmann::json::accept(run(json_args).out)) << command[0];
  }
}

TEST_F(CliTest, UsageErrors) {
  std::ostringstream out, err;
  EXPECT_EQ(annote::cli::run_cli({"query", kClassicQuery}, out, err), 1);
  EXPECT_EQ(annote::cli::run_cli({"help"}, out, err), 0);
  EXPECT_NE(out.str().find("Subcommands"), std::string::npos);
  EXPECT_EQ(run({"frobnicate"}).status, 1);
  EXPECT_EQ(run({"--format", "xml", "stats"}).status, 1);
}
