#include "tractor/cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

using namespace tractor;
using namespace tractor::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "tractor");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("tractor_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

const char* kFlat = R"({"algebra": {"family": "A", "rank": 2}, "sigma": [1], "seed": 3, "samples": 10})";
const char* kTwisted = R"({
  "algebra": {"family": "A", "rank": 3},
  "sigma": [1, 2, 3],
  "h_form": "x1*dx2^dx3^dx4",
  "seed": 7,
  "samples": 4,
  "max_poly_degree": 1
})";

}  // namespace

TEST(SigmaList, Parses) {
  EXPECT_EQ(parse_sigma_list("1,3"), (SigmaSet{1, 3}));
  EXPECT_EQ(parse_sigma_list(" 2 "), (SigmaSet{2}));
  EXPECT_THROW(parse_sigma_list(""), UsageError);
  EXPECT_THROW(parse_sigma_list("1,,2"), UsageError);
  EXPECT_THROW(parse_sigma_list("a"), UsageError);
}

TEST(Grade, SingleSigma) {
  RunConfig cfg;
  cfg.family = Family::A;
  cfg.rank = 2;
  cfg.sigma = SigmaSet{1};
  const auto r = cmd_grade(cfg);
  EXPECT_EQ(r.exit_code, kExitPass);
  EXPECT_EQ(r.document["schema_version"], kSchemaVersion);
  ASSERT_EQ(r.document["gradings"].size(), 1u);
  const auto& row = r.document["gradings"][0];
  EXPECT_EQ(row["k"], 1);
  EXPECT_EQ(row["dims"], Json::parse("[2, 4, 2]"));
  EXPECT_EQ(row["grading_element"]["matrix_diagonal"], Json::parse(R"(["2/3", "-1/3", "-1/3"])"));
  EXPECT_TRUE(row["passed"].get<bool>());
}

TEST(Grade, AllSubsetsAndUsageErrors) {
  RunConfig cfg;
  cfg.family = Family::A;
  cfg.rank = 2;
  EXPECT_EQ(cmd_grade(cfg).document["gradings"].size(), 3u);
  const auto bad = invoke({"grade", "--family", "A", "--rank", "2", "--sigma", "5"});
  EXPECT_EQ(bad.code, kExitUsage);
  EXPECT_FALSE(bad.err.empty());
  EXPECT_EQ(invoke({"grade", "--family", "Q", "--rank", "2"}).code, kExitUsage);
  EXPECT_EQ(invoke({"grade", "--family", "B", "--rank", "1"}).code, kExitUsage);
  EXPECT_EQ(invoke({"grade", "--rank", "2"}).code, kExitUsage);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
}

TEST(Classify, CountsAndRefusal) {
  const auto a1 = invoke({"classify", "--family", "A", "--rank", "1"});
  ASSERT_EQ(a1.code, kExitPass) << a1.err;
  const Json doc = Json::parse(a1.out);
  EXPECT_EQ(doc["coisotropic"], 3);
  EXPECT_EQ(doc["closed"], 4);
  EXPECT_TRUE(doc["counterexamples"].empty());

  RunConfig cfg;
  cfg.command = Command::classify;
  cfg.family = Family::A;
  cfg.rank = 2;
  EXPECT_TRUE(cmd_classify(cfg).document["counterexamples"].empty());

  const auto d4 = invoke({"classify", "--family", "D", "--rank", "4"});
  EXPECT_EQ(d4.code, kExitUsage);
  EXPECT_NE(d4.err.find("24"), std::string::npos);
  EXPECT_NE(d4.err.find("12"), std::string::npos);
}

TEST(ContextConfig, ParsesFields) {
  const auto cfg = parse_context_config(
      R"({"algebra": {"family": "A", "rank": 3}, "sigma": [1,2,3], "connection": [{"value_index": 0, "form": "x1*dx2"}],
          "h_form": "x1*dx2^dx3^dx4", "seed": 7, "samples": 50, "max_poly_degree": 2})");
  EXPECT_EQ(cfg.family, Family::A);
  EXPECT_EQ(cfg.rank, 3);
  EXPECT_EQ(cfg.sigma, (SigmaSet{1, 2, 3}));
  ASSERT_EQ(cfg.connection.size(), 1u);
  EXPECT_EQ(cfg.connection[0].form, "x1*dx2");
  EXPECT_EQ(cfg.seed, 7u);
  const auto ctx = build_context(cfg);
  EXPECT_EQ(ctx.n, 6);
  EXPECT_EQ(to_string(ctx.connection[0]), "x1*dx2");
}

TEST(ContextConfig, ErrorsNameTheField) {
  const auto path_of = [](const std::string& text) -> std::string {
    try {
      build_context(parse_context_config(text));
    } catch (const ConfigError& e) {
      return e.path();
    }
    return "";
  };
  EXPECT_EQ(path_of(R"({"sigma": [1]})"), "algebra");
  EXPECT_EQ(path_of(R"({"algebra": {"family": "A", "rank": "2"}, "sigma": [1]})"), "algebra.rank");
  EXPECT_EQ(path_of(R"({"algebra": {"family": "A", "rank": 2}, "sigma": [1, "x"]})"), "sigma[1]");
  EXPECT_EQ(path_of(R"({"algebra": {"family": "A", "rank": 2}, "sigma": [1],
                        "connection": [{"value_index": 9, "form": "dx1"}]})"),
            "connection[0].value_index");
  EXPECT_EQ(path_of(R"({"algebra": {"family": "A", "rank": 2}, "sigma": [1],
                        "connection": [{"value_index": 0, "form": "dx1^dx2"}]})"),
            "connection[0].form");
  EXPECT_EQ(path_of(R"({"algebra": {"family": "A", "rank": 2}, "sigma": [1], "h_form": "x1**"})"), "h_form");
  EXPECT_EQ(path_of(R"({"algebra": {"family": "A", "rank": 2}, "sigma": [1], "samples": 0})"), "samples");
}

TEST(ContextConfig, JsonSyntaxErrorHasPosition) {
  try {
    parse_context_config("{\n  \"algebra\": ,\n}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 1u);
  }
}

TEST(Verify, FlatConfigPasses) {
  const auto path = write_temp("flat.json", kFlat);
  const auto r = invoke({"verify", "--config", path});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_TRUE(doc["passed"].get<bool>());
  EXPECT_EQ(doc["jacobi"]["status"], "holds");
  EXPECT_TRUE(doc["jacobi"]["jacobiator_vanishes"].get<bool>());
  EXPECT_EQ(doc["seed"], 3);
  EXPECT_EQ(doc["suites"].size(), 3u);
  EXPECT_FALSE(doc.contains("timings_ms"));
}

TEST(Verify, TwistedConfigIsFlagged) {
  const auto path = write_temp("twisted.json", kTwisted);
  const auto r = invoke({"verify", "--config", path});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc["jacobi"]["status"], "twisted");
  EXPECT_EQ(doc["jacobi"]["h4"], "dx1^dx2^dx3^dx4");
  EXPECT_FALSE(doc["jacobi"]["jacobiator_vanishes"].get<bool>());
  EXPECT_TRUE(doc["suites"][0]["passed"].get<bool>());
  const auto text = invoke({"verify", "--config", path, "--format", "text"});
  EXPECT_NE(text.out.find("twisted"), std::string::npos);
}

TEST(Verify, MalformedLiteralIsUsageError) {
  const auto path = write_temp("bad.json", R"({"algebra": {"family": "A", "rank": 2}, "sigma": [1], "h_form": "x1**"})");
  const auto r = invoke({"verify", "--config", path});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_NE(r.err.find("h_form"), std::string::npos);
  EXPECT_NE(r.err.find("1:4"), std::string::npos);
  EXPECT_EQ(invoke({"verify", "--config", "/nonexistent/config.json"}).code, kExitUsage);
  EXPECT_EQ(invoke({"verify"}).code, kExitUsage);
}

TEST(Verify, SeedOverrideAndDeterminism) {
  const auto path = write_temp("flat2.json", kFlat);
  const auto a = invoke({"verify", "--config", path, "--seed", "11", "--samples", "5"});
  const auto b = invoke({"verify", "--config", path, "--seed", "11", "--samples", "5"});
  ASSERT_EQ(a.code, kExitPass) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(Json::parse(a.out)["seed"], 11);
  EXPECT_EQ(Json::parse(a.out)["samples"], 5);
  EXPECT_EQ(invoke({"grade", "--family", "C", "--rank", "3"}).out, invoke({"grade", "--family", "C", "--rank", "3"}).out);
  EXPECT_EQ(invoke({"verify", "--config", path, "--samples", "0"}).code, kExitUsage);
}

TEST(Output, TimingsOnlyOnRequest) {
  const auto r = invoke({"grade", "--family", "A", "--rank", "1", "--timings"});
  ASSERT_EQ(r.code, kExitPass);
  EXPECT_TRUE(Json::parse(r.out).contains("timings_ms"));
  const auto text = invoke({"grade", "--family", "A", "--rank", "2", "--sigma", "1,2", "--format", "text"});
  EXPECT_NE(text.out.find("dims 1 2 2 2 1"), std::string::npos);
}

TEST(Binary, ExitCodes) {
  const char* bin = std::getenv("TRACTOR_BIN");
  if (!bin) GTEST_SKIP() << "TRACTOR_BIN not set";
  const std::string b = bin;
  EXPECT_EQ(std::system((b + " grade --family A --rank 2 --sigma 1 > /dev/null").c_str()), 0);
  EXPECT_EQ(WEXITSTATUS(std::system((b + " grade --family A --rank 2 --sigma 5 > /dev/null 2>&1").c_str())), kExitUsage);
}
