#include <gtest/gtest.h>

#include <algorithm>
#include <json.hpp>
#include <sstream>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = qinv::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"classify", "--spec", "3,2,1"}).code, qinv::cli::kExitOk);
  auto bad = run({"classify", "--spec", "2,1,3"});
  EXPECT_EQ(bad.code, qinv::cli::kExitUsage);
  EXPECT_NE(bad.err.find("error:"), std::string::npos);
  EXPECT_EQ(run({"frobnicate"}).code, qinv::cli::kExitUsage);
  EXPECT_EQ(run({"verify"}).code, qinv::cli::kExitUsage);
  EXPECT_EQ(run({"verify", "--spec", "2,1,0", "--checks", "nope"}).code, qinv::cli::kExitUsage);
  EXPECT_EQ(run({"index", "--spec", "2,1,0", "--cap-dim", "0"}).code, qinv::cli::kExitUsage);
  auto capped = run({"index", "--spec", "3,2,1", "--cap-dim", "5"});
  EXPECT_EQ(capped.code, qinv::cli::kExitCap);
  EXPECT_NE(capped.err.find("--cap-dim"), std::string::npos);
  EXPECT_EQ(run({"verify", "--spec", "3,2,1", "--checks", "restriction", "--cap-tensor", "1"}).code,
            qinv::cli::kExitCap);
  EXPECT_EQ(run({"emit", "--spec", "2,1,0", "--construction", "CharPoly"}).code, qinv::cli::kExitUsage);
}

TEST(Cli, JsonIsByteIdenticalAndParses) {
  const std::vector<std::string> args{"verify", "--spec", "3,2,0", "--format", "json", "--seed", "5"};
  auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["command"], "verify");
  EXPECT_EQ(j["spec"], "3,2,0");
  EXPECT_EQ(j["seed"], 5);
  EXPECT_EQ(j["all_passed"], true);
  EXPECT_TRUE(j["caps"].contains("minors"));
  EXPECT_FALSE(j["checks"].empty());
}

TEST(Cli, EmptyGridPrintsHeaderOnly) {
  auto r = run({"classify", "--grid", "1"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
  EXPECT_NE(r.out.find("polynomial"), std::string::npos);
  auto j = nlohmann::json::parse(run({"classify", "--grid", "1", "--format", "json"}).out);
  EXPECT_TRUE(j["rows"].empty());
}

TEST(Cli, GridRowsMatchCount) {
  auto j = nlohmann::json::parse(run({"classify", "--grid", "3,2,1", "--format", "json"}).out);
  // n in {2,3}, m in {1,2}, k <= min(m,1): 2 * (2 + 2) rows.
  EXPECT_EQ(j["rows"].size(), 8u);
}

TEST(Cli, VerifySmallSpec) {
  auto r = run({"verify", "--spec", "2,1,0"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("all checks passed"), std::string::npos);
  EXPECT_EQ(r.out.find("fail "), std::string::npos);
}

TEST(Cli, PredictedFailureCountsAsPass) {
  auto r = run({"verify", "--spec", "3,1,1", "--checks", "invariance"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("pass  invariance:CharPoly{3}  (predicted failure observed)"), std::string::npos);
}

TEST(Cli, EmitPolynomialCounts) {
  auto count = [](const std::string& spec, const std::string& construction, std::vector<std::string> extra = {}) {
    std::vector<std::string> args{"emit", "--spec", spec, "--construction", construction, "--format", "json"};
    args.insert(args.end(), extra.begin(), extra.end());
    auto r = run(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return nlohmann::json::parse(r.out)["candidates"];
  };
  EXPECT_EQ(count("3,2,0", "F_I").size(), 2u);
  auto mixed = count("3,2,1", "MixedGlobal");
  ASSERT_EQ(mixed.size(), 1u);
  EXPECT_EQ(mixed[0]["bidegree"], nlohmann::json({1, 5}));
  EXPECT_EQ(count("3,1,1", "CharPoly").size(), 2u);
  EXPECT_EQ(count("2,1,0", "Finder", {"--bidegree", "1,2"}).size(), 1u);
}

TEST(Cli, IndexAndSemiInvariant) {
  auto j = nlohmann::json::parse(run({"index", "--spec", "3,2,1", "--format", "json"}).out);
  EXPECT_EQ(j["index_by_rank"], 3);
  EXPECT_EQ(j["agree"], true);
  auto s = run({"semiinv", "--spec", "2,2,0"});
  EXPECT_EQ(s.code, 0);
  EXPECT_NE(s.out.find("matches yes"), std::string::npos);
}

TEST(Cli, FindBasis) {
  auto j = nlohmann::json::parse(run({"find", "--spec", "2,1,0", "--bidegree", "1,2", "--format", "json"}).out);
  EXPECT_EQ(j["dimension"], 1);
  EXPECT_EQ(run({"find", "--spec", "2,1,0", "--bidegree", "1,2", "--cap-finder", "2"}).code,
            qinv::cli::kExitCap);
}
