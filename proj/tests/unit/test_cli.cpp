#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

using nlohmann::json;
using twistsel::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, ClassifyCaseV) {
  auto r = call({"classify", "-34 225"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["case"], "V");
  EXPECT_EQ(j["graph"]["shape"], "eight");
  EXPECT_EQ(j["graph"]["vertices"].size(), 8u);
}

TEST(Cli, ClassifySeveralAndCubic) {
  auto r = call({"classify", "5 5", "cubic: 0 0 -2", "roots: 9 25"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  ASSERT_EQ(j.size(), 3u);
  EXPECT_EQ(j[0]["case"], "IV");
  EXPECT_EQ(j[0]["two_vertex_case_iv"], true);
  EXPECT_EQ(j[1]["case"], "I");
  EXPECT_EQ(j[1]["graph"]["shape"], "single");
  EXPECT_EQ(j[2]["case"], "V");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(call({}).code, 1);
  EXPECT_EQ(call({"frobnicate"}).code, 1);
  auto bad = call({"classify", "2 1"});  // singular
  EXPECT_EQ(bad.code, 1);
  auto j = json::parse(bad.err);
  EXPECT_EQ(j["kind"], "usage");
  EXPECT_EQ(call({"model", "--dist", "mat", "--n", "3", "--m", "3", "--mc", "100"}).code, 1);  // seed required
  EXPECT_EQ(call({"model", "--dist", "nope"}).code, 1);
  EXPECT_EQ(call({"sweep", "--curve", "5 5", "-H", "0"}).code, 1);
}

TEST(Cli, DescendRecord) {
  auto r = call({"descend", "--curve", "0 -1", "--d", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = json::parse(r.out);
  EXPECT_TRUE(j.contains("two_selmer"));
  EXPECT_TRUE(j.contains("isogeny_descents"));
}

TEST(Cli, ModelExactAndSeededMonteCarlo) {
  auto r = call({"model", "--dist", "mat", "--n", "3", "--m", "3", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto a = call({"model", "--dist", "v", "--params", "n=3,m=4", "--mc", "2000", "--seed", "7", "--json"});
  auto b = call({"model", "--dist", "v", "--params", "n=3,m=4", "--mc", "2000", "--seed", "7", "--json"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  auto t = call({"model", "--dist", "case4", "--u", "0", "--tail", "10", "30"});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_NE(t.out.find("tail"), std::string::npos);
}

TEST(Cli, SweepWritesCsvAndReport) {
  auto dir = std::filesystem::temp_directory_path() / "twistsel_cli_test";
  std::filesystem::create_directories(dir);
  auto csv = (dir / "s.csv").string(), rep = (dir / "s.json").string();
  std::filesystem::remove(csv);
  auto r = call({"sweep", "--curve", "-34 225", "-H", "300", "--out", csv, "--report", rep});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(csv));
  auto again = call({"sweep", "--curve", "-34 225", "-H", "300", "--out", csv, "--report", rep, "--resume"});
  EXPECT_EQ(again.code, 0) << again.err;
}

TEST(Cli, VerifyQuick) {
  auto r = call({"verify", "--quick"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
}
