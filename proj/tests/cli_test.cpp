#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "memento/bench.hpp"
#include "memento/cli.hpp"

namespace memento::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

int exit_status(const std::string& command) {
  const int status = std::system((command + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class CliState : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("memento_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
    file_ = (dir_ / "state.json").string();
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  Result state(std::vector<std::string> args) {
    args.insert(args.begin(), "state");
    args.push_back("--file");
    args.push_back(file_);
    return run_cli(args);
  }

  std::filesystem::path dir_;
  std::string file_;
};

TEST_F(CliState, WorkedSequence) {
  EXPECT_EQ(state({"init", "10"}).code, kExitOk);
  for (const char* b : {"9", "5", "1"}) ASSERT_EQ(state({"remove", b}).code, kExitOk);
  const auto show = state({"show"});
  EXPECT_EQ(show.code, kExitOk);
  EXPECT_EQ(show.out, "n=9 w=7 r=2 l=1\n<1 -> 7, 5>\n<5 -> 8, 9>\n");
  EXPECT_NE(show.err.find("\"action\":\"show\""), std::string::npos);

  const auto added = state({"add"});
  EXPECT_EQ(added.code, kExitOk);
  EXPECT_NE(added.out.find("added 1"), std::string::npos);
}

TEST_F(CliState, IllegalRemovalExitsOne) {
  state({"init", "4"});
  state({"remove", "2"});
  const auto again = state({"remove", "2"});
  EXPECT_EQ(again.code, kExitFailure);
  EXPECT_NE(again.err.find("bucket not working"), std::string::npos);
  EXPECT_EQ(state({"remove", "99"}).code, kExitFailure);
  EXPECT_EQ(state({"show"}).out, "n=4 w=3 r=1 l=2\n<2 -> 3, 4>\n");
}

TEST_F(CliState, MissingOrCorruptFileIsAUsageError) {
  EXPECT_EQ(state({"show"}).code, kExitUsage);
  std::ofstream(file_) << "{\"version\":9}";
  EXPECT_EQ(state({"show"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"trace", "--file", file_, "--key", "x"}).code, kExitUsage);
}

TEST_F(CliState, TraceNarratesLookup) {
  state({"init", "6"});
  for (const char* b : {"0", "3", "5"}) state({"remove", b});
  const auto r = run_cli({"trace", "--file", file_, "--key", "hello"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.rfind("jump(key, 6) -> ", 0), 0u);
  EXPECT_NE(r.out.find("result: "), std::string::npos);
  EXPECT_NE(r.out.find("tau="), std::string::npos);
  EXPECT_NE(r.err.find("16fe05a1c75bcd0f"), std::string::npos);

  const auto hex = run_cli({"trace", "--file", file_, "--key-hex", "0x16fe05a1c75bcd0f"});
  EXPECT_EQ(hex.code, kExitOk);
  EXPECT_EQ(hex.out, r.out);

  EXPECT_EQ(run_cli({"trace", "--file", file_}).code, kExitUsage);
  EXPECT_EQ(run_cli({"trace", "--file", file_, "--key-hex", "xyz"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"trace", "--file", file_, "--key", "a", "--key-hex", "1"}).code,
            kExitUsage);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, kExitUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"bench"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"bench", "--scenario", "nope"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"bench", "--scenario", "stable", "--size", "ten"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"bench", "--scenario", "stable", "--algos", "ring"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"bench", "--scenario", "oneshot", "--algos", "jump", "--order",
                     "random"}).code,
            kExitUsage);
  EXPECT_EQ(run_cli({"verify", "--suite", "nope"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, kExitOk);
}

TEST(Cli, BenchWritesCsvAndEchoesConfig) {
  const auto r = run_cli({"bench", "--scenario", "oneshot", "--algos", "memento,dx",
                          "--size", "200", "--keys", "2000", "--reps", "1", "--order",
                          "random", "--seed", "4"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto records = bench::parse_csv(r.out);
  EXPECT_EQ(records.size(), 12u);
  for (const auto& rec : records) {
    EXPECT_EQ(rec.removed_count, 180u);
    EXPECT_EQ(rec.seed, 4u);
  }
  EXPECT_NE(r.err.find("\"remove_fraction\":0.9"), std::string::npos);
  EXPECT_NE(r.err.find("\"order\":\"random\""), std::string::npos);
}

TEST(Cli, BenchToUnwritablePathFails) {
  const auto r = run_cli({"bench", "--scenario", "stable", "--size", "10", "--keys", "10",
                          "--reps", "1", "--out", "/nonexistent/dir/x.csv"});
  EXPECT_EQ(r.code, kExitFailure);
}

TEST(Cli, VerifyPrintsReports) {
  const auto r = run_cli({"verify", "--suite", "balance", "--size", "200", "--seed", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["property"], "balance");
  EXPECT_EQ(j["passed"], true);
}

TEST(Cli, BinariesReportVerificationOutcome) {
  const std::string good = MEMENTO_CLI_PATH;
  const std::string faulty = MEMENTO_CLI_FAULTY_PATH;
  EXPECT_EQ(exit_status(good + " verify --suite equivalence --size 16"), 0);
  EXPECT_EQ(exit_status(faulty + " verify --suite equivalence --size 16"), 1);
  EXPECT_EQ(exit_status(good + " verify --bogus"), 2);
}

}  // namespace
}  // namespace memento::cli
