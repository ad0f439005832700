#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "ddca/ddca.hpp"

namespace fs = std::filesystem;
using namespace ddca;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("ddca_cli_test_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = std::string(DDCA_CLI_PATH) + " " + args + " >" + (dir_ / "stdout.txt").string() +
                            " 2>" + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string out() const { return read_text_file(dir_ / "stdout.txt"); }
  std::string err() const { return read_text_file(dir_ / "stderr.txt"); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void gen_small(const std::string& name) {
    write_text_file(path("small.json"), R"({
      "duration": 38, "signal_period": 1, "noise": 3, "scan_window": [12, 24],
      "baseline": {"danger": 4.4, "safe": 30}, "scan": {"danger": 38, "safe": 4},
      "processes": [
        {"label": "nmap", "rate": 15, "active": [12, 24], "role": "anomalous"},
        {"label": "bash", "rate": 15, "active": [0, 38], "role": "normal"}
      ]})");
    ASSERT_EQ(run("gen --seed 1 --spec " + path("small.json") + " -o " + path(name)), 0) << err();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, GenIsDeterministic) {
  ASSERT_EQ(run("gen --seed 1 -o " + path("a.csv")), 0) << err();
  ASSERT_EQ(run("gen --seed 1 --spec portscan-default -o " + path("b.csv")), 0) << err();
  EXPECT_EQ(read_text_file(path("a.csv")), read_text_file(path("b.csv")));
  EXPECT_EQ(read_text_file(path("a.csv")), write_stream(generate_scenario(portscan_default(1))));
}

TEST_F(CliTest, GenToStdout) {
  gen_small("s.csv");
  ASSERT_EQ(run("gen --seed 1 --spec " + path("small.json") + " -o -"), 0);
  EXPECT_EQ(out(), read_text_file(path("s.csv")));
}

TEST_F(CliTest, RunWritesResultsAndStats) {
  gen_small("s.csv");
  ASSERT_EQ(run("run -i " + path("s.csv") + " -o " + path("out")), 0) << err();
  const std::string results = read_text_file(path("out/results.csv"));
  EXPECT_EQ(results.substr(0, results.find('\n')), kResultsHeader);
  EXPECT_NE(results.find("\nnmap,"), std::string::npos);

  const std::string stats = read_text_file(path("out/run_stats.csv"));
  EXPECT_EQ(stats.substr(0, stats.find('\n')), kRunStatsHeader);

  // T_K recomputed from the stream file and the reported mean iterations.
  const auto stream = read_stream_file(path("s.csv")).stream;
  const RunLog log = run_stream({}, stream.events);
  const double i_bar = *cell_statistics(log, {}).mean_iterations;
  const std::string expected_tk = format_decimal(t_k_threshold(stream.signals(), i_bar).t_k);
  EXPECT_NE(stats.find("," + expected_tk + ","), std::string::npos) << stats;
}

TEST_F(CliTest, RunTwiceIsByteIdentical) {
  gen_small("s.csv");
  ASSERT_EQ(run("run -i " + path("s.csv") + " -o " + path("one")), 0);
  ASSERT_EQ(run("run -i " + path("s.csv") + " -o " + path("two/")), 0);
  EXPECT_EQ(read_text_file(path("one/results.csv")), read_text_file(path("two/results.csv")));
}

TEST_F(CliTest, SweepCellsWritesOneRowPerCount) {
  gen_small("s.csv");
  ASSERT_EQ(run("sweep-cells -i " + path("s.csv") + " --counts 1,10,100"), 0) << err();
  const std::string summary = out();
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 4);

  ASSERT_EQ(run("sweep-cells -i " + path("s.csv") + " --counts 5,50 -o " + path("sw")), 0) << err();
  EXPECT_TRUE(fs::exists(path("sw/results_n5.csv")));
  EXPECT_TRUE(fs::exists(path("sw/run_stats_n50.csv")));
  EXPECT_TRUE(fs::exists(path("sw/summary.csv")));
}

TEST_F(CliTest, SweepShiftDefaults) {
  gen_small("s.csv");
  ASSERT_EQ(run("sweep-shift -i " + path("s.csv") + " -o " + path("sh")), 0) << err();
  const std::string summary = read_text_file(path("sh/summary.csv"));
  EXPECT_EQ(std::count(summary.begin(), summary.end(), '\n'), 22);
  EXPECT_TRUE(fs::exists(path("sh/results_offset-20.csv")));
  EXPECT_EQ(read_text_file(path("sh/results_offset0.csv")),
            [&] {
              EXPECT_EQ(run("run -i " + path("s.csv") + " -o " + path("plain")), 0);
              return read_text_file(path("plain/results.csv"));
            }());
}

TEST_F(CliTest, OracleCheck) {
  ASSERT_EQ(run("oracle-check --seed 2 --cases 100"), 0) << err();
  EXPECT_NE(out().find("100 cases, 0 mismatches"), std::string::npos);
  gen_small("s.csv");
  EXPECT_EQ(run("oracle-check -i " + path("s.csv") + " --cells 7"), 0) << err();
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("run -i x.csv"), 1);
  EXPECT_EQ(run("gen --spec no-such-scenario -o " + path("x.csv")), 1);
  gen_small("s.csv");
  EXPECT_EQ(run("run -i " + path("s.csv") + " --cells 0 -o " + path("o")), 1);
  EXPECT_EQ(run("run -i " + path("s.csv") + " --mode median -o " + path("o")), 1);
  EXPECT_EQ(run("run -i " + path("missing.csv") + " -o " + path("o")), 2);

  write_text_file(path("bad.csv"), "time,kind,antigen_type,danger,safe\n1,antigen,a,,\n0,antigen,a,,\n");
  EXPECT_EQ(run("run -i " + path("bad.csv") + " -o " + path("o")), 2);
  EXPECT_NE(err().find("line 3"), std::string::npos) << err();
  EXPECT_EQ(run("--help"), 0);
}

TEST_F(CliTest, FailedRunLeavesNoPartialOutput) {
  write_text_file(path("bad.csv"), "time,kind,antigen_type,danger,safe\n1,signal,,abc,1\n");
  EXPECT_EQ(run("run -i " + path("bad.csv") + " -o " + path("out")), 2);
  EXPECT_FALSE(fs::exists(path("out")));
  for (const auto& entry : fs::directory_iterator(dir_)) {
    EXPECT_EQ(entry.path().filename().string().find(".out.staging"), std::string::npos);
  }
}

TEST_F(CliTest, ClampWarningsGoToStderr) {
  write_text_file(path("hot.csv"), "time,kind,antigen_type,danger,safe\n0.5,antigen,a,,\n1,signal,,75,-3\n");
  EXPECT_EQ(run("run -i " + path("hot.csv") + " -o " + path("out")), 0);
  EXPECT_NE(err().find("2 signal value(s) clamped"), std::string::npos) << err();
}
