#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("wordeq_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const std::string& text) { std::ofstream(dir_ / name) << text; }

  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / name);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  /// Runs the CLI with stdout captured to out.txt; returns its exit code.
  int run(const std::string& args) {
    const std::string cmd = std::string("\"") + WORDEQ_CLI_PATH + "\" " + args + " > \"" + path("out.txt") + "\" 2> \"" +
                            path("err.txt") + "\"";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

constexpr const char* kFigure = "Variables {X,Y,Z}\nLetters {b}\nEquation: XbY = bXXZ\n";

}  // namespace

TEST_F(Cli, SolveSatPrintsWitness) {
  write("fig.eq", kFigure);
  EXPECT_EQ(run("solve " + path("fig.eq") + " --stats " + path("stats.json") + " --trace " + path("trace.txt")), 10);
  const std::string out = read("out.txt");
  EXPECT_EQ(out.rfind("SAT\n", 0), 0u) << out;
  const auto stats = nlohmann::json::parse(read("stats.json"));
  EXPECT_EQ(stats.at("status"), "SAT");
  EXPECT_EQ(read("trace.txt").rfind("1 R7 -> 2 branches", 0), 0u);
}

TEST_F(Cli, ExitCodesFollowStatus) {
  write("clash.eq", "Variables {}\nLetters {a,b}\nEquation: a = b\n");
  EXPECT_EQ(run("solve " + path("clash.eq")), 20);
  EXPECT_EQ(read("out.txt"), "UNSAT\n");
  write("fig.eq", kFigure);
  EXPECT_EQ(run("solve " + path("fig.eq") + " --strategy bt1 --order fixed-reversed --node-budget 2000"), 30);
  EXPECT_EQ(read("out.txt"), "UNKNOWN\n");
}

TEST_F(Cli, ErrorsExitWithOne) {
  write("bad.eq", "Equation: Q = q\n");
  EXPECT_EQ(run("solve " + path("bad.eq")), 1);
  EXPECT_FALSE(read("err.txt").empty());
  write("fig.eq", kFigure);
  EXPECT_EQ(run("solve " + path("fig.eq") + " --order gnn"), 1);
  EXPECT_NE(read("err.txt").find("requires --model"), std::string::npos);
  EXPECT_NE(run("solve " + path("fig.eq") + " --strategy bt9"), 0);
}

TEST_F(Cli, ModelGuidedSolve) {
  write("fig.eq", kFigure);
  ASSERT_EQ(run("init-model --m 8 --T 2 --seed 3 --out " + path("w.json")), 0);
  const auto w = nlohmann::json::parse(read("w.json"));
  EXPECT_EQ(w.at("m"), 8);
  EXPECT_EQ(w.at("T"), 2);
  EXPECT_EQ(run("solve " + path("fig.eq") + " --order gnn-fixed --strategy bt3 --model " + path("w.json")), 10);
}

TEST_F(Cli, GenerateCollectEncodeTree) {
  ASSERT_EQ(run("gen --benchmark 1 --count 5 --k 6 --out " + path("probs")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "probs" / "b1_0000.eq"));
  EXPECT_TRUE(fs::exists(dir_ / "probs" / "b1_0004.witness"));

  ASSERT_EQ(run("collect-data " + path("probs") + " --variant g3 --depth 6 --out " + path("train")), 0);
  EXPECT_NE(read("out.txt").find("from 5 problems"), std::string::npos);

  write("fig.eq", kFigure);
  ASSERT_EQ(run("encode " + path("fig.eq") + " --variant g2"), 0);
  const auto g = nlohmann::json::parse(read("out.txt"));
  EXPECT_EQ(g.at("variant"), "G2");
  EXPECT_EQ(g.at("nodes")[0].at("type"), "Equals");

  ASSERT_EQ(run("tree " + path("fig.eq") + " --depth 3"), 0);
  EXPECT_FALSE(nlohmann::json::parse(read("out.txt")).empty());
}
