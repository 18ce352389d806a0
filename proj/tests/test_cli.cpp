#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <gtest/gtest.h>

#include "tcn/cli.hpp"

namespace tcn {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "tcn");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("tcn_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string model(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  fs::path dir_;
};

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

TEST_F(Cli, CompileMinimalModel) {
  const auto r = run({"compile", model("m.tcm", "var x in 0..3; var y;")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "tcn-v1\nvar x in 0..3;\nvar y in -inf..inf;\n");
}

TEST_F(Cli, CompileLessThan) {
  const std::string path = model("lt.tcm", "var x in 0..3; var y in 0..3; constraint x < y;");
  const auto r = run({"compile", path});
  EXPECT_EQ(r.code, 0);
  int le = 0, add = 0, cons = 0;
  for (const auto& l : lines(r.out)) {
    if (!l.starts_with("con ")) continue;
    ++cons;
    le += l.find(" le ") != std::string::npos;
    add += l.find(" add ") != std::string::npos;
  }
  EXPECT_EQ(cons, 2);
  EXPECT_EQ(le, 1);
  EXPECT_EQ(add, 1);
  EXPECT_EQ(run({"compile", path}).out, r.out);
  const auto p = run({"compile", "--preprocess", path});
  EXPECT_EQ(p.code, 0);
  EXPECT_TRUE(p.out.starts_with("tcn-v1\n"));
}

TEST_F(Cli, ErrorsAndExitCodes) {
  auto r = run({"compile", model("bad.tcm", "constraint y = 1;")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("UndeclaredVariable(y)"), std::string::npos);
  r = run({"compile", (dir_ / "missing.tcm").string()});
  EXPECT_EQ(r.code, 2);
  r = run({"solve", model("unb.tcm", "var x; var y in 0..3; constraint x >= y;")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("UnboundedVariable(x)"), std::string::npos);
}

TEST_F(Cli, SolveSatisfiable) {
  const auto r = run({"solve", model("s.tcm", "var a in 0..9; var b in 0..9; constraint a * b = 12; constraint a < b;")});
  EXPECT_EQ(r.code, 0);
  const auto ls = lines(r.out);
  ASSERT_GE(ls.size(), 4u);
  EXPECT_EQ(ls.back(), "status: SAT");
  bound_t a = 0, b = 0;
  ASSERT_EQ(std::sscanf(ls[0].c_str(), "a = %ld;", &a), 1);
  ASSERT_EQ(std::sscanf(ls[1].c_str(), "b = %ld;", &b), 1);
  EXPECT_EQ(a * b, 12);
  EXPECT_LT(a, b);
  EXPECT_EQ(ls[2], "----------");
}

TEST_F(Cli, SolveAllSolutions) {
  const auto r = run({"solve", "--all-solutions", model("s.tcm", "var a in 0..9; var b in 0..9; constraint a * b = 12;")});
  int sols = 0;
  for (const auto& l : lines(r.out)) sols += l == "----------";
  EXPECT_EQ(sols, 4);
  EXPECT_NE(r.out.find("==========\nstatus: SAT\n"), std::string::npos);
}

TEST_F(Cli, SolveWorkedExample) {
  const auto r = run({"solve", "--stats", model("w.tcm",
                                                 "var x in 0..1; var y; var z; var w in 1..2;\n"
                                                 "constraint x = y + z; constraint w = y + z; constraint x = (y = z);\n")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("==========\nstatus: UNSAT\n"), std::string::npos);
  EXPECT_NE(r.out.find("stats.nodes: 0\n"), std::string::npos);
}

TEST_F(Cli, SolveOptimization) {
  const auto r = run({"solve", model("o.tcm", "var x in -5..5; var y in -5..5; constraint x + y = 3; solve minimize x - 0 * y;")});
  // objective must be a variable, so this is a syntax error
  EXPECT_EQ(r.code, 1);
  const auto ok = run({"solve", model("o2.tcm", "var x in -5..5; var y in -5..5; constraint x + y = 3; solve minimize x;")});
  EXPECT_EQ(ok.code, 0);
  EXPECT_TRUE(ok.out.ends_with("x = -2;\ny = 5;\n----------\n==========\nstatus: OPTIMAL\n")) << ok.out;
}

TEST_F(Cli, TimeoutZero) {
  const auto r = run({"solve", "--timeout", "0", TCN_CORPUS_DIR "/queens6.tcm"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "status: UNKNOWN\n");
}

TEST_F(Cli, NoPreprocessAgrees) {
  const std::string path = TCN_CORPUS_DIR "/golomb4.tcm";
  const auto a = run({"solve", path});
  const auto b = run({"solve", "--no-preprocess", path});
  EXPECT_EQ(lines(a.out).back(), "status: OPTIMAL");
  EXPECT_EQ(lines(b.out).back(), "status: OPTIMAL");
  const auto last_g4 = [](const std::string& s) { return s.substr(s.rfind("g4 = ")); };
  EXPECT_EQ(last_g4(a.out), last_g4(b.out));
}

TEST_F(Cli, StatsLines) {
  const auto r = run({"stats", model("lt.tcm", "var x in 0..3; var y in 0..3; constraint x < y;")});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("source.variables: 2\n"), std::string::npos);
  EXPECT_NE(r.out.find("tcn.ops.add: 1\n"), std::string::npos);
  EXPECT_NE(r.out.find("tcn.ops.le_true: 1\n"), std::string::npos);
  EXPECT_NE(r.out.find("tcn.ops.mul: 0\n"), std::string::npos);
}

TEST_F(Cli, StatsJson) {
  const auto r = run({"stats", "--json", model("e.tcm", "var x in 0..3;")});
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["source"]["variables"], 1);
  EXPECT_EQ(j["ratios"]["tcn"]["variables"], 1.0);
  EXPECT_TRUE(j["ratios"]["tcn"]["constraints"].is_null());
}

TEST_F(Cli, StatsBatch) {
  const auto r = run({"stats", "--batch", TCN_CORPUS_DIR});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("average"), std::string::npos);
  EXPECT_NE(r.out.find("median"), std::string::npos);
  EXPECT_NE(r.out.find("stddev"), std::string::npos);
  EXPECT_NE(r.out.find("\nTCN "), std::string::npos);
  EXPECT_NE(r.out.find("\nPreprocessed "), std::string::npos);
  const auto j = nlohmann::json::parse(run({"stats", "--batch", TCN_CORPUS_DIR, "--json"}).out);
  EXPECT_GE(j["instances"].size(), 5u);
  EXPECT_TRUE(j["table"].contains("TCN"));
  EXPECT_TRUE(j["table"]["Preprocessed"]["variables"].contains("max"));
}

TEST_F(Cli, UsageErrors) {
  EXPECT_NE(run({}).code, 0);
  EXPECT_NE(run({"solve"}).code, 0);
  EXPECT_NE(run({"solve", "--timeout", "-1", "x.tcm"}).code, 0);
  EXPECT_NE(run({"stats"}).code, 0);
}

}  // namespace
}  // namespace tcn
