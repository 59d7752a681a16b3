#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fgft/cli.hpp"

using namespace fgft;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fgft");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("fgft_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  os << text;
}

}  // namespace

TEST_F(CliTest, FactorizeThenApplyConservesEnergy) {
  write_file(path("p3.graph"), "n 3\n1 2 1\n2 3 1\n");
  write_file(path("x.csv"), "n=3 domain=vertex\n1\n-2\n0.5\n");
  const auto f = cli({"factorize", path("p3.graph"), "--J", "50", "--out", path("p3.fgft")});
  ASSERT_EQ(f.code, 0) << f.err;
  const auto a = cli({"apply", path("p3.fgft"), path("x.csv")});
  ASSERT_EQ(a.code, 0) << a.err;
  std::istringstream is(a.out);
  const auto y = read_signal(is);
  EXPECT_EQ(y.domain, SignalDomain::spectral);
  EXPECT_NEAR(norm2(y.values), std::sqrt(1.0 + 4.0 + 0.25), 1e-12);

  write_file(path("y.csv"), a.out);
  const auto back = cli({"apply", path("p3.fgft"), path("y.csv"), "--inverse"});
  ASSERT_EQ(back.code, 0) << back.err;
  std::istringstream bs(back.out);
  const auto x = read_signal(bs);
  EXPECT_NEAR(x.values[0], 1.0, 1e-12);
  EXPECT_NEAR(x.values[1], -2.0, 1e-12);
  EXPECT_NEAR(x.values[2], 0.5, 1e-12);
}

TEST_F(CliTest, GenerateEigAnalyze) {
  const auto g = cli({"generate", "--model", "sbm", "--n", "24", "--m", "4", "--c", "3", "--seed", "3",
                      "--out", path("g.graph")});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_TRUE(fs::exists(path("g.graph.json")));
  const Graph graph = load_graph(path("g.graph"));
  EXPECT_EQ(graph.size(), 24u);

  const auto e = cli({"eig", path("g.graph")});
  ASSERT_EQ(e.code, 0) << e.err;
  std::istringstream es(e.out);
  std::string header;
  std::getline(es, header);
  EXPECT_EQ(header.substr(0, 12), "k,lambda,u1,");
  std::string first;
  std::getline(es, first);
  EXPECT_EQ(first.substr(0, 2), "1,");

  ASSERT_EQ(cli({"factorize", path("g.graph"), "--J", "40", "--out", path("g.fgft")}).code, 0);
  const auto an = cli({"analyze", path("g.graph"), path("g.fgft")});
  ASSERT_EQ(an.code, 0) << an.err;
  EXPECT_NE(an.err.find("global_error="), std::string::npos);
  std::istringstream as(an.out);
  std::size_t lines = 0;
  for (std::string line; std::getline(as, line);) ++lines;
  EXPECT_EQ(lines, 25u);
}

TEST_F(CliTest, ExperimentSmokeRunIsFast) {
  const auto start = std::chrono::steady_clock::now();
  const auto r = cli({"experiment", "--model", "erdos_renyi", "--n", "16", "--draws", "2", "--j-grid",
                      "0,10", "--out", path("run")});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LT(secs, 1.0);
  EXPECT_TRUE(fs::exists(path("run/err1.csv")));
  EXPECT_TRUE(fs::exists(path("run/summary.json")));
}

TEST_F(CliTest, ExperimentFromConfigWithOverride) {
  write_file(path("cfg.json"),
             R"({"model": "sensor", "n": 20, "tau": 0.4, "draws": 2, "j_grid": [0, 5, 30], "seed": 4})");
  const auto r = cli({"experiment", "--config", path("cfg.json"), "--draws", "3", "--out", path("run")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream is(path("run/config.json"));
  const auto cfg = config_from_json(nlohmann::json::parse(is));
  EXPECT_EQ(cfg.model, ModelKind::sensor);
  EXPECT_EQ(cfg.n, 20u);
  EXPECT_EQ(cfg.draws, 3u);
  EXPECT_EQ(cfg.j_grid, (std::vector<std::size_t>{0, 5, 30}));
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"frobnicate"}).code, 1);
  EXPECT_EQ(cli({"factorize", path("missing.graph"), "--J", "5"}).code, 3);
  EXPECT_EQ(cli({"reproduce", "fig9", "--out", path("r")}).code, 1);
  EXPECT_EQ(cli({"experiment", "--n", "16", "--j-grid", "0,x", "--out", path("r")}).code, 1);
  EXPECT_EQ(cli({"experiment", "--n", "16", "--j-grid", "3,10", "--out", path("r")}).code, 1);
  write_file(path("bad.graph"), "n 3\n1 4 1\n");
  const auto bad = cli({"eig", path("bad.graph")});
  EXPECT_EQ(bad.code, 3);
  EXPECT_FALSE(bad.err.empty());
  write_file(path("k4.graph"), "n 4\n1 2 1\n1 3 1\n1 4 1\n2 3 1\n2 4 1\n3 4 1\n");
  EXPECT_EQ(cli({"eig", path("k4.graph"), "--max-rotations", "1"}).code, 2);
  EXPECT_EQ(cli({"eig", path("k4.graph")}).code, 0);
  EXPECT_EQ(cli({"--help"}).code, 0);
}
