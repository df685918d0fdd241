#include "coverfit/records.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

using json = nlohmann::json;
namespace fs = std::filesystem;

#ifndef COVERFIT_CLI
#error "COVERFIT_CLI must point at the coverfit executable"
#endif

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("coverfit_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  // Runs the CLI, capturing stdout and stderr into files; returns the exit code.
  int run(const std::string& args) {
    const std::string cmd = std::string(COVERFIT_CLI) + " " + args + " >" + path("stdout") + " 2>" + path("stderr");
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string out() const { return coverfit::io::read_text(path("stdout")); }
  std::string err() const { return coverfit::io::read_text(path("stderr")); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenBodyPerturbedBallValidates) {
  ASSERT_EQ(run("gen-body --dim 4 --kind perturbed_ball --epsilon 0.05 --degree 3 --seed 7 --out " + path("b.json")), 0);
  const auto body = coverfit::io::load_body(path("b.json"));
  EXPECT_EQ(body.dim(), 4);
  EXPECT_TRUE(coverfit::validate_support_function(body, 10000, 1).passed);
}

TEST_F(Cli, GenBodyBallAndErrors) {
  ASSERT_EQ(run("gen-body --dim 2 --kind ball"), 0);
  EXPECT_EQ(json::parse(out())["kind"], "ball");
  EXPECT_EQ(run("gen-body --dim 2 --kind reuleaux_polygon --k 4"), 3);
  EXPECT_EQ(run("gen-body --dim 2 --kind reuleaux_polygon"), 3);
  EXPECT_EQ(run("gen-body --dim 4 --kind perturbed_ball --epsilon 0.9"), 3);
  EXPECT_EQ(run("gen-body --dim 4 --kind blob"), 3);
  EXPECT_EQ(run("gen-body --kind ball"), 3);
  EXPECT_EQ(run("no-such-command"), 3);
}

TEST_F(Cli, SolveBallThenVerify) {
  ASSERT_EQ(run("gen-body --dim 4 --kind ball --out " + path("ball.json")), 0);
  ASSERT_EQ(run("solve --body " + path("ball.json") + " --preset axisdiag14_4d --seed 1 --out " + path("r.json")), 0);
  const json record = coverfit::io::read_json(path("r.json"));
  EXPECT_EQ(record["outcome"]["g_norm"], 0.0);
  EXPECT_EQ(record["outcome"]["converged"], true);
  EXPECT_EQ(record["config"]["seed"], 1);
  EXPECT_EQ(run("verify --record " + path("r.json")), 0);
}

TEST_F(Cli, SolveReuleauxTriangleAgainstHexagon) {
  ASSERT_EQ(run("gen-body --dim 2 --kind reuleaux_polygon --k 3 --out " + path("tri.json")), 0);
  ASSERT_EQ(run("solve --body " + path("tri.json") + " --polytope hexagon2d --seed 3 --out " + path("r.json")), 0);
  const json record = coverfit::io::read_json(path("r.json"));
  EXPECT_GE(record["outcome"]["margin"].get<double>(), -1e-8);
  EXPECT_EQ(run("verify --record " + path("r.json")), 0);
}

TEST_F(Cli, SolveBeyondTheoremIsFlagged) {
  ASSERT_EQ(run("gen-body --dim 4 --kind perturbed_ball --epsilon 0.05 --seed 3 --out " + path("b.json")), 0);
  const int code = run("solve --body " + path("b.json") + " --preset cross16_4d --seed 3 --restarts 5 --out " + path("r.json"));
  EXPECT_TRUE(code == 0 || code == 2) << code;
  const json record = coverfit::io::read_json(path("r.json"));
  EXPECT_EQ(record["beyond_theorem"], true);
  EXPECT_EQ(record["note"], "beyond theorem - experimental");
}

TEST_F(Cli, SolveIsDeterministicModuloWallTimeAndPaths) {
  ASSERT_EQ(run("gen-body --dim 4 --kind perturbed_ball --seed 5 --out " + path("b.json")), 0);
  const std::string args = "solve --body " + path("b.json") + " --preset axisdiag14_4d --seed 5 --out ";
  ASSERT_EQ(run(args + path("r1.json")), 0);
  ASSERT_EQ(run(args + path("r2.json")), 0);
  json a = coverfit::io::read_json(path("r1.json")), b = coverfit::io::read_json(path("r2.json"));
  for (json* r : {&a, &b}) {
    r->erase("wall_time_s");
    r->erase("command_line");
  }
  EXPECT_EQ(a.dump(), b.dump());
}

TEST_F(Cli, SolveErrors) {
  ASSERT_EQ(run("gen-body --dim 3 --kind ball --out " + path("b3.json")), 0);
  EXPECT_EQ(run("solve --body " + path("b3.json") + " --preset axisdiag14_4d"), 3);
  EXPECT_EQ(run("solve --body " + path("missing.json") + " --preset axisdiag14_4d"), 3);
  EXPECT_EQ(run("solve --body " + path("b3.json")), 3);
}

TEST_F(Cli, VerifyDetectsTampering) {
  ASSERT_EQ(run("gen-body --dim 4 --kind perturbed_ball --seed 2 --out " + path("b.json")), 0);
  ASSERT_EQ(run("solve --body " + path("b.json") + " --preset axisdiag14_4d --seed 2 --out " + path("r.json")), 0);
  json record = coverfit::io::read_json(path("r.json"));
  const auto rot = coverfit::Rotation::from_matrix(coverfit::io::matrix_from_json(record["outcome"]["rotation"], 4, "r"));
  coverfit::Vec a = coverfit::Vec::Zero(6);
  a(2) = 1e-3;
  record["outcome"]["rotation"] = coverfit::io::matrix_to_json(coverfit::exp_chart(rot, a).matrix());
  coverfit::io::write_text(path("tampered.json"), record.dump());
  EXPECT_EQ(run("verify --record " + path("tampered.json")), 2);
  EXPECT_EQ(run("verify --record " + path("missing.json")), 3);
  coverfit::io::write_text(path("garbage.json"), "{\"command\": \"solve\"");
  EXPECT_EQ(run("verify --record " + path("garbage.json")), 3);
}

TEST_F(Cli, Scan2d) {
  ASSERT_EQ(run("gen-body --dim 2 --kind ball --out " + path("ball.json")), 0);
  ASSERT_EQ(run("scan2d --body " + path("ball.json") + " --preset hexagon2d --samples 20 --csv " + path("s.csv")), 0);
  std::istringstream csv(coverfit::io::read_text(path("s.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "angle,residual");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    EXPECT_EQ(line.substr(line.find(',') + 1), "0");
  }
  EXPECT_EQ(rows, 20);

  ASSERT_EQ(run("gen-body --dim 2 --kind reuleaux_polygon --k 5 --out " + path("pent.json")), 0);
  ASSERT_EQ(run("scan2d --body " + path("pent.json") + " --preset hexagon2d --samples 10000"), 0);
  EXPECT_GE(json::parse(out())["brackets"].size(), 1u);
  EXPECT_EQ(run("scan2d --body " + path("pent.json") + " --preset hexagon2d --samples 0"), 3);
  EXPECT_EQ(run("scan2d --body " + path("pent.json") + " --preset axisdiag14_4d"), 3);
}

TEST_F(Cli, Bounds) {
  ASSERT_EQ(run("bounds --dim 4"), 0);
  EXPECT_EQ(json::parse(out())["facet_bound"], 14);
  ASSERT_EQ(run("bounds --dim 2"), 0);
  EXPECT_EQ(json::parse(out())["facet_bound"], 6);
  EXPECT_EQ(run("bounds --dim 3"), 3);
  EXPECT_NE(err().find("even dimensions only"), std::string::npos);
}

TEST_F(Cli, PresetsAndMakePolytope) {
  ASSERT_EQ(run("presets-list"), 0);
  const json list = json::parse(out());
  ASSERT_EQ(list.size(), 4u);
  EXPECT_EQ(list[3]["name"], "cross16_4d");
  EXPECT_EQ(list[3]["beyond_theorem"], true);

  ASSERT_EQ(run("make-polytope --preset axisdiag14_4d --out " + path("p.json")), 0);
  EXPECT_EQ(coverfit::io::load_polytope(path("p.json")).facets(), 14);

  coverfit::io::write_text(path("flat.json"), R"({"dim": 4, "strip_normals": [[1,0,0,0],[0,1,0,0],[0,0,1,0]]})");
  EXPECT_EQ(run("make-polytope --normals " + path("flat.json")), 3);
  EXPECT_NE(err().find("unbounded polytope"), std::string::npos);
}
