#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "helpers.hpp"

using qgs::testing::pi;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run(const std::string& args) {
  const std::string err_path = ::testing::TempDir() + "qgs_cli_stderr.txt";
  const std::string cmd = std::string(QGS_CLI_PATH) + " " + args + " 2>" + err_path;
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  return r;
}

std::string graph(const char* name) { return std::string(QGS_DATA_DIR) + "/" + name; }

std::vector<std::vector<std::string>> csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::stringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::vector<std::string> row;
    std::stringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(cell);
    if (!line.empty() && line.back() == ',') row.emplace_back();
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST(Cli, SpectrumNonInteracting) {
  const CliRun r = run("spectrum --graph " + graph("interval.json") + " --n 2 --kmax 7 --step 0.05 --non-interacting");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_GE(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"k_1", "k_2", "energy", "residual_max", "sigma_min",
                                                 "multiplicity_proxy", "flags"}));
  EXPECT_NEAR(std::stod(rows[1][2]), 2 * pi * pi, 1e-7);
  for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_GE(std::stod(rows[i][2]), std::stod(rows[i - 1][2]));
  EXPECT_NE(r.err.find("step=0.05 "), std::string::npos);
  EXPECT_NE(r.err.find("vanishing"), std::string::npos);
  const CliRun all = run("spectrum --graph " + graph("interval.json") +
                         " --n 2 --kmax 7 --step 0.05 --non-interacting --all-roots");
  const auto all_rows = csv(all.out);
  EXPECT_GT(all_rows.size(), rows.size());
  EXPECT_EQ(all_rows[1][6], "zero-entry|vanishing-wavefunction");
}

TEST(Cli, SpectrumOneParticle) {
  const CliRun r = run("spectrum --graph " + graph("interval.json") + " --n 1 --kmax 10");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 4u);
  for (int m = 1; m <= 3; ++m) EXPECT_NEAR(std::stod(rows[m][0]), m * pi, 1e-8);
}

TEST(Cli, SpectrumWritesOutFile) {
  const std::string path = ::testing::TempDir() + "qgs_spectrum.csv";
  const CliRun r = run("spectrum --graph " + graph("interval.json") + " --n 1 --kmax 4 --out " + path);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "k_1,energy,residual_max,sigma_min,multiplicity_proxy,flags");
}

TEST(Cli, UsageAndIOErrors) {
  EXPECT_EQ(run("spectrum --graph /nonexistent.json --n 2 --kmax 5").code, 2);
  EXPECT_EQ(run("spectrum --graph " + graph("interval.json") + " --n 2").code, 2);
  EXPECT_EQ(run("spectrum --graph " + graph("interval.json") + " --n 2 --kmax -1").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, VerifyPasses) {
  const CliRun r = run("verify --graph " + graph("interval.json") + " --n 2 --alpha 1 --seed 42");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 7u);
  int passed = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) passed += rows[i][2] == "PASS";
  EXPECT_EQ(passed, 3);
  EXPECT_NE(r.err.find("seed=42"), std::string::npos);
}

TEST(Cli, VerifyThreeStarExercisesAllThreeParticleRelations) {
  const CliRun r = run("verify --graph " + graph("star3_kirchhoff.json") + " --n 3 --alpha 1 --samples 3");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv(r.out);
  EXPECT_EQ(rows[3][2], "n/a");
  EXPECT_EQ(rows[4][2], "PASS");
  EXPECT_EQ(rows[6][2], "PASS");
}

TEST(Cli, VerifyIsReproducible) {
  const std::string args = "verify --graph " + graph("star3.json") + " --n 2 --alpha 0.5 --seed 7 --samples 10";
  const CliRun a = run(args), b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, VerifyRejectsInvalidConditions) {
  const CliRun r = run("verify --graph " + graph("interval_bad_conditions.json") + " --n 2 --alpha 1");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Hermitian"), std::string::npos) << r.err;
}

TEST(Cli, Bethe) {
  CliRun r = run("bethe --alpha 0 --m 1,2 --m 2,2");
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_NEAR(std::stod(rows[1][3]), 2 * pi, 1e-14);
  EXPECT_EQ(rows[2][5], "OK");

  r = run("bethe --alpha 1e6 --m 1,2");
  ASSERT_EQ(r.code, 0) << r.err;
  rows = csv(r.out);
  EXPECT_NEAR(std::stod(rows[1][2]), pi, 1e-3 * pi);
  EXPECT_NEAR(std::stod(rows[1][3]), 2 * pi, 1e-3 * pi);

  r = run("bethe --alpha 1 --m 2,2 --m 1,2");
  EXPECT_EQ(r.code, 1);
  rows = csv(r.out);
  EXPECT_EQ(rows[1].back(), "FAILED");
  EXPECT_EQ(rows[2].back(), "OK");
  EXPECT_NE(r.err.find("repeated"), std::string::npos);

  EXPECT_EQ(run("bethe --alpha 1 --m 1,x").code, 2);
  EXPECT_EQ(run("bethe --alpha 1 --m 1,2 --graph " + graph("star3.json")).code, 2);
}

TEST(Cli, Oracle) {
  CliRun r = run("oracle --alpha 2 --n 2 --levels 3");
  ASSERT_EQ(r.code, 0) << r.err;
  auto rows = csv(r.out);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"level", "E_bethe", "E_fd_N", "E_fd_2N", "extrapolated", "rel_diff"}));
  for (int i = 1; i <= 3; ++i) EXPECT_LT(std::stod(rows[i][5]), 1e-3);

  r = run("oracle --alpha 0 --n 2 --levels 3");
  ASSERT_EQ(r.code, 0) << r.err;
  rows = csv(r.out);
  EXPECT_NEAR(std::stod(rows[1][1]), 2 * pi * pi, 1e-10);
  EXPECT_NEAR(std::stod(rows[2][1]), 5 * pi * pi, 1e-10);
  EXPECT_NEAR(std::stod(rows[3][1]), 8 * pi * pi, 1e-10);

  EXPECT_EQ(run("oracle --alpha 1 --n 3").code, 2);
  EXPECT_EQ(run("oracle --alpha 1 --n 2 --N 200").code, 2);
}
