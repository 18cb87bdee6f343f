#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "specden/cli.hpp"
#include "specden/csv.hpp"

using namespace specden;
namespace fs = std::filesystem;

namespace {

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"specden"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(int(argv.size()), argv.data());
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("specden_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string sub(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("theory subcommand writes a closed-form-consistent table") {
  TempDir tmp("theory");
  CHECK(run({"theory", "--example", "uniform-band", "--ell", "0.2", "--out",
             tmp.sub("a")}) == 0);
  auto table = csv::read_correction(tmp.sub("a") + "/correction.csv");
  REQUIRE(table.grid.size() > 100);
  for (std::size_t i = 0; i < table.grid.size(); ++i) {
    double s = table.grid[i];
    if (s > 0.05 && s < 0.95 && std::abs(s - 0.2) > 0.01 && std::abs(s - 0.8) > 0.01)
      CHECK(std::abs(table.F_values[i] -
                     closed_form_F(ClosedFormExample::UniformBand, 0.2, s)) <= 1e-3);
  }
}

TEST_CASE("reruns produce byte-identical outputs") {
  TempDir tmp("rerun");
  CHECK(run({"theory", "--example", "triangular-goe", "--grid-n", "201", "--out",
             tmp.sub("r1")}) == 0);
  CHECK(run({"theory", "--example", "triangular-goe", "--grid-n", "201", "--out",
             tmp.sub("r2")}) == 0);
  CHECK(slurp(tmp.sub("r1") + "/correction.csv") ==
        slurp(tmp.sub("r2") + "/correction.csv"));

  CHECK(run({"simulate", "--example", "uniform-band", "--n", "60", "--eps", "0.01",
             "--replicates", "3", "--seed", "5", "--out", tmp.sub("s1")}) == 0);
  CHECK(run({"simulate", "--example", "uniform-band", "--n", "60", "--eps", "0.01",
             "--replicates", "3", "--seed", "5", "--out", tmp.sub("s2")}) == 0);
  CHECK(slurp(tmp.sub("s1") + "/eigenvalues.csv") ==
        slurp(tmp.sub("s2") + "/eigenvalues.csv"));
  CHECK(slurp(tmp.sub("s1") + "/shift.csv") == slurp(tmp.sub("s2") + "/shift.csv"));
  CHECK(slurp(tmp.sub("s1") + "/metadata.json") ==
        slurp(tmp.sub("s2") + "/metadata.json"));
}

TEST_CASE("thread count does not change any output bytes") {
  TempDir tmp("threads");
  for (const char* t : {"1", "2"}) {
    CHECK(run({"simulate", "--example", "uniform-band", "--n", "50", "--eps",
               "0.02", "--replicates", "4", "--seed", "11", "--threads", t,
               "--out", tmp.sub(std::string("sim") + t)}) == 0);
    CHECK(run({"solve", "--example", "triangular-goe", "--eps", "0.05",
               "--grid-n", "101", "--threads", t, "--out",
               tmp.sub(std::string("sol") + t)}) == 0);
  }
  CHECK(slurp(tmp.sub("sim1") + "/eigenvalues.csv") ==
        slurp(tmp.sub("sim2") + "/eigenvalues.csv"));
  CHECK(slurp(tmp.sub("sol1") + "/density.csv") ==
        slurp(tmp.sub("sol2") + "/density.csv"));
}

TEST_CASE("usage errors exit 1 and write nothing") {
  TempDir tmp("usage");
  CHECK(run({"theory", "--example", "uniform-band", "--ell", "1.5", "--out",
             tmp.sub("x")}) == 1);
  CHECK(!fs::exists(tmp.sub("x") + "/correction.csv"));
  CHECK(run({"simulate", "--example", "uniform-band", "--n", "0", "--out",
             tmp.sub("y")}) == 1);
  CHECK(run({"theory", "--example", "no-such-model", "--out", tmp.sub("z")}) == 1);
  CHECK(run({"theory", "--out", tmp.sub("w")}) == 1);  // no model at all
  CHECK(run({"burgers", "--t-grid", "0:0.2:0.05"}) == 1);  // missing --c
  CHECK(run({"frobnicate"}) == 1);
}

TEST_CASE("solve and burgers outputs parse and satisfy coarse checks") {
  TempDir tmp("solve");
  CHECK(run({"solve", "--eps", "0", "--example", "uniform-band", "--grid-n",
             "201", "--out", tmp.sub("d")}) == 0);
  auto density = csv::read_density(tmp.sub("d") + "/density.csv");
  for (std::size_t i = 0; i < density.s.size(); ++i) {
    if (density.s[i] > 0.1 && density.s[i] < 0.9)
      CHECK(std::abs(density.density[i] - 1.0) <= 0.05);
  }
  CHECK(density.cdf.back() >= 0.98);

  CHECK(run({"burgers", "--c", "1", "--t-grid", "0:0.2:0.05", "--out",
             tmp.sub("b")}) == 0);
  auto residual = csv::read_residual(tmp.sub("b") + "/residual.csv");
  CHECK(residual.s.size() > 100);

  CHECK(run({"burgers", "--semigroup", "--c", "1", "--t", "0.25", "--out",
             tmp.sub("g")}) == 0);
  CHECK(fs::exists(tmp.sub("g") + "/semigroup.csv"));
}

TEST_CASE("solve --eps 0.25 --c 1 reproduces semicircle(1.25)") {
  TempDir tmp("semi");
  CHECK(run({"solve", "--eps", "0.25", "--example", "semicircle-goe", "--c", "1",
             "--grid-n", "301", "--out", tmp.sub("d")}) == 0);
  auto density = csv::read_density(tmp.sub("d") + "/density.csv");
  double worst = 0.0;
  for (std::size_t i = 0; i < density.s.size(); ++i) {
    double s = density.s[i];
    if (std::abs(s) > 0.95 * 2.0 * std::sqrt(1.25)) continue;
    double exact = semicircle_density(1.25, s);
    worst = std::max(worst, std::abs(density.density[i] - exact));
  }
  CHECK(worst <= 0.02);
}

TEST_CASE("validate subcommand reports and exits 0 on the built-ins") {
  CHECK(run({"validate", "--example", "uniform-band", "--ell", "0.2"}) == 0);
  CHECK(run({"validate", "--example", "triangular-goe"}) == 0);
}

TEST_CASE("config files load, honor the schema, and reject unknown keys") {
  TempDir tmp("config");
  {
    std::ofstream out(tmp.sub("model.json"));
    out << R"({"density": {"kind": "semicircle", "params": {"variance": 1.0}},
               "profile": {"kind": "constant", "params": {"value": 1.0}},
               "kernel": {"alpha": 1.0},
               "resolution": 512})";
  }
  CHECK(run({"validate", "--config", tmp.sub("model.json")}) == 0);
  CHECK(run({"theory", "--config", tmp.sub("model.json"), "--grid-n", "101",
             "--out", tmp.sub("t")}) == 0);
  {
    std::ofstream out(tmp.sub("bad.json"));
    out << R"({"density": {"kind": "uniform01"},
               "profile": {"kind": "constant"},
               "frobnication_level": 11})";
  }
  CHECK(run({"validate", "--config", tmp.sub("bad.json")}) == 1);
}

TEST_CASE("eigenvalue CSV round-trips through the repo reader") {
  TempDir tmp("roundtrip");
  CHECK(run({"simulate", "--example", "triangular-goe", "--n", "40", "--eps",
             "0.01", "--replicates", "2", "--seed", "3", "--out",
             tmp.sub("s")}) == 0);
  auto samples = csv::read_eigenvalues(tmp.sub("s") + "/eigenvalues.csv");
  REQUIRE(samples.size() == 2);
  CHECK(samples[0].n == 40);
  std::vector<double> ftheory;
  auto shift = csv::read_shift(tmp.sub("s") + "/shift.csv", &ftheory);
  CHECK(shift.s.size() == ftheory.size());
  CHECK(fs::exists(tmp.sub("s") + "/metadata.json"));
}
