#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <thermo_billiards/cli.hpp>
#include <thermo_billiards/report.hpp>

namespace fs = std::filesystem;
using namespace tb;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "thermo_billiards");
  std::vector<const char *> argv;
  for (const std::string &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string &name) {
  const fs::path p = fs::temp_directory_path() / ("tb_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string write(const fs::path &path, const std::string &text) {
  std::ofstream(path) << text;
  return path.string();
}

std::string slurp(const fs::path &path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

const char *kSmall = R"({
  "seed": 3,
  "validate": {"n_rays": 5000},
  "tails": {"n_collisions": 100000, "n_flow": 20000, "burn_in": 1000, "n_quadrature": 20000},
  "drift": {"v_grid": [2.0], "n": 100000},
  "simulate": {"n_trajectories": 3, "n_steps": 20}
})";

}  // namespace

TEST_CASE("validate on the reference table") {
  const fs::path dir = scratch("validate");
  const Run r = cli({"validate", "--config", write(dir / "c.json", kSmall), "--out", (dir / "out").string(), "--quiet"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("validate Pass ", 0) == 0);
  CHECK(r.err.empty());
  const ExperimentReport rep = report_from_json(slurp(dir / "out" / "validate.json"));
  CHECK(rep.value("horizon_violations") == 0.0);
  CHECK(rep.value("geometry_violations") == 0.0);
  CHECK(fs::exists(dir / "out" / "validate.csv"));
}

TEST_CASE("tails twice with the same seed gives identical files") {
  const fs::path dir = scratch("determinism");
  const std::string config = write(dir / "c.json", kSmall);
  const Run a = cli({"tails", "--config", config, "--out", (dir / "a").string(), "--quiet", "--threads", "1"});
  const Run b = cli({"tails", "--config", config, "--out", (dir / "b").string(), "--quiet", "--threads", "3"});
  CHECK(a.code == b.code);
  CHECK(a.out == b.out);
  const std::string csv = slurp(dir / "a" / "tails.csv");
  CHECK(csv.rfind(std::string(kMetricCsvHeader) + "\n", 0) == 0);
  CHECK(csv == slurp(dir / "b" / "tails.csv"));
  CHECK(slurp(dir / "a" / "tails.json") == slurp(dir / "b" / "tails.json"));
  CHECK(csv.find('\r') == std::string::npos);

  const Run c = cli({"tails", "--config", config, "--seed", "4", "--out", (dir / "c").string(), "--quiet"});
  CHECK(slurp(dir / "c" / "tails.csv") != csv);
}

TEST_CASE("simulate writes a trace") {
  const fs::path dir = scratch("simulate");
  const Run r = cli({"simulate", "--config", write(dir / "c.json", kSmall), "--out", (dir / "out").string(), "--quiet"});
  CHECK(r.code == kExitOk);
  std::istringstream trace(slurp(dir / "out" / "trace.csv"));
  std::string line;
  std::getline(trace, line);
  CHECK(line == kTraceCsvHeader);
  int rows = 0;
  while (std::getline(trace, line)) ++rows;
  CHECK(rows == 60);
}

TEST_CASE("single-disk table is a horizon violation") {
  const fs::path dir = scratch("horizon");
  const std::string config = write(dir / "c.json", R"({
    "table": {"disks": [{"center": [0.5, 0.5], "radius": 0.25}], "sigma_cap": 0.3}
  })");
  CHECK(cli({"simulate", "--config", config, "--out", (dir / "out").string(), "--quiet"}).code == kExitHorizon);
  CHECK(cli({"validate", "--config", config, "--out", (dir / "out").string(), "--quiet"}).code == kExitHorizon);
}

TEST_CASE("configuration errors exit with 1") {
  const fs::path dir = scratch("errors");
  const Run syntax = cli({"validate", "--config", write(dir / "a.json", "{\n \"seed\": 1,\n}")});
  CHECK(syntax.code == kExitConfig);
  CHECK(syntax.err.find("line") != std::string::npos);
  CHECK(syntax.out.empty());

  const Run overlap = cli({"validate", "--config", write(dir / "b.json", R"({"table": {"disks": [
      {"center": [0.3, 0.5], "radius": 0.1}, {"center": [0.45, 0.5], "radius": 0.1}]}})")});
  CHECK(overlap.code == kExitConfig);
  CHECK(overlap.err.find("Overlap") != std::string::npos);

  CHECK(cli({"validate", "--config", (dir / "missing.json").string()}).code == kExitConfig);
  CHECK(cli({"validate", "--format", "xml"}).code == kExitConfig);
  CHECK(cli({}).code == kExitConfig);
  CHECK(cli({"bogus"}).code == kExitConfig);
}

TEST_CASE("failing verdicts map to exit code 4") {
  const fs::path dir = scratch("drift");
  const Run r = cli({"drift", "--config", write(dir / "c.json", kSmall), "--out", (dir / "out").string(),
                     "--format", "json", "--quiet"});
  CHECK(r.code == kExitFail);
  CHECK(r.out.rfind("drift Fail ", 0) == 0);
  CHECK(fs::exists(dir / "out" / "drift.json"));
  CHECK_FALSE(fs::exists(dir / "out" / "drift.csv"));
}
