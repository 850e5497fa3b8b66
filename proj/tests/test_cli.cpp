#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "contassort/io.hpp"
#include "contassort/rng.hpp"

namespace fs = std::filesystem;
using contassort::read_csv_rows;

namespace {

std::string cli_path() {
  const char* env = std::getenv("CONTASSORT_CLI");
  REQUIRE(env != nullptr);
  return env;
}

int run_cli(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " >/dev/null 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() / ("contassort_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("solve bimodal writes the two-interval optimum") {
  fs::path dir = fresh_dir("solve_bimodal");
  REQUIRE(run_cli("solve --instance bimodal --capacity 0.5 --curve --out " + dir.string()) ==
          0);
  auto summary = read_csv_rows((dir / "solve_summary.csv").string());
  REQUIRE(summary.size() == 1);
  CHECK(summary[0][0] == Catch::Approx(0.19).margin(0.005));  // rho*
  CHECK(summary[0][2] == 2);                                  // interval count
  auto intervals = read_csv_rows((dir / "assortment.csv").string());
  REQUIRE(intervals.size() == 2);
  CHECK(intervals[0][0] == Catch::Approx(0.33).margin(0.01));
  CHECK(intervals[1][1] == Catch::Approx(0.98).margin(0.01));
  CHECK(fs::exists(dir / "fixed_point_curve.dat"));
  // header rows carry the config hash
  CHECK(slurp(dir / "solve_summary.csv").find("config=") != std::string::npos);
}

TEST_CASE("solve round-trips through the grid dump") {
  fs::path dir = fresh_dir("solve_roundtrip");
  REQUIRE(run_cli("solve --instance bimodal --capacity 0.5 --out " + dir.string()) == 0);
  const double rho1 = read_csv_rows((dir / "solve_summary.csv").string())[0][0];

  fs::path dir2 = fresh_dir("solve_roundtrip2");
  REQUIRE(run_cli("solve --v-csv " + (dir / "v_grid.csv").string() +
                  " --w identity --capacity 0.5 --out " + dir2.string()) == 0);
  const double rho2 = read_csv_rows((dir2 / "solve_summary.csv").string())[0][0];
  CHECK(rho2 == Catch::Approx(rho1).margin(1e-6));
}

TEST_CASE("solve a constant grid instance at full capacity") {
  fs::path dir = fresh_dir("solve_const");
  std::ofstream csv(dir / "v.csv");
  csv << "x,v\n";
  for (int i = 0; i <= 64; ++i) csv << i / 64.0 << ",1\n";
  csv.close();
  REQUIRE(run_cli("solve --v-csv " + (dir / "v.csv").string() +
                  " --w identity --capacity 1 --out " + dir.string()) == 0);
  const double rho = read_csv_rows((dir / "solve_summary.csv").string())[0][0];
  CHECK(rho == Catch::Approx(2.0 - std::sqrt(3.0)).margin(1e-5));
}

TEST_CASE("solve rejects non-uniform grid instances") {
  fs::path dir = fresh_dir("solve_badgrid");
  std::ofstream csv(dir / "v.csv");
  csv << "x,v\n0,1\n0.9,1\n1,1\n";
  csv.close();
  CHECK(run_cli("solve --v-csv " + (dir / "v.csv").string() + " --w identity --capacity 1 "
                "--out " + dir.string()) == 3);
}

TEST_CASE("solve degenerate capacity") {
  fs::path dir = fresh_dir("solve_zero");
  REQUIRE(run_cli("solve --instance bimodal --capacity 0 --out " + dir.string()) == 0);
  auto summary = read_csv_rows((dir / "solve_summary.csv").string());
  CHECK(summary[0][0] == 0.0);
  CHECK(read_csv_rows((dir / "assortment.csv").string()).empty());
}

TEST_CASE("estimate recovers a flat preference", "[slow]") {
  fs::path dir = fresh_dir("estimate_flat");
  // synthetic purchases from v = 1 on [0,1]: uniform draws
  contassort::Rng rng(99991);
  std::ofstream csv(dir / "purchases.csv");
  csv << "x\n";
  for (int i = 0; i < 10000; ++i) csv << contassort::format_double(rng.uniform()) << "\n";
  csv.close();
  REQUIRE(run_cli("estimate --data " + (dir / "purchases.csv").string() +
                  " --p 0.5 --out " + dir.string()) == 0);
  auto rows = read_csv_rows((dir / "vhat.csv").string());
  REQUIRE(rows.size() > 100);
  double mass = 0.0;
  for (std::size_t k = 0; k + 1 < rows.size(); ++k)
    mass += 0.5 * (rows[k][1] + rows[k + 1][1]) * (rows[k + 1][0] - rows[k][0]);
  CHECK(mass == Catch::Approx(1.0).margin(0.1));
}

TEST_CASE("estimate threshold falls as the no-purchase share rises", "[slow]") {
  fs::path dir = fresh_dir("estimate_trend");
  contassort::Rng rng(5);
  std::ofstream csv(dir / "purchases.csv");
  csv << "x\n";
  for (int i = 0; i < 5000; ++i) csv << contassort::format_double(rng.uniform()) << "\n";
  csv.close();
  double prev = 1e9;
  for (double p : {0.5, 0.6, 0.7, 0.8, 0.9}) {
    fs::path out = fresh_dir("estimate_trend_p");
    REQUIRE(run_cli("estimate --data " + (dir / "purchases.csv").string() + " --p " +
                    std::to_string(p) + " --out " + out.string()) == 0);
    const double threshold = read_csv_rows((out / "estimate_summary.csv").string())[0][3];
    CHECK(threshold < prev);
    prev = threshold;
  }
}

TEST_CASE("estimate handles degenerate and bad data") {
  fs::path dir = fresh_dir("estimate_edge");
  std::ofstream one(dir / "one.csv");
  one << "x\n0.42\n";
  one.close();
  REQUIRE(run_cli("estimate --data " + (dir / "one.csv").string() + " --p 0.5 --out " +
                  dir.string()) == 0);
  CHECK(read_csv_rows((dir / "estimate_summary.csv").string())[0][8] == 1.0);  // flagged

  std::ofstream bad(dir / "bad.csv");
  bad << "x\n2.5\n";
  bad.close();
  CHECK(run_cli("estimate --data " + (dir / "bad.csv").string() + " --p 0.5 --out " +
                dir.string()) == 3);

  // raw values above 1 are fine with a scale maximum
  std::ofstream raw(dir / "raw.csv");
  raw << "x\n100000\n250000\n420000\n";
  raw.close();
  CHECK(run_cli("estimate --data " + (dir / "raw.csv").string() +
                " --p 0.5 --scale-max 800000 --out " + dir.string()) == 0);
}

TEST_CASE("simulate is deterministic under a fixed seed") {
  fs::path dir1 = fresh_dir("simulate_a");
  fs::path dir2 = fresh_dir("simulate_b");
  const std::string args =
      "simulate --policy sap --capacity 1 --horizon 100 --reps 2 --seed 31337 --out ";
  REQUIRE(run_cli(args + dir1.string()) == 0);
  REQUIRE(run_cli(args + dir2.string()) == 0);
  CHECK(slurp(dir1 / "regret.csv") == slurp(dir2 / "regret.csv"));
  CHECK(slurp(dir1 / "regret.dat") == slurp(dir2 / "regret.dat"));
  auto rows = read_csv_rows((dir1 / "regret.csv").string());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0][0] == 100.0);
  CHECK(rows[0][3] == 2.0);
}

TEST_CASE("simulate can dump the first replication's sales log") {
  fs::path dir = fresh_dir("simulate_log");
  REQUIRE(run_cli("simulate --policy sap --capacity 1 --horizon 50 --reps 1 --seed 8 "
                  "--dump-log --out " +
                  dir.string()) == 0);
  const std::string log = slurp(dir / "log.csv");
  CHECK(log.find("t,assortment,outcome,inst_regret") != std::string::npos);
  // 50 periods plus the two header lines
  CHECK(std::count(log.begin(), log.end(), '\n') == 52);
}

TEST_CASE("simulate reads a JSON config") {
  fs::path dir = fresh_dir("simulate_json");
  std::ofstream cfg(dir / "cfg.json");
  cfg << R"({"schema_version":1,
             "instance":{"name":"bimodal","capacity":0.5},
             "policy":{"name":"kdep"},
             "horizons":[120,240],
             "replications":2,
             "seed":7})";
  cfg.close();
  REQUIRE(run_cli("simulate --config " + (dir / "cfg.json").string() + " --out " +
                  dir.string()) == 0);
  auto rows = read_csv_rows((dir / "regret.csv").string());
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][1] > 0.0);

  std::ofstream bad(dir / "bad.json");
  bad << "{ not json";
  bad.close();
  CHECK(run_cli("simulate --config " + (dir / "bad.json").string() + " --out " +
                dir.string()) == 2);
}

TEST_CASE("lowerbound dump satisfies the perturbation sign property") {
  fs::path dir = fresh_dir("lowerbound");
  REQUIRE(run_cli("lowerbound --c 0.25 --K 2 --I 1,3 --out " + dir.string()) == 0);
  auto params = read_csv_rows((dir / "lb_params.csv").string());
  REQUIRE(params.size() == 1);
  CHECK(params[0][0] == 0.25);
  CHECK(params[0][1] == Catch::Approx(0.2));

  // v_I <= v_0 strictly outside the bumped bins 1 and 3
  auto grid = read_csv_rows((dir / "v_grid.csv").string());
  REQUIRE(grid.size() > 1000);
  const double c = 0.25, s = 0.2, delta = 0.5;
  for (const auto& row : grid) {
    const double x = row[0];
    const int bin = static_cast<int>(std::floor(x * 2.0 / c)) + 1;
    if (bin == 1 || bin == 3) continue;
    const double v0 = s * (1.0 - delta * x) / (c * (1.0 - s) * (1.0 - delta));
    CHECK(row[1] <= v0 + 1e-9);
  }

  CHECK(run_cli("lowerbound --c 0.25 --K 2 --I 1 --out " + dir.string()) == 2);
  CHECK(run_cli("lowerbound --c 0.4 --K 2 --I 1,3 --out " + dir.string()) == 2);
}

TEST_CASE("fit recovers a synthetic rate") {
  fs::path dir = fresh_dir("fit");
  std::ofstream csv(dir / "trace.csv");
  csv << "T,mean\n";
  for (long long t : {1000, 2000, 4000, 8000})
    csv << t << ',' << contassort::format_double(0.5 * std::log(double(t))) << "\n";
  csv.close();
  REQUIRE(run_cli("fit --data " + (dir / "trace.csv").string() + " --model LOG --out " +
                  dir.string()) == 0);
  auto rows = read_csv_rows((dir / "fit.csv").string());
  REQUIRE(!rows.empty());
  CHECK(rows[0][0] == Catch::Approx(0.5).margin(1e-9));

  CHECK(run_cli("fit --data " + (dir / "trace.csv").string() + " --model BAD --out " +
                dir.string()) == 2);
  CHECK(run_cli("fit --model LOG --out " + dir.string()) == 2);
  CHECK(run_cli("fit --data /nonexistent.csv --model LOG --out " + dir.string()) == 3);
}

TEST_CASE("unknown arguments are config errors") {
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("solve --no-such-flag") == 2);
}
