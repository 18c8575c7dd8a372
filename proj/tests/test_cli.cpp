#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string cli_path() { return ACCORD_CLI_PATH; }

int run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("accord_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string grid_csv() {
  std::string csv = "object_id,instrument_id,replicate,variable,value\n";
  const double a[] = {80, 60, 70, 30, 90, 55};
  const double b[] = {50, 40, 60, 55, 70, 35};
  for (int i = 0; i < 6; ++i) {
    csv += "P" + std::to_string(i + 1) + ",AH,0,QLTY," + std::to_string(a[i]) +
           "\n";
    csv += "P" + std::to_string(i + 1) + ",EP,0,QLTY," + std::to_string(b[i]) +
           "\n";
  }
  return csv;
}

}  // namespace

TEST_CASE("cli rejects unknown subcommands and missing flags") {
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("bland-altman") == 2);  // --input is required
}

TEST_CASE("cli exits 2 on unreadable input") {
  auto dir = scratch_dir("io");
  CHECK(run("bland-altman --input /nonexistent/x.csv --out " + dir.string()) ==
        2);
}

TEST_CASE("cli bland-altman writes a deterministic report") {
  auto dir = scratch_dir("ba");
  const fs::path in = dir / "in.csv";
  write(in, grid_csv());
  const std::string args = "bland-altman --input " + in.string() + " --svg " +
                           "--format csv --out ";

  REQUIRE(run(args + (dir / "run1").string()) == 0);
  REQUIRE(run(args + (dir / "run2").string()) == 0);

  const std::string r1 = slurp(dir / "run1" / "report.json");
  const std::string r2 = slurp(dir / "run2" / "report.json");
  CHECK(!r1.empty());
  CHECK(r1 == r2);
  CHECK(r1.find("\"analysis\": \"bland_altman\"") != std::string::npos);
  CHECK(fs::exists(dir / "run1" / "bland_altman.svg"));
  CHECK(fs::exists(dir / "run1" / "bland_altman_points.csv"));
  CHECK(slurp(dir / "run1" / "bland_altman.svg") ==
        slurp(dir / "run2" / "bland_altman.svg"));
}

TEST_CASE("cli bland-altman exits 2 on too few pairs") {
  auto dir = scratch_dir("few");
  const fs::path in = dir / "in.csv";
  write(in,
        "object_id,instrument_id,replicate,variable,value\n"
        "P1,AH,0,QLTY,10\nP1,EP,0,QLTY,12\n");
  CHECK(run("bland-altman --input " + in.string() + " --out " +
            dir.string()) == 2);
}

TEST_CASE("cli accuracy and icc run end to end") {
  auto dir = scratch_dir("acc");
  const fs::path in = dir / "in.csv";
  write(in, grid_csv());
  REQUIRE(run("accuracy --input " + in.string() + " --out " +
              (dir / "acc").string()) == 0);
  const std::string rep = slurp(dir / "acc" / "report.json");
  CHECK(rep.find("\"analysis\": \"accuracy\"") != std::string::npos);
  CHECK(rep.find("\"tool_version\": \"0.1.0\"") != std::string::npos);

  REQUIRE(run("icc --input " + in.string() + " --out " +
              (dir / "icc").string()) == 0);
  CHECK(slurp(dir / "icc" / "report.json").find("\"rho\"") !=
        std::string::npos);
}

TEST_CASE("cli score") {
  auto dir = scratch_dir("score");
  const fs::path in = dir / "outcomes.csv";
  write(in,
        "object_id,suite_id,case_id,granularity,outcome\n"
        "P1,AH,t1,method,pass\nP1,AH,t2,method,fail\n");
  REQUIRE(run("score --input " + in.string() + " --granularity method --out " +
              dir.string()) == 0);
  CHECK(slurp(dir / "report.json").find("\"score\": 50") != std::string::npos);
}

TEST_CASE("cli simulate is deterministic across runs") {
  auto dir = scratch_dir("sim");
  const fs::path spec = dir / "spec.json";
  write(spec, R"({"n_objects": 8,
      "instruments": [{"id": "A", "bias": 0}, {"id": "B", "bias": -10}],
      "sigma_object": 5, "sigma_interaction": 3, "sigma_noise": 1,
      "replicates": 1, "seed": 11})");
  const std::string args = "simulate --spec " + spec.string() +
                           " --estimator d_bar --reps 30 --out ";
  REQUIRE(run(args + (dir / "a").string()) == 0);
  REQUIRE(run(args + (dir / "b").string()) == 0);
  const std::string ra = slurp(dir / "a" / "report.json");
  CHECK(ra == slurp(dir / "b" / "report.json"));
  CHECK(ra.find("\"analysis\": \"simulation\"") != std::string::npos);
}
