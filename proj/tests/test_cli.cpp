// End-to-end checks of the command-line binary: artifact reproducibility,
// the verify example, and the exit-code contract.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "auerbach_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(AUERBACH_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("bases run is reproducible byte-for-byte apart from the manifest") {
  const fs::path dir = work_dir();
  write(dir / "p4.json", R"({"dim":2,"variant":"pnorm","p":4.0})");
  const std::string base = "bases --body " + (dir / "p4.json").string() +
                           " --starts 60 --seed 7 --out ";
  REQUIRE(run_cli(base + (dir / "a").string()) == 0);
  REQUIRE(run_cli(base + (dir / "b").string()) == 0);
  CHECK(slurp(dir / "a" / "run.json") == slurp(dir / "b" / "run.json"));
  CHECK(slurp(dir / "a" / "classes.csv") == slurp(dir / "b" / "classes.csv"));
  CHECK(!slurp(dir / "a" / "run.json").empty());
}

TEST_CASE("verify reports a tiny residual for the standard frame") {
  const fs::path dir = work_dir();
  write(dir / "p3_frame.json",
        R"({"dim":2,"variant":"pnorm","p":3.0,"frame":{"dim":2,"data":[1,0,0,1]}})");
  REQUIRE(run_cli("verify --body " + (dir / "p3_frame.json").string() +
                  " --out " + (dir / "verify").string()) == 0);
  const std::string report = slurp(dir / "verify" / "verify.json");
  const auto pos = report.find("\"residual\": ");
  REQUIRE(pos != std::string::npos);
  const double residual = std::stod(report.substr(pos + 12));
  CHECK(residual < 1e-12);
  CHECK(report.find("\"passed\": true") != std::string::npos);
}

TEST_CASE("exit codes distinguish config errors from numeric failures") {
  const fs::path dir = work_dir();
  CHECK(run_cli("") == 2);  // missing subcommand
  CHECK(run_cli("bases --body " + (dir / "missing.json").string()) == 2);
  write(dir / "bad.json", R"({"dim":2,"variant":"cube"})");
  CHECK(run_cli("bases --body " + (dir / "bad.json").string()) == 2);
  CHECK(run_cli("bounds --n nonsense --out " + (dir / "x").string()) == 2);

  // Numerically dependent frame: functional construction must fail.
  write(dir / "singular.json",
        R"({"dim":2,"variant":"pnorm","p":4.0,)"
        R"("frame":{"dim":2,"data":[1.0,1.0,0.0,1e-14]}})");
  CHECK(run_cli("verify --body " + (dir / "singular.json").string() +
                " --out " + (dir / "y").string()) == 3);

  CHECK(run_cli("--help") == 0);
}

TEST_SUITE_END();
