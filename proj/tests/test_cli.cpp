#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

// EIT_CLI_PATH is injected by the build: absolute path of the CLI binary.

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const char* path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string("\"") + EIT_CLI_PATH + "\" " + args + " > cli_out.tmp 2> cli_err.tmp";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp("cli_out.tmp");
  r.err = slurp("cli_err.tmp");
  std::remove("cli_out.tmp");
  std::remove("cli_err.tmp");
  return r;
}

// Small fast grid reused across invocations.
const std::string kSmallGrid = "--set omega_grid=0.25,0.7 --set z_grid=0:50:6";

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("").code == 2);
  CHECK(run_cli("frobnicate").code == 2);
  CHECK(run_cli("sweep --no-such-flag").code == 2);
}

TEST_CASE("help exits cleanly") {
  const auto r = run_cli("--help");
  CHECK(r.code == 0);
  CHECK(r.out.find("sweep") != std::string::npos);
  CHECK(r.out.find("compare") != std::string::npos);
  CHECK(r.out.find("scales") != std::string::npos);
}

TEST_CASE("sweep writes a deterministic table") {
  const std::string cmd = std::string("sweep ") + kSmallGrid + " --out cli_table.tmp";
  const auto first = run_cli(cmd);
  CHECK(first.code == 0);
  const std::string table1 = slurp("cli_table.tmp");
  CHECK(table1.rfind("omega_over_gamma,z_C_over_gamma,theta,beam,", 0) == 0);
  // 2 omegas x 6 positions x 2 beams + header
  int lines = 0;
  for (const char c : table1)
    if (c == '\n') ++lines;
  CHECK(lines == 1 + 2 * 6 * 2);

  const auto second = run_cli(cmd);
  CHECK(second.code == 0);
  CHECK(slurp("cli_table.tmp") == table1);
  std::remove("cli_table.tmp");

  SUBCASE("the same table goes to standard output without --out") {
    const auto piped = run_cli(std::string("sweep ") + kSmallGrid);
    CHECK(piped.code == 0);
    CHECK(piped.out == table1);
  }
}

TEST_CASE("config file and --set overrides reach the engine") {
  {
    std::ofstream cfg("cli_config.tmp");
    cfg << "# tiny run\n";
    cfg << "omega_grid = 0.25\n";
    cfg << "z_grid = 0:10:3\n";
    cfg << "mode = analytic\n";
  }
  const auto r = run_cli("sweep --config cli_config.tmp");
  CHECK(r.code == 0);
  int lines = 0;
  for (const char c : r.out)
    if (c == '\n') ++lines;
  CHECK(lines == 1 + 1 * 3 * 2);

  SUBCASE("--set wins over the file") {
    const auto r2 = run_cli("sweep --config cli_config.tmp --set z_grid=0:10:5");
    CHECK(r2.code == 0);
    int lines2 = 0;
    for (const char c : r2.out)
      if (c == '\n') ++lines2;
    CHECK(lines2 == 1 + 1 * 5 * 2);
  }
  std::remove("cli_config.tmp");
}

TEST_CASE("configuration mistakes exit with code 2") {
  CHECK(run_cli("sweep --set no_such_key=1").code == 2);
  CHECK(run_cli("sweep --set alpha1=abc").code == 2);
  CHECK(run_cli("sweep --set omega_grid=").code == 2);
  CHECK(run_cli("sweep --set z_grid=5,1").code == 2);
  CHECK(run_cli("sweep --mode magic").code == 2);
  CHECK(run_cli("sweep --config no_such_file.tmp").code == 2);
  const auto r = run_cli("sweep --set no_such_key=1");
  CHECK(r.err.find("config error") != std::string::npos);
}

TEST_CASE("compare reports pass on the reference configuration") {
  const auto r = run_cli(std::string("compare ") + kSmallGrid);
  CHECK(r.code == 0);
  CHECK(r.out.find("verdict                   pass") != std::string::npos);
  CHECK(r.out.find("max_rel_deviation") != std::string::npos);

  SUBCASE("--out also writes the underlying table") {
    const auto r2 = run_cli(std::string("compare ") + kSmallGrid + " --out cli_cmp.tmp");
    CHECK(r2.code == 0);
    const std::string table = slurp("cli_cmp.tmp");
    CHECK(table.rfind("omega_over_gamma,", 0) == 0);
    std::remove("cli_cmp.tmp");
  }
}

TEST_CASE("tolerance violations exit with code 1") {
  const auto r =
      run_cli(std::string("compare ") + kSmallGrid + " --set corrupt_diffusion=0.05");
  CHECK(r.code == 1);
  CHECK(r.out.find("verdict                   fail") != std::string::npos);
}

TEST_CASE("numerical failures exit with code 3") {
  // A position jump so large the interval integrator refuses it.
  const auto r = run_cli("compare --set omega_grid=0.25 --set z_grid=0,1e12");
  CHECK(r.code == 3);
  CHECK(r.err.find("numerical failure") != std::string::npos);
}

TEST_CASE("scales prints the length-scale report") {
  const auto r = run_cli("scales");
  CHECK(r.code == 0);
  CHECK(r.out.find("z_abs_C_over_gamma") != std::string::npos);
  CHECK(r.out.find("fluctuation_peak_over_gamma") != std::string::npos);

  SUBCASE("scales respects --out") {
    const auto r2 = run_cli("scales --out cli_scales.tmp");
    CHECK(r2.code == 0);
    CHECK(r2.out.empty());
    CHECK(slurp("cli_scales.tmp").find("z_osc_C_over_gamma") != std::string::npos);
    std::remove("cli_scales.tmp");
  }
}
