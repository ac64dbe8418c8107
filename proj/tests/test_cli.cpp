#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const fs::path log = fs::temp_directory_path() / "vschro_cli_test.log";
  const std::string cmd = std::string(VSCHRO_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

fs::path write_cfg(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / (name + ".cfg");
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("list prints the bundled experiments") {
  const auto r = run("list");
  CHECK(r.code == 0);
#if VSCHRO_EXPECT_BUNDLED
  CHECK(r.out.find("rotation_r15") != std::string::npos);
  CHECK(r.out.find("diag_baseline") != std::string::npos);
#endif
}

TEST_CASE("exit codes") {
  CHECK(run("").code == 2);
  CHECK(run("validate").code == 2);
  CHECK(run("validate --config /no/such/file.cfg").code == 2);
  const auto tiny = write_cfg("vschro_tiny", "[problem]\nn = 3\n[checks]\nnames = ultracontractivity\n");
  const auto r = run("verify --config " + tiny.string());
  CHECK(r.code == 2);
  CHECK(r.out.find("use n >=") != std::string::npos);
  const auto unknown = write_cfg("vschro_unknown", "[checks]\nnames = contraction, imaginary\n");
  CHECK(run("verify --config " + unknown.string()).code == 2);
  const auto flipped =
      write_cfg("vschro_flipped", "[problem]\nV.c = -2\nflip = true\nn = 60\n[run]\nn_steps = 20\n[checks]\nnames = contraction\n");
  const auto f = run("verify --config " + flipped.string());
  CHECK(f.code == 1);
  CHECK(f.out.find("FAIL contraction") != std::string::npos);
}

TEST_CASE("report bundle round trip") {
  const fs::path out = fs::temp_directory_path() / "vschro_cli_report";
  fs::remove_all(out);
  const auto cfg = write_cfg("vschro_ok", "name = ok\n[problem]\nn = 60\n[run]\nn_steps = 20\n[checks]\nnames = contraction, commutator\n");
  CHECK(run("report --config " + cfg.string() + " --out " + out.string() + " --threads 1").code == 0);
  CHECK(fs::exists(out / "MANIFEST"));
  CHECK(fs::exists(out / "results.csv"));
  CHECK(run("report --check-manifest " + out.string()).code == 0);
  { std::ofstream(out / "report.txt", std::ios::app) << "edited\n"; }
  CHECK(run("report --check-manifest " + out.string()).code == 1);
  fs::remove_all(out);
}

TEST_CASE("evolve writes a norm trajectory") {
  const fs::path out = fs::temp_directory_path() / "vschro_cli_evolve";
  fs::remove_all(out);
  const auto cfg = write_cfg("vschro_ev", "[problem]\nn = 40\n[run]\nn_steps = 10\nrecord_every = 5\n");
  CHECK(run("evolve --config " + cfg.string() + " --out " + out.string()).code == 0);
  std::ifstream in(out / "trajectory.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "time,p,norm");
  int rows = 1;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 1 + 3 * 4);
  fs::remove_all(out);
}
