#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "vschro/config.hpp"
#include "vschro/error.hpp"
#include "vschro/registry.hpp"
#include "vschro/report.hpp"
#include "vschro/suite.hpp"

using namespace vschro;
namespace fs = std::filesystem;

namespace {

const char* kFull = R"(# a comment
name = sample

[problem]
dim = 1
m = 2
extent = 8    # trailing comment
n = 64
Q = constant_Q
Q.q11 = 2
Q.q22 = 1
V = rotation_V
V.r = 1.5
shift = auto
alpha = 0.45

[run]
scheme = lie
diffusion = backward_euler
n_steps = 20
t_final = 0.5
lambda_re = 3
lambda_im = -1

[checks]
names = contraction, trotter_order
trotter_order.schedule = 8 16 32
contraction.slack = 1e-9

[output]
dir = out/sample
seed = 42
)";

fs::path temp_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vschro_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ReportBundle sample_bundle() {
  ExperimentConfig cfg = parse_config(kFull);
  PropertyCheckResult a{"contraction", true, {{"max_rel_increase_p2", 0.0}, {"records", 21}}, 1e-8, "fine"};
  PropertyCheckResult b{"trotter_order", false, {{"lie_order_n16", 0.987654321012345}}, 0.3, "a, \"quoted\" note"};
  return make_report(cfg, {a, b});
}

}  // namespace

TEST_CASE("defaults from an empty config") {
  const auto cfg = parse_config("");
  CHECK(cfg.problem.dim == 1);
  CHECK(cfg.problem.m == 2);
  CHECK(cfg.problem.potential.name == "diag_V");
  CHECK(cfg.checks.empty());
  CHECK(cfg.seed == 1);
}

TEST_CASE("full config parses every section") {
  const auto cfg = parse_config(kFull);
  CHECK(cfg.name == "sample");
  CHECK(cfg.problem.extent == 8.0);
  CHECK(cfg.problem.diffusion.name == "constant_Q");
  CHECK(cfg.problem.diffusion.params.at("q11") == 2.0);
  CHECK(cfg.problem.potential.params.at("r") == 1.5);
  CHECK(cfg.problem.shift == ShiftMode::automatic);
  CHECK(cfg.run.scheme == SplitScheme::lie);
  CHECK(cfg.run.diffusion_substep == DiffusionScheme::backward_euler);
  CHECK(cfg.run.n_steps == 20);
  CHECK(cfg.lambda == cplx(3.0, -1.0));
  CHECK(cfg.checks == std::vector<std::string>{"contraction", "trotter_order"});
  CHECK(override_list(cfg, "trotter_order", "schedule", {}) == std::vector<double>{8, 16, 32});
  CHECK(override_double(cfg, "contraction", "slack", 1.0) == 1e-9);
  CHECK(override_double(cfg, "contraction", "t_final", 7.0) == 7.0);
  CHECK(cfg.output_dir == "out/sample");
  CHECK(cfg.seed == 42);
}

TEST_CASE("echo round-trips") {
  const auto cfg = parse_config(kFull);
  const std::string echo = config_echo(cfg);
  CHECK(config_echo(parse_config(echo)) == echo);
}

TEST_CASE("malformed configs are rejected") {
  const char* bad[] = {
      "[mystery]\n",
      "[problem]\nfoo = 1\n",
      "[problem]\nV = no_such_V\n",
      "[problem]\nV = rotation_V\nV.q = 1\n",
      "[problem]\ndim = 3\n",
      "[problem]\nn = 2\n",
      "[problem]\nn = abc\n",
      "[problem]\nextent = 1.5x\n",
      "[problem]\nn = 5\nn = 6\n",
      "[problem]\ndim = 2\nn = 2000\n",
      "[problem]\nshift = sometimes\n",
      "[problem]\nalpha = 0.5\n",
      "[problem]\nm = 1\n[run]\nsource_component = 1\n",
      "[run]\nn_steps = 0\n",
      "[run]\nsolver_tol = 0.1\n",
      "[checks]\nnames = contraction, nonsense\n",
      "[checks]\ncontraction.bogus = 1\n",
      "[checks]\nfake.n = 1\n",
      "[checks]\ncontraction\n",
      "stray = 1\n",
      "[problem\n",
      "[problem]\nQ = custom_table\n",
  };
  for (const char* text : bad) {
    INFO(text);
    CHECK_THROWS_AS(parse_config(text), ConfigError);
  }
}

TEST_CASE("error messages carry origin and line") {
  try {
    parse_config("[problem]\n\nfoo = 1\n", "x.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("x.cfg:3") != std::string::npos);
  }
}

TEST_CASE("bad override values surface when read") {
  const auto cfg = parse_config("[checks]\ncontraction.slack = lots\n");
  CHECK_THROWS_AS(override_double(cfg, "contraction", "slack", 1.0), ConfigError);
}

TEST_CASE("check registry") {
  const auto& names = check_names();
  CHECK(std::set<std::string>(names.begin(), names.end()).size() == names.size());
  for (const auto& n : names) CHECK_NOTHROW(check_override_keys(n));
  CHECK_THROWS_AS(check_override_keys("nope"), ConfigError);
  CHECK_THROWS_AS(run_check("nope", parse_config("")), ConfigError);
}

TEST_CASE("flipped potential fails contraction") {
  const auto cfg = parse_config("[problem]\nV.c = -2\nflip = true\nn = 50\n[run]\nn_steps = 10\n");
  const auto r = run_check("contraction", cfg);
  CHECK_FALSE(r.passed);
  CHECK(r.measured.at("max_rel_increase_p2") > 0.0);
  CHECK(run_check("contraction", parse_config("[problem]\nn = 50\n[run]\nn_steps = 10\n")).passed);
}

TEST_CASE("tiny grid with an ultracontractivity request is a sizing error") {
  const auto cfg = parse_config("[problem]\nn = 3\n[checks]\nnames = ultracontractivity\n");
  try {
    run_checks(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("use n >=") != std::string::npos);
  }
}

TEST_CASE("per-check resize overrides") {
  const auto cfg = parse_config("[problem]\nn = 20\n[checks]\ncommutator.n = 50\nhypotheses.n = 3000000\n");
  const auto coarse = run_check("commutator", cfg).measured.at("defect_n");
  const auto fine = run_check("commutator", parse_config("")).measured.at("defect_n");
  CHECK(coarse > 3.0 * fine);
  CHECK_THROWS_AS(run_check("hypotheses", cfg), ConfigError);
}

TEST_CASE("bundled registry") {
  const auto& all = bundled_experiments();
#if VSCHRO_EXPECT_BUNDLED
  CHECK(all.size() == 5);
  std::set<std::string> names;
  for (const auto& b : all) {
    names.insert(b.name);
    INFO(b.name);
    const auto cfg = parse_config(b.text, b.name);
    CHECK(cfg.name == b.name);
    CHECK_FALSE(cfg.checks.empty());
  }
  CHECK(names.size() == all.size());
  CHECK(names == std::set<std::string>{"degenerate", "diag_baseline", "nonanalytic", "nongeneration", "rotation_r15"});
  CHECK(find_bundled("rotation_r15") != nullptr);
  CHECK(load_config("bundled:degenerate").problem.potential.name == "degenerate_V");
#else
  CHECK(all.empty());
#endif
  CHECK(find_bundled("missing") == nullptr);
  CHECK_THROWS_AS(load_config("bundled:missing"), ConfigError);
  CHECK_THROWS_AS(load_config("/definitely/not/here.cfg"), ConfigError);
}

TEST_CASE("sha256 test vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("reports render deterministically") {
  const auto a = sample_bundle(), b = sample_bundle();
  CHECK(render_text(a) == render_text(b));
  CHECK(render_csv(a) == render_csv(b));
  CHECK_FALSE(a.all_passed());
  CHECK(render_text(a).find("FAIL trotter_order") != std::string::npos);
}

TEST_CASE("csv and text carry the same values") {
  const auto r = sample_bundle();
  std::istringstream csv(render_csv(r));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "check,passed,quantity,value,tolerance");
  const std::string text = render_text(r);
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string col;
    while (std::getline(ls, col, ',')) cols.push_back(col);
    REQUIRE(cols.size() == 5);
    CHECK(text.find(cols[2] + " = " + cols[3]) != std::string::npos);
  }
  CHECK(rows == 3);
  CHECK(render_csv(r).find("0.987654321012") != std::string::npos);
}

TEST_CASE("manifest verifies and detects tampering") {
  const fs::path dir = temp_dir("manifest");
  const auto files = write_report(sample_bundle(), dir);
  CHECK(files.size() == 4);
  std::string problem;
  CHECK(verify_manifest(dir, &problem));
  const std::string first = slurp(dir / "report.txt");
  write_report(sample_bundle(), dir);
  CHECK(slurp(dir / "report.txt") == first);
  { std::ofstream(dir / "results.csv", std::ios::app) << "extra\n"; }
  CHECK_FALSE(verify_manifest(dir, &problem));
  CHECK(problem.find("results.csv") != std::string::npos);
  fs::remove(dir / "results.csv");
  CHECK_FALSE(verify_manifest(dir, &problem));
  fs::remove_all(dir);
}
