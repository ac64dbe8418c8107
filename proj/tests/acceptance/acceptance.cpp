// Acceptance gate: one PASS/FAIL line per criterion, with its runtime budget.
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "vschro/config.hpp"
#include "vschro/error.hpp"
#include "vschro/registry.hpp"
#include "vschro/suite.hpp"
#include "vschro/verify.hpp"

using namespace vschro;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string summarize(const PropertyCheckResult& r) {
  std::string s = r.name + (r.passed ? " ok" : " failed");
  for (const auto& [k, v] : r.measured) s += " " + k + "=" + num(v);
  return s;
}

ProblemSpec rotation(double extent, int n) {
  ExampleSpec ex;
  ex.name = "rotation";
  return example_problem(ex, extent, n);
}

ProblemSpec constant_potential(double v11, double v12, double v21, double v22) {
  ProblemSpec s;
  s.extent = 5.0;
  s.n = 99;
  s.potential = {"constant_V", {{"v11", v11}, {"v12", v12}, {"v21", v21}, {"v22", v22}}, ""};
  return s;
}

Outcome trotter() {
  const Problem p = build_problem(rotation(8.0, 64));
  const auto f = gaussian_field(p.grid, 2, 0.6, 1.2, 0.5);
  const auto r = run_trotter_order_check(p, f, 0.5, {8, 16, 32, 64});
  return {r.passed, summarize(r)};
}

Outcome contraction() {
  std::string detail;
  bool ok = true;
  int used = 0;
  for (const auto& b : bundled_experiments()) {
    ExperimentConfig cfg = parse_config(b.text, b.name);
    const Problem p = build_problem(cfg.problem);
    if (!validate_hypotheses(p.q, p.v, cfg.problem.alpha).passes()) {
      detail += b.name + " skipped (validator); ";
      continue;
    }
    const auto r = run_check("contraction", cfg);
    ok = ok && r.passed;
    ++used;
    detail += b.name + (r.passed ? " ok; " : " FAILED; ");
  }
  ExperimentConfig control = parse_config(
      "name = flipped\n[problem]\nV = diag_V\nV.c = -2\nflip = true\nn = 200\n[run]\nn_steps = 50\nt_final = 1\n",
      "control");
  const auto c = run_check("contraction", control);
  detail += "flipped control " + std::string(c.passed ? "passed (bad)" : "failed (expected)");
  return {ok && used > 0 && !c.passed, detail};
}

Outcome positivity() {
  PositivityOptions o;
  o.samples = 50;
  const auto pos = run_positivity_check(build_problem(constant_potential(-2, 1, 0.5, -2)), o);
  const auto neg = run_positivity_check(build_problem(constant_potential(-2, -1, -1, -2)), o);
  const bool ok = pos.passed && pos.measured.at("min_random_inputs") >= -1e-10 && neg.passed &&
                  neg.measured.at("probe_min_component") < -1e-10;
  return {ok, summarize(pos) + " | " + summarize(neg)};
}

Outcome domination() {
  ProblemSpec diag;
  diag.extent = 20.0;
  diag.n = 800;
  const Problem pr = build_problem(rotation(20.0, 800));
  const Problem pd = build_problem(diag);
  const auto a = run_domination_check(pr, gaussian_field(pr.grid, 2, 0.5, 1.0, 0.5));
  const auto b = run_domination_check(pd, gaussian_field(pd.grid, 2, 0.5, 1.0, 0.5));
  return {a.passed && b.passed, summarize(a) + " | " + summarize(b)};
}

Outcome ultracontractivity() {
  const Problem p1 = build_problem(rotation(10.0, 2000));
  const auto r1 = run_ultracontractivity_fit(kernel_sweep(p1, {0.002, 0.02, 6, 40}), 1, 0.1);
  ProblemSpec diag;
  diag.dim = 2;
  diag.extent = 2.0;
  diag.n = 160;
  const Problem p2 = build_problem(diag);
  const auto r2 = run_ultracontractivity_fit(kernel_sweep(p2, {0.008, 0.05, 6, 40}), 2, 0.1);
  return {r1.passed && r2.passed, summarize(r1) + " | " + summarize(r2)};
}

Outcome nongeneration() {
  const auto r = run_nongeneration_demo({1.0, {50.0, 100.0, 200.0}, 0.1, 1000.0});
  const double xu2 = r.measured.at("x_u2_at_probe");
  return {r.passed && xu2 >= 0.99 && xu2 <= 1.01, summarize(r)};
}

Outcome nonanalytic() {
  ShiftInvarianceOptions o;
  const auto r = run_shift_invariance_check(o);
  o.control = true;
  o.sigmas = {5.0};
  const auto c = run_shift_invariance_check(o);
  const bool ok = r.passed && c.measured.at("ratio_sigma5") < 0.5;
  return {ok, summarize(r) + " | " + summarize(c)};
}

Outcome degenerate() {
  const Grid g = build_grid(1, 20.0, 399);
  const auto r = run_degenerate_kernel_check(gaussian_field(g, 1, 1.5, 1.0));
  return {r.passed, summarize(r)};
}

Outcome hypotheses() {
  const auto r = run_hypothesis_check(rotation(10.0, 400), {0.45, 0.05, {-3.0, -1.0, 1.0, 3.0}});
  return {r.passed, summarize(r)};
}

Outcome commutator() {
  const auto r = run_commutator_check({10.0, 200, 0.35, 0.65});
  return {r.passed, summarize(r)};
}

Outcome compactness() {
  const auto a = run_compactness_check(rotation(10.0, 399));
  ExampleSpec ex;
  ex.name = "degenerate";
  const auto b = run_compactness_check(example_problem(ex, 20.0, 399));
  const bool ok = a.passed && a.measured.at("predicted_compact") == 1.0 && b.passed &&
                  b.measured.at("predicted_compact") == 0.0;
  return {ok, summarize(a) + " | " + summarize(b)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "trotter-oracle equivalence", 10, trotter},
      {2, "contraction suite", 30, contraction},
      {3, "positivity iff off-diagonal nonnegative", 20, positivity},
      {4, "pointwise domination", 20, domination},
      {5, "ultracontractivity exponent", 60, ultracontractivity},
      {6, "non-generation anchor", 30, nongeneration},
      {7, "non-analyticity witness", 60, nonanalytic},
      {8, "degenerate factorization", 10, degenerate},
      {9, "hypothesis validator", 10, hypotheses},
      {10, "commutator identity", 10, commutator},
      {11, "compactness contrast", 120, compactness},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = out.ok && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s criterion %d: %s (%.2f s of %.0f s)%s\n    %s\n", pass ? "PASS" : "FAIL", c.id, c.name, secs,
                c.budget_s, in_time ? "" : " over budget", out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
