#include "vschro/suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "vschro/error.hpp"

namespace vschro {

namespace {

const std::vector<std::string> kResize = {"extent", "n", "dim"};

std::vector<std::string> with_resize(std::vector<std::string> keys) {
  keys.insert(keys.end(), kResize.begin(), kResize.end());
  return keys;
}

const std::map<std::string, std::vector<std::string>>& override_table() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"contraction", with_resize({"n_steps", "t_final", "slack"})},
      {"consistency", with_resize({"lambda", "tau", "horizon", "tol"})},
      {"positivity", with_resize({"samples", "t", "n_steps", "tol", "assume_positive"})},
      {"domination", with_resize({"times", "tau", "tol"})},
      {"ultracontractivity", with_resize({"t_lo", "t_hi", "points", "steps_per_t", "tol"})},
      {"trotter_order", with_resize({"t", "schedule"})},
      {"nongeneration", {"lambda", "extents", "h", "probe_x"}},
      {"shift_invariance", {"mu", "sigmas", "extent", "n", "tol", "control"}},
      {"degenerate_kernel", with_resize({"t", "n_steps", "center", "width", "match_tol", "mismatch_min"})},
      {"hypotheses", with_resize({"alpha", "growth_tol"})},
      {"commutator", {"extent", "n", "lo", "hi"}},
      {"compactness", with_resize({"k", "spacing_tol", "collapse_factor"})},
  };
  return table;
}

// The configured problem with any per-check resize applied.
ProblemSpec check_spec(const ExperimentConfig& cfg, const std::string& check) {
  ProblemSpec s = cfg.problem;
  s.dim = override_int(cfg, check, "dim", s.dim);
  s = s.resized(override_double(cfg, check, "extent", s.extent), override_int(cfg, check, "n", s.n));
  if (s.dim != 1 && s.dim != 2) throw ConfigError(check + ": dim must be 1 or 2");
  if (s.n < 3) throw ConfigError(check + ": n must be at least 3");
  if (s.unknowns() > kMaxUnknowns) throw ConfigError(check + ": resized problem exceeds the unknown cap");
  return s;
}

std::vector<int> to_ints(const std::vector<double>& v) {
  std::vector<int> out;
  for (double d : v) out.push_back(static_cast<int>(std::lround(d)));
  return out;
}

using Runner = std::function<PropertyCheckResult(const ExperimentConfig&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table = {
      {"contraction",
       [](const ExperimentConfig& cfg) {
         const Problem p = build_problem(check_spec(cfg, "contraction"));
         SplitConfig run = cfg.run;
         run.scheme = SplitScheme::lie;
         run.diffusion_substep = DiffusionScheme::backward_euler;
         run.n_steps = override_int(cfg, "contraction", "n_steps", run.n_steps);
         run.t_final = override_double(cfg, "contraction", "t_final", run.t_final);
         run.linear_solver_tol = std::min(run.linear_solver_tol, 1e-12);
         run.record_every = 1;
         run.keep_snapshots = false;
         run.validate();
         const auto f = gaussian_field(p.grid, p.spec.m, 0.5, 1.0, 0.5);
         return run_contraction_check(trotter_evolve(p.a, p.v, f, run),
                                      override_double(cfg, "contraction", "slack", 1e-8));
       }},
      {"consistency",
       [](const ExperimentConfig& cfg) {
         const Problem p = build_problem(check_spec(cfg, "consistency"));
         ConsistencyOptions o;
         o.lambda = override_double(cfg, "consistency", "lambda", o.lambda);
         o.tau = override_double(cfg, "consistency", "tau", o.tau);
         o.horizon = override_double(cfg, "consistency", "horizon", o.horizon);
         o.tol = override_double(cfg, "consistency", "tol", o.tol);
         const auto f = gaussian_field(p.grid, p.spec.m, 0.0, 1.0, 0.5);
         const auto g = gaussian_field(p.grid, p.spec.m, 0.5, 1.5, -0.5);
         return run_consistency_check(p, f, g, o);
       }},
      {"positivity",
       [](const ExperimentConfig& cfg) {
         const Problem p = build_problem(check_spec(cfg, "positivity"));
         PositivityOptions o;
         o.samples = override_int(cfg, "positivity", "samples", o.samples);
         o.t = override_double(cfg, "positivity", "t", o.t);
         o.n_steps = override_int(cfg, "positivity", "n_steps", o.n_steps);
         o.tol = override_double(cfg, "positivity", "tol", o.tol);
         o.assume_positive = override_bool(cfg, "positivity", "assume_positive", o.assume_positive);
         o.seed = cfg.seed;
         return run_positivity_check(p, o);
       }},
      {"domination",
       [](const ExperimentConfig& cfg) {
         const Problem p = build_problem(check_spec(cfg, "domination"));
         DominationOptions o;
         o.times = override_list(cfg, "domination", "times", o.times);
         o.tau = override_double(cfg, "domination", "tau", o.tau);
         o.tol = override_double(cfg, "domination", "tol", o.tol);
         return run_domination_check(p, gaussian_field(p.grid, p.spec.m, 0.5, 1.0, 0.5), o);
       }},
      {"ultracontractivity",
       [](const ExperimentConfig& cfg) {
         const Problem p = build_problem(check_spec(cfg, "ultracontractivity"));
         KernelSweepOptions o;
         o.t_lo = override_double(cfg, "ultracontractivity", "t_lo", o.t_lo);
         o.t_hi = override_double(cfg, "ultracontractivity", "t_hi", o.t_hi);
         o.points = override_int(cfg, "ultracontractivity", "points", o.points);
         o.steps_per_t = override_int(cfg, "ultracontractivity", "steps_per_t", o.steps_per_t);
         return run_ultracontractivity_fit(kernel_sweep(p, o), p.spec.dim,
                                           override_double(cfg, "ultracontractivity", "tol", 0.1));
       }},
      {"trotter_order",
       [](const ExperimentConfig& cfg) {
         const Problem p = build_problem(check_spec(cfg, "trotter_order"));
         const double t = override_double(cfg, "trotter_order", "t", 0.5);
         const auto schedule = to_ints(override_list(cfg, "trotter_order", "schedule", {8, 16, 32, 64}));
         const double w = 0.15 * p.grid.extent();
         return run_trotter_order_check(p, gaussian_field(p.grid, p.spec.m, 0.5 * w, w, 0.5), t, schedule);
       }},
      {"nongeneration",
       [](const ExperimentConfig& cfg) {
         NongenerationOptions o;
         o.lambda = override_double(cfg, "nongeneration", "lambda", o.lambda);
         o.extents = override_list(cfg, "nongeneration", "extents", o.extents);
         o.h = override_double(cfg, "nongeneration", "h", o.h);
         o.probe_x = override_double(cfg, "nongeneration", "probe_x", o.probe_x);
         return run_nongeneration_demo(o);
       }},
      {"shift_invariance",
       [](const ExperimentConfig& cfg) {
         ShiftInvarianceOptions o;
         o.mu = override_double(cfg, "shift_invariance", "mu", o.mu);
         o.sigmas = override_list(cfg, "shift_invariance", "sigmas", o.sigmas);
         o.extent = override_double(cfg, "shift_invariance", "extent", o.extent);
         o.n = override_int(cfg, "shift_invariance", "n", o.n);
         o.tol = override_double(cfg, "shift_invariance", "tol", o.tol);
         o.control = override_bool(cfg, "shift_invariance", "control", o.control);
         return run_shift_invariance_check(o);
       }},
      {"degenerate_kernel",
       [](const ExperimentConfig& cfg) {
         const ProblemSpec s = check_spec(cfg, "degenerate_kernel");
         DegenerateOptions o;
         o.t = override_double(cfg, "degenerate_kernel", "t", o.t);
         o.n_steps = override_int(cfg, "degenerate_kernel", "n_steps", o.n_steps);
         o.match_tol = override_double(cfg, "degenerate_kernel", "match_tol", o.match_tol);
         o.mismatch_min = override_double(cfg, "degenerate_kernel", "mismatch_min", o.mismatch_min);
         const Grid g = build_grid(s.dim, s.extent, s.n);
         const double center = override_double(cfg, "degenerate_kernel", "center", 1.5);
         const double width = override_double(cfg, "degenerate_kernel", "width", 1.0);
         return run_degenerate_kernel_check(gaussian_field(g, 1, center, width), o);
       }},
      {"hypotheses",
       [](const ExperimentConfig& cfg) {
         ProblemSpec s = check_spec(cfg, "hypotheses");
         HypothesisCheckOptions o;
         o.alpha = override_double(cfg, "hypotheses", "alpha", s.alpha);
         o.growth_tol = override_double(cfg, "hypotheses", "growth_tol", o.growth_tol);
         return run_hypothesis_check(s, o);
       }},
      {"commutator",
       [](const ExperimentConfig& cfg) {
         CommutatorOptions o;
         o.extent = override_double(cfg, "commutator", "extent", o.extent);
         o.n = override_int(cfg, "commutator", "n", o.n);
         o.lo = override_double(cfg, "commutator", "lo", o.lo);
         o.hi = override_double(cfg, "commutator", "hi", o.hi);
         return run_commutator_check(o);
       }},
      {"compactness",
       [](const ExperimentConfig& cfg) {
         CompactnessOptions o;
         o.k = override_int(cfg, "compactness", "k", o.k);
         o.spacing_tol = override_double(cfg, "compactness", "spacing_tol", o.spacing_tol);
         o.collapse_factor = override_double(cfg, "compactness", "collapse_factor", o.collapse_factor);
         return run_compactness_check(check_spec(cfg, "compactness"), o);
       }},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = {
      "hypotheses",  "contraction",   "consistency",      "positivity",        "domination", "ultracontractivity",
      "trotter_order", "nongeneration", "shift_invariance", "degenerate_kernel", "commutator", "compactness"};
  return names;
}

const std::vector<std::string>& check_override_keys(const std::string& check) {
  const auto& t = override_table();
  auto it = t.find(check);
  if (it == t.end()) throw ConfigError("unknown check '" + check + "'");
  return it->second;
}

PropertyCheckResult run_check(const std::string& name, const ExperimentConfig& cfg) {
  const auto& t = runners();
  auto it = t.find(name);
  if (it == t.end()) throw ConfigError("unknown check '" + name + "'");
  try {
    return it->second(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(name + ": " + e.what());
  }
}

std::vector<PropertyCheckResult> run_checks(const ExperimentConfig& cfg) {
  std::vector<PropertyCheckResult> out;
  for (const auto& name : cfg.checks) out.push_back(run_check(name, cfg));
  return out;
}

}  // namespace vschro
