// vschro: run experiments on the vector-valued Schroedinger semigroup.
#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "vschro/config.hpp"
#include "vschro/error.hpp"
#include "vschro/kernels.hpp"
#include "vschro/problem.hpp"
#include "vschro/registry.hpp"
#include "vschro/report.hpp"
#include "vschro/spectral.hpp"
#include "vschro/suite.hpp"

namespace fs = std::filesystem;
using namespace vschro;

namespace {

enum Exit { kOk = 0, kCheckFailed = 1, kConfig = 2, kNumeric = 3 };

struct Common {
  std::string config;
  std::string out;
  long long seed = -1;
  int threads = -1;
};

ExperimentConfig load(const Common& c) {
  if (c.config.empty()) throw ConfigError("--config is required");
  ExperimentConfig cfg = load_config(c.config);
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.seed >= 0) cfg.seed = static_cast<std::uint64_t>(c.seed);
  return cfg;
}

void apply_threads(int flag) {
  int n = flag;
  if (n < 0) {
    const char* env = std::getenv("VSCHRO_THREADS");
    n = env ? std::atoi(env) : 0;
  }
  kernels::set_threads(std::max(0, n));
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::ofstream open_out(const ExperimentConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.output_dir);
  const fs::path p = fs::path(cfg.output_dir) / name;
  std::ofstream out(p);
  if (!out) throw Error("cannot write " + p.string());
  std::cout << "wrote " << p.string() << '\n';
  return out;
}

std::size_t center_cell(const Grid& g) {
  const int c = g.n_per_axis() / 2;
  return g.dim() == 2 ? g.flat(c, c) : g.flat(c);
}

int cmd_list() {
  for (const auto& b : bundled_experiments()) std::cout << b.name << '\n';
  return kOk;
}

int cmd_validate(const ExperimentConfig& cfg) {
  const Problem p = build_problem(cfg.problem);
  const auto rep = validate_hypotheses(p.q, p.v, cfg.problem.alpha);
  std::cout << "experiment " << cfg.name << "\n"
            << "unknowns " << cfg.problem.unknowns() << "\n"
            << "eta1 " << num(rep.eta1) << "\neta2 " << num(rep.eta2) << "\ndissipativity_margin "
            << num(rep.dissipativity_margin) << "\ngrowth_sup " << num(rep.growth_sup) << "\noffdiag_min "
            << num(rep.offdiag_min) << "\napplied_shift " << num(p.applied_shift) << '\n';
  if (!rep.notes.empty()) std::cout << "notes " << rep.notes << '\n';
  std::cout << (rep.passes() ? "hypotheses satisfied" : "hypotheses violated") << '\n';
  return rep.passes() ? kOk : kCheckFailed;
}

int cmd_evolve(const ExperimentConfig& cfg) {
  const Problem p = build_problem(cfg.problem);
  const auto f = gaussian_field(p.grid, p.spec.m, 0.0, 1.0);
  const Trajectory traj = trotter_evolve(p.a, p.v, f, cfg.run);
  {
    auto out = open_out(cfg, "trajectory.csv");
    out << "time,p,norm\n";
    static const char* ps[] = {"1", "2", "4", "inf"};
    for (std::size_t i = 0; i < traj.times.size(); ++i)
      for (int j = 0; j < 4; ++j) out << num(traj.times[i]) << ',' << ps[j] << ',' << num(traj.norms[i][j]) << '\n';
  }
  {
    auto out = open_out(cfg, "final_state.csv");
    write_csv(traj.final_state(), out);
  }
  std::cout << "steps " << cfg.run.n_steps << "  max_solver_iterations " << traj.max_solver_iterations
            << "  final_l2 " << num(traj.norms.back()[1]) << '\n';
  return kOk;
}

int cmd_resolvent(const ExperimentConfig& cfg) {
  const Problem p = build_problem(cfg.problem);
  const auto f = gaussian_field(p.grid, p.spec.m, 0.0, 1.0);
  const auto sol = solve_resolvent(p.generator(), {cfg.lambda, f, cfg.run.linear_solver_tol, 3});
  if (!sol.converged) throw NumericalError("resolvent: " + sol.diagnostic);
  {
    auto out = open_out(cfg, "resolvent.csv");
    write_csv(sol.u, out);
  }
  const auto norm = operator_norm_estimate(resolvent_map(p.generator(), cfg.lambda), 1e-8, 20000);
  std::cout << "lambda " << num(cfg.lambda.real()) << (cfg.lambda.imag() < 0 ? "" : "+") << num(cfg.lambda.imag())
            << "i\nrelative_residual " << num(sol.relative_residual) << "\nresolvent_norm " << num(norm.value)
            << "\nlambda_times_norm " << num(std::abs(cfg.lambda) * norm.value) << '\n';
  return kOk;
}

int cmd_spectrum(const ExperimentConfig& cfg) {
  const Problem p = build_problem(cfg.problem);
  const auto ev = eigenpairs(p.generator(), cfg.eigen_k, 0.0);
  auto out = open_out(cfg, "spectrum.csv");
  out << "index,real,imag,residual\n";
  for (std::size_t i = 0; i < ev.eigenvalues.size(); ++i) {
    out << i << ',' << num(ev.eigenvalues[i].real()) << ',' << num(ev.eigenvalues[i].imag()) << ','
        << num(ev.residuals[i]) << '\n';
    std::cout << num(ev.eigenvalues[i].real()) << ' ' << num(ev.eigenvalues[i].imag()) << '\n';
  }
  return kOk;
}

int cmd_kernel(const ExperimentConfig& cfg) {
  const Problem p = build_problem(cfg.problem);
  SplitConfig run = cfg.run;
  run.t_final = cfg.kernel_t;
  const auto k = kernel_column({p.a, p.v}, cfg.kernel_t, center_cell(p.grid), cfg.source_component, run);
  auto out = open_out(cfg, "kernel.csv");
  write_csv(k.column, out);
  std::cout << "t " << num(k.t) << "\nsup_abs " << num(k.sup_abs) << '\n';
  return kOk;
}

int cmd_verify(const ExperimentConfig& cfg, bool write) {
  if (cfg.checks.empty()) throw ConfigError("no checks requested in [checks] names");
  std::vector<PropertyCheckResult> results;
  for (const auto& name : cfg.checks) {
    results.push_back(run_check(name, cfg));
    const auto& r = results.back();
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name;
    for (const auto& [k, v] : r.measured) std::cout << "  " << k << "=" << num(v);
    std::cout << '\n';
  }
  const ReportBundle bundle = make_report(cfg, std::move(results));
  if (write) {
    for (const auto& f : write_report(bundle, cfg.output_dir)) std::cout << "wrote " << f.string() << '\n';
    std::string problem;
    if (!verify_manifest(cfg.output_dir, &problem)) throw Error("manifest check failed: " + problem);
  }
  return bundle.all_passed() ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vschro: vector-valued Schroedinger semigroups on truncated grids"};
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub, bool needs_config = true) {
    auto* opt = sub->add_option("--config", common.config, "config file or bundled:<name>");
    if (needs_config) opt->required();
    sub->add_option("--out", common.out, "output directory");
    sub->add_option("--seed", common.seed, "random seed");
    sub->add_option("--threads", common.threads, "OpenMP threads, 0 = auto");
  };
  std::string manifest_dir;
  auto* list = app.add_subcommand("list", "list bundled experiments");
  auto* validate = app.add_subcommand("validate", "check the standing hypotheses");
  auto* evolve = app.add_subcommand("evolve", "run the splitting scheme, export norms");
  auto* resolvent = app.add_subcommand("resolvent", "solve (lambda - L) u = f");
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues nearest zero");
  auto* kernel = app.add_subcommand("kernel", "one kernel column at kernel_t");
  auto* verify = app.add_subcommand("verify", "run the configured checks");
  auto* report = app.add_subcommand("report", "run the checks and write a report bundle");
  for (auto* sub : {validate, evolve, resolvent, spectrum, kernel, verify, report}) add_common(sub);
  report->add_option("--check-manifest", manifest_dir, "only verify an existing bundle directory");
  report->get_option("--config")->required(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    apply_threads(common.threads);
    if (list->parsed()) return cmd_list();
    if (report->parsed() && !manifest_dir.empty()) {
      std::string problem;
      const bool ok = verify_manifest(manifest_dir, &problem);
      std::cout << (ok ? "manifest ok" : "manifest mismatch: " + problem) << '\n';
      return ok ? kOk : kCheckFailed;
    }
    const ExperimentConfig cfg = load(common);
    if (validate->parsed()) return cmd_validate(cfg);
    if (evolve->parsed()) return cmd_evolve(cfg);
    if (resolvent->parsed()) return cmd_resolvent(cfg);
    if (spectrum->parsed()) return cmd_spectrum(cfg);
    if (kernel->parsed()) return cmd_kernel(cfg);
    if (verify->parsed()) return cmd_verify(cfg, !common.out.empty());
    return cmd_verify(cfg, true);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumeric;
  }
}
