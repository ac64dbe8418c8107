#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vschro/evolve.hpp"
#include "vschro/problem.hpp"

namespace vschro {

/// One experiment, parsed from a sectioned key = value file:
///
///   [problem]  dim, m, extent, n, Q, Q.<param>, Q.table, V, V.<param>,
///              V.table, shift (none|auto), flip (true|false), alpha
///   [run]      scheme (lie|strang), diffusion (crank_nicolson|backward_euler),
///              n_steps, t_final, solver_tol, max_solver_iters, record_every,
///              lambda_re, lambda_im, eigen_k, kernel_t, source_component
///   [checks]   names = <comma separated>, <check>.<key> = value
///   [output]   dir, seed
///
/// '#' starts a comment. Unknown sections, keys, rules, rule parameters and
/// check names are ConfigErrors.
struct ExperimentConfig {
  std::string name;
  ProblemSpec problem;
  SplitConfig run;
  cplx lambda{2.0, 0.0};
  int eigen_k = 10;
  double kernel_t = 0.01;
  int source_component = 0;

  std::vector<std::string> checks;
  std::map<std::string, std::map<std::string, std::string>> check_overrides;

  std::string output_dir = "vschro-out";
  std::uint64_t seed = 1;
};

ExperimentConfig parse_config(std::string_view text, const std::string& origin = "<config>");
/// Reads a file, or a bundled experiment when path is "bundled:<name>".
ExperimentConfig load_config(const std::string& path);

/// Canonical key = value listing of the resolved configuration.
std::string config_echo(const ExperimentConfig& cfg);

// Typed helpers for check overrides.
double override_double(const ExperimentConfig& cfg, const std::string& check, const std::string& key,
                       double fallback);
int override_int(const ExperimentConfig& cfg, const std::string& check, const std::string& key, int fallback);
bool override_bool(const ExperimentConfig& cfg, const std::string& check, const std::string& key, bool fallback);
std::vector<double> override_list(const ExperimentConfig& cfg, const std::string& check, const std::string& key,
                                  std::vector<double> fallback);

}  // namespace vschro
