#pragma once

#include <string>
#include <vector>

#include "vschro/config.hpp"
#include "vschro/verify.hpp"

namespace vschro {

/// Check names accepted in [checks] names.
const std::vector<std::string>& check_names();
/// Override keys accepted as <check>.<key>; throws ConfigError for unknown checks.
const std::vector<std::string>& check_override_keys(const std::string& check);

/// Runs one named check against the configured problem and its overrides.
PropertyCheckResult run_check(const std::string& name, const ExperimentConfig& cfg);
std::vector<PropertyCheckResult> run_checks(const ExperimentConfig& cfg);

}  // namespace vschro
