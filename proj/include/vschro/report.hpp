#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "vschro/config.hpp"
#include "vschro/fields.hpp"
#include "vschro/verify.hpp"

namespace vschro {

struct ReportBundle {
  std::string name;
  /// config_echo of the resolved configuration.
  std::string config_text;
  HypothesisReport hypotheses;
  std::vector<PropertyCheckResult> results;

  bool all_passed() const;
};

ReportBundle make_report(const ExperimentConfig& cfg, std::vector<PropertyCheckResult> results);

/// Fixed-layout renderings; numbers use %.12g so equal inputs give equal bytes.
std::string render_text(const ReportBundle& r);
/// Columns check,passed,quantity,value,tolerance.
std::string render_csv(const ReportBundle& r);

/// Writes config.txt, report.txt, results.csv and MANIFEST (sha256 per file)
/// into dir. Returns the written paths.
std::vector<std::filesystem::path> write_report(const ReportBundle& r, const std::filesystem::path& dir);

std::string sha256_hex(std::string_view bytes);
/// Recomputes every hash listed in dir/MANIFEST. On mismatch returns false and
/// describes the first offending file in *problem.
bool verify_manifest(const std::filesystem::path& dir, std::string* problem = nullptr);

}  // namespace vschro
