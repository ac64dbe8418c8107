#pragma once

#include <string>
#include <vector>

namespace vschro {

struct BundledExperiment {
  std::string name;
  std::string text;
};

/// Example configs compiled into the library. Empty when the build disables
/// bundled configs.
const std::vector<BundledExperiment>& bundled_experiments();
const BundledExperiment* find_bundled(const std::string& name);

}  // namespace vschro
