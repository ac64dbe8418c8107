#include "vschro/registry.hpp"

#include <algorithm>

namespace vschro {

namespace detail {
std::vector<BundledExperiment> embedded_experiments();
}

const std::vector<BundledExperiment>& bundled_experiments() {
  static const std::vector<BundledExperiment> all = [] {
    auto v = detail::embedded_experiments();
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    return v;
  }();
  return all;
}

const BundledExperiment* find_bundled(const std::string& name) {
  for (const auto& b : bundled_experiments())
    if (b.name == name) return &b;
  return nullptr;
}

}  // namespace vschro
