#pragma once

#include <optional>

#include "vschro/fields.hpp"
#include "vschro/operators.hpp"
#include "vschro/rules.hpp"

namespace vschro {

enum class ShiftMode { none, automatic };

/// Everything needed to sample Q and V on a grid.
struct ProblemSpec {
  int dim = 1;
  int m = 2;
  double extent = 10.0;
  int n = 200;
  RuleSpec diffusion{"identity_Q", {}, ""};
  RuleSpec potential{"diag_V", {}, ""};
  /// automatic applies V - (beta + 1) I when the dissipativity margin is positive.
  ShiftMode shift = ShiftMode::none;
  /// Replaces V by -V before any shift.
  bool flip = false;
  double alpha = 0.0;

  std::size_t unknowns() const;
  /// Same problem on another box/resolution.
  ProblemSpec resized(double new_extent, int new_n) const;
};

/// Upper bound on N^d * m accepted from configs.
inline constexpr std::size_t kMaxUnknowns = 4'000'000;

struct Problem {
  ProblemSpec spec;
  Grid grid;
  MatrixField q;
  /// Potential after flip and shift.
  MatrixField v;
  /// beta + 1 when the automatic shift was applied, else 0.
  double applied_shift = 0.0;
  double beta = 0.0;
  SparseOperator a;

  /// A + V.
  SparseOperator generator() const;
  /// Rate that maps the shifted semigroup back onto e^{t div(Q grad)} type
  /// comparisons: the -I of A plus any applied potential shift.
  double unshift_rate() const { return 1.0 + applied_shift; }
};

Problem build_problem(const ProblemSpec& spec);

}  // namespace vschro
