#include "vschro/problem.hpp"

#include <cmath>

#include "vschro/error.hpp"

namespace vschro {

std::size_t ProblemSpec::unknowns() const {
  std::size_t cells = static_cast<std::size_t>(n);
  if (dim == 2) cells *= static_cast<std::size_t>(n);
  return cells * static_cast<std::size_t>(m);
}

ProblemSpec ProblemSpec::resized(double new_extent, int new_n) const {
  ProblemSpec s = *this;
  s.extent = new_extent;
  s.n = new_n;
  return s;
}

SparseOperator Problem::generator() const { return a + assemble_potential(v); }

namespace {

Problem assemble(const ProblemSpec& spec, Grid grid, MatrixField q, MatrixField v) {
  double beta = 0.0, applied = 0.0;
  if (spec.flip) v = transform(v, [](const DenseMatrix& m) -> DenseMatrix { return -m; });
  if (spec.shift == ShiftMode::automatic && validate_hypotheses(q, v, 0.0).dissipativity_margin > 0.0) {
    auto s = normalize_shift(v);
    v = std::move(s.potential);
    beta = s.beta;
    applied = s.beta + 1.0;
  }
  SparseOperator a = assemble_diffusion(q, spec.m);
  return Problem{spec, grid, std::move(q), std::move(v), applied, beta, std::move(a)};
}

}  // namespace

Problem build_problem(const ProblemSpec& spec) {
  if (spec.dim != 1 && spec.dim != 2) throw ConfigError("dim must be 1 or 2");
  if (spec.m < 1) throw ConfigError("m must be positive");
  if (!(spec.extent > 0.0)) throw ConfigError("extent must be positive");
  if (spec.n < 3) throw ConfigError("n must be at least 3");
  if (spec.unknowns() > kMaxUnknowns)
    throw ConfigError("problem has " + std::to_string(spec.unknowns()) + " unknowns; the cap is " +
                      std::to_string(kMaxUnknowns));
  Grid grid = build_grid(spec.dim, spec.extent, spec.n);
  MatrixField q = make_diffusion_field(spec.diffusion, grid);
  MatrixField v = make_potential_field(spec.potential, grid, spec.m);
  try {
    return assemble(spec, grid, std::move(q), std::move(v));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace vschro
