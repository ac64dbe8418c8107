#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vschro/evolve.hpp"
#include "vschro/fields.hpp"
#include "vschro/mesh.hpp"
#include "vschro/operators.hpp"

namespace vschro {

struct ResolventQuery {
  cplx lambda;
  VectorField rhs;
  double solver_tol = 1e-10;
  int max_iters = 3;
};

struct ResolventSolution {
  VectorField u;
  double relative_residual = 0.0;
  bool converged = false;
  /// Set when the solve broke down or missed the tolerance; lambda is then
  /// likely at or near the spectrum.
  std::string diagnostic;
};

/// Solves (lambda I - L) u = rhs by sparse LU with residual refinement.
ResolventSolution solve_resolvent(const SparseOperator& l, const ResolventQuery& q);

/// Linear map on C^dims together with its adjoint.
struct LinearMap {
  std::size_t dims = 0;
  std::function<void(std::span<const cplx>, std::span<cplx>)> apply;
  std::function<void(std::span<const cplx>, std::span<cplx>)> apply_adjoint;
};

struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Largest singular value by power iteration on map^* map; stops once the
/// Rayleigh quotient changes by less than rel_tol. Throws NumericalError
/// after max_iters without stagnation.
NormEstimate operator_norm_estimate(const LinearMap& map, double rel_tol = 1e-6,
                                    int max_iters = 5000, std::uint64_t seed = 7);

/// LinearMap for (lambda I - L)^{-1} backed by one LU factorization.
LinearMap resolvent_map(const SparseOperator& l, cplx lambda);

struct EigenResult {
  /// Sorted by real part, descending.
  std::vector<cplx> eigenvalues;
  std::vector<VectorField> eigenfields;
  std::vector<double> residuals;
  int iterations = 0;
  cplx shift_used;
};

/// The k eigenvalues of L nearest `shift` by shift-invert subspace iteration
/// with Gram-Schmidt orthonormalization and Rayleigh-Ritz extraction. Every
/// reported pair satisfies |L v - lambda v|_2 <= 1e-8 |v|_2. A singular
/// shift is perturbed once before failing.
EigenResult eigenpairs(const SparseOperator& l, int k, cplx shift, int max_iters = 500);

/// Operators defining S_h(t): A (with its -I) and V.
struct EvolutionContext {
  const SparseOperator& a;
  const MatrixField& v;
};

struct KernelEstimate {
  double t = 0.0;
  std::size_t source_cell = 0;
  int source_component = 0;
  VectorField column;
  double sup_abs = 0.0;
};

/// K_h(t, ., y) e_j: evolves h^{-d} 1_{cell y} e_j to time t.
KernelEstimate kernel_column(const EvolutionContext& ctx, double t, std::size_t source_cell,
                             int source_component, const SplitConfig& cfg);

}  // namespace vschro
