#pragma once

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <memory>
#include <span>
#include <vector>

#include "vschro/operators.hpp"

namespace vschro {

struct SolveStats {
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Jacobi-preconditioned conjugate gradients for (c0 I + c1 A) x = b, which
/// must be Hermitian positive definite. x holds the initial guess on entry.
/// Iteration counts are deterministic for fixed data.
SolveStats pcg_shifted(const SparseOperator& a, double c0, double c1, std::span<const cplx> b,
                       std::span<cplx> x, double tol, int max_iters);

/// Sparse LU of a general square operator with residual-checked solves.
class SparseLuSolver {
 public:
  explicit SparseLuSolver(const SparseOperator& op);

  /// Solves op x = b with up to three refinement sweeps. Returns the final
  /// relative residual.
  double solve(std::span<const cplx> b, std::span<cplx> x) const;
  /// Solves op^* x = b.
  double solve_adjoint(std::span<const cplx> b, std::span<cplx> x) const;

  bool ok() const { return ok_; }
  std::size_t dims() const { return n_; }

 private:
  using ColMatrix = Eigen::SparseMatrix<cplx, Eigen::ColMajor, int>;
  ColMatrix matrix_;
  std::unique_ptr<Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>>> lu_;
  std::size_t n_ = 0;
  bool ok_ = false;
};

}  // namespace vschro
