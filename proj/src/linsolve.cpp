#include "vschro/linsolve.hpp"

#include <cmath>

#include "vschro/error.hpp"
#include "vschro/kernels.hpp"

namespace vschro {

SolveStats pcg_shifted(const SparseOperator& a, double c0, double c1, std::span<const cplx> b,
                       std::span<cplx> x, double tol, int max_iters) {
  namespace k = kernels::omp;
  const std::size_t n = a.dims();
  if (b.size() != n || x.size() != n) throw std::invalid_argument("pcg: dimension mismatch");
  std::vector<double> inv_diag(n);
  {
    const auto d = a.diagonal();
    for (std::size_t i = 0; i < n; ++i) {
      const double di = c0 + c1 * d[i].real();
      if (!(di > 0.0)) throw NumericalError("pcg: system diagonal is not positive");
      inv_diag[i] = 1.0 / di;
    }
  }
  auto apply = [&](std::span<const cplx> in, std::span<cplx> out) {
    k::spmv(a.view(), in, out);
    k::axpby(c0, in, c1, out);
  };

  SolveStats stats;
  const double bnorm = std::sqrt(k::dot(b, b).real());
  if (bnorm == 0.0) {
    std::fill(x.begin(), x.end(), cplx{});
    stats.converged = true;
    return stats;
  }
  std::vector<cplx> r(n), z(n), p(n), q(n);
  apply(x, r);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  double rnorm = std::sqrt(k::dot(r, r).real());
  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  cplx rho = k::dot(r, z);
  while (rnorm > tol * bnorm && stats.iterations < max_iters) {
    apply(p, q);
    const cplx pq = k::dot(q, p);
    if (!(pq.real() > 0.0)) throw NumericalError("pcg: operator is not positive definite");
    const cplx step = rho / pq;
    k::axpby(step, p, 1.0, x);
    k::axpby(-step, q, 1.0, r);
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const cplx rho_next = k::dot(r, z);
    k::axpby(1.0, z, rho_next / rho, p);
    rho = rho_next;
    rnorm = std::sqrt(k::dot(r, r).real());
    ++stats.iterations;
  }
  stats.relative_residual = rnorm / bnorm;
  stats.converged = rnorm <= tol * bnorm;
  return stats;
}

SparseLuSolver::SparseLuSolver(const SparseOperator& op) : n_(op.dims()) {
  const auto rm = op.to_eigen();
  matrix_ = ColMatrix(rm.cast<cplx>());
  matrix_.makeCompressed();
  lu_ = std::make_unique<Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>>>();
  lu_->analyzePattern(matrix_);
  lu_->factorize(matrix_);
  ok_ = lu_->info() == Eigen::Success;
}

namespace {

template <class Solve, class Apply>
double refine(const Solve& solve, const Apply& apply, std::span<const cplx> b, std::span<cplx> x,
              std::size_t n) {
  Eigen::Map<const Eigen::VectorXcd> bv(b.data(), n);
  Eigen::Map<Eigen::VectorXcd> xv(x.data(), n);
  const double bnorm = bv.norm();
  if (bnorm == 0.0) {
    xv.setZero();
    return 0.0;
  }
  xv = solve(bv);
  double rel = (bv - apply(xv)).norm() / bnorm;
  for (int sweep = 0; sweep < 3 && rel > 1e-14; ++sweep) {
    const Eigen::VectorXcd r = bv - apply(xv);
    const Eigen::VectorXcd dx = solve(r);
    const Eigen::VectorXcd trial = xv + dx;
    const double trial_rel = (bv - apply(trial)).norm() / bnorm;
    if (!(trial_rel < rel)) break;
    xv = trial;
    rel = trial_rel;
  }
  return rel;
}

}  // namespace

double SparseLuSolver::solve(std::span<const cplx> b, std::span<cplx> x) const {
  if (!ok_) throw NumericalError("sparse LU: factorization failed (operator singular)");
  return refine([&](const Eigen::VectorXcd& r) -> Eigen::VectorXcd { return lu_->solve(r); },
                [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd { return matrix_ * v; }, b, x, n_);
}

double SparseLuSolver::solve_adjoint(std::span<const cplx> b, std::span<cplx> x) const {
  if (!ok_) throw NumericalError("sparse LU: factorization failed (operator singular)");
  return refine(
      [&](const Eigen::VectorXcd& r) -> Eigen::VectorXcd { return lu_->adjoint().solve(r); },
      [&](const Eigen::VectorXcd& v) -> Eigen::VectorXcd { return matrix_.adjoint() * v; }, b, x, n_);
}

}  // namespace vschro
