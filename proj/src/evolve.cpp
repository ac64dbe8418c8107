#include "vschro/evolve.hpp"

#include <cmath>
#include <stdexcept>

#include "vschro/error.hpp"
#include "vschro/kernels.hpp"
#include "vschro/linsolve.hpp"

namespace vschro {

void SplitConfig::validate() const {
  if (!(t_final > 0.0)) throw std::invalid_argument("split config: t_final must be positive");
  if (n_steps < 1) throw std::invalid_argument("split config: n_steps must be >= 1");
  if (!(linear_solver_tol > 0.0 && linear_solver_tol <= 1e-4))
    throw std::invalid_argument("split config: linear_solver_tol must lie in (0, 1e-4]");
  if (max_solver_iters < 1) throw std::invalid_argument("split config: max_solver_iters must be >= 1");
  if (record_every < 1) throw std::invalid_argument("split config: record_every must be >= 1");
}

PotentialPropagator::PotentialPropagator(const MatrixField& v, double tau)
    : m_(v.size()), tau_(tau) {
  if (tau < 0.0) throw std::invalid_argument("potential step: tau must be nonnegative");
  const std::size_t mm = static_cast<std::size_t>(m_) * m_;
  blocks_.resize(v.grid().cell_count() * mm);
  for (std::size_t c = 0; c < v.grid().cell_count(); ++c) {
    const DenseMatrix e = matrix_exp(tau * v.at(c));
    for (int i = 0; i < m_; ++i)
      for (int j = 0; j < m_; ++j) blocks_[c * mm + i * m_ + j] = e(i, j);
  }
}

void PotentialPropagator::apply(const VectorField& in, VectorField& out) const {
  if (in.components() != m_ || in.values().size() * m_ != blocks_.size())
    throw std::invalid_argument("potential step: layout mismatch");
  kernels::omp::apply_cell_blocks(blocks_, m_, in.values(), out.values());
}

DiffusionPropagator::DiffusionPropagator(const SparseOperator& a, double tau,
                                         DiffusionScheme scheme, double tol, int max_iters)
    : a_(a), tau_(tau), scheme_(scheme), tol_(tol), max_iters_(max_iters) {
  if (!(tau > 0.0)) throw std::invalid_argument("diffusion step: tau must be positive");
}

int DiffusionPropagator::apply(const VectorField& in, VectorField& out) const {
  if (!(in.grid() == a_.grid()) || in.components() != a_.components())
    throw std::invalid_argument("diffusion step: layout mismatch");
  const double theta = scheme_ == DiffusionScheme::crank_nicolson ? 0.5 : 1.0;
  std::vector<cplx> rhs(in.values().begin(), in.values().end());
  if (scheme_ == DiffusionScheme::crank_nicolson) {
    // rhs = (I + tau/2 A) f
    kernels::omp::spmv(a_.view(), in.values(), rhs);
    kernels::omp::axpby(1.0, in.values(), 0.5 * tau_, rhs);
  }
  std::copy(in.values().begin(), in.values().end(), out.values().begin());
  const SolveStats st = pcg_shifted(a_, 1.0, -theta * tau_, rhs, out.values(), tol_, max_iters_);
  if (!st.converged) throw NumericalError("diffusion step: CG did not converge");
  return st.iterations;
}

VectorField potential_step(const MatrixField& v, const VectorField& f, double tau) {
  PotentialPropagator p(v, tau);
  VectorField out(f.grid(), f.components());
  p.apply(f, out);
  return out;
}

VectorField diffusion_step(const SparseOperator& a, const VectorField& f, double tau,
                           const SplitConfig& cfg) {
  DiffusionPropagator d(a, tau, cfg.diffusion_substep, cfg.linear_solver_tol, cfg.max_solver_iters);
  VectorField out(f.grid(), f.components());
  d.apply(f, out);
  return out;
}

namespace {

std::array<double, 4> norm_row(const VectorField& f) {
  std::array<double, 4> row{};
  for (std::size_t j = 0; j < kNormExponents.size(); ++j) row[j] = lp_norm(f, kNormExponents[j]);
  return row;
}

void record(Trajectory& traj, double t, const VectorField& u, bool keep) {
  traj.times.push_back(t);
  traj.norms.push_back(norm_row(u));
  if (keep || traj.snapshots.empty()) {
    traj.snapshots.push_back(u);
  } else {
    traj.snapshots.back() = u;
  }
}

}  // namespace

Trajectory trotter_evolve(const SparseOperator& a, const MatrixField& v, const VectorField& f,
                          const SplitConfig& cfg) {
  cfg.validate();
  if (!(a.grid() == f.grid()) || !(v.grid() == f.grid()) || a.components() != f.components() ||
      v.size() != f.components())
    throw std::invalid_argument("trotter_evolve: operators and field live on different layouts");
  const double tau = cfg.tau();
  const bool strang = cfg.scheme == SplitScheme::strang;
  const PotentialPropagator pot(v, strang ? 0.5 * tau : tau);
  const DiffusionPropagator diff(a, tau, cfg.diffusion_substep, cfg.linear_solver_tol,
                                 cfg.max_solver_iters);
  Trajectory traj;
  VectorField u = f;
  VectorField tmp(f.grid(), f.components());
  record(traj, 0.0, u, true);
  for (int step = 1; step <= cfg.n_steps; ++step) {
    pot.apply(u, tmp);
    int iters = diff.apply(tmp, u);
    if (strang) {
      pot.apply(u, tmp);
      std::swap(u, tmp);
    }
    traj.max_solver_iterations = std::max(traj.max_solver_iterations, iters);
    if (step % cfg.record_every == 0 || step == cfg.n_steps)
      record(traj, step * tau, u, cfg.keep_snapshots);
  }
  return traj;
}

VectorField scalar_heat_evolve(const MatrixField& q, const VectorField& g, double t,
                               const SplitConfig& cfg) {
  if (g.components() != 1) throw std::invalid_argument("scalar_heat_evolve: field must be scalar");
  if (!(q.grid() == g.grid())) throw std::invalid_argument("scalar_heat_evolve: grid mismatch");
  SplitConfig c = cfg;
  c.t_final = t;
  c.validate();
  // D = div(Q grad .): the assembled operator carries -I, so add it back.
  const SparseOperator d = shifted(assemble_diffusion(q, 1), 1.0);
  const DiffusionPropagator step(d, c.tau(), c.diffusion_substep, c.linear_solver_tol,
                                 c.max_solver_iters);
  VectorField u = g;
  VectorField next(g.grid(), 1);
  for (int k = 0; k < c.n_steps; ++k) {
    step.apply(u, next);
    std::swap(u, next);
  }
  return u;
}

VectorField unshift(const VectorField& f, double t, double rate) {
  return cplx(std::exp(rate * t), 0.0) * f;
}

}  // namespace vschro
