#include "vschro/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <random>

#include "vschro/error.hpp"
#include "vschro/linsolve.hpp"

namespace vschro {

ResolventSolution solve_resolvent(const SparseOperator& l, const ResolventQuery& q) {
  if (!(q.rhs.grid() == l.grid()) || q.rhs.components() != l.components())
    throw std::invalid_argument("solve_resolvent: rhs layout mismatch");
  ResolventSolution out{VectorField(l.grid(), l.components()), 0.0, false, {}};
  const SparseOperator system = combine(q.lambda, SparseOperator::identity(l.grid(), l.components()), -1.0, l);
  const SparseLuSolver lu(system);
  if (!lu.ok()) {
    out.relative_residual = std::numeric_limits<double>::infinity();
    out.diagnostic = "factorization broke down: lambda is (numerically) an eigenvalue";
    return out;
  }
  out.relative_residual = lu.solve(q.rhs.values(), out.u.values());
  out.converged = out.relative_residual <= q.solver_tol;
  if (!out.converged) out.diagnostic = "residual above tolerance: lambda is close to the spectrum";
  return out;
}

namespace {

Eigen::VectorXcd random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(n);
  for (std::size_t i = 0; i < n; ++i) v(i) = cplx(nd(rng), nd(rng));
  return v;
}

}  // namespace

NormEstimate operator_norm_estimate(const LinearMap& map, double rel_tol, int max_iters,
                                    std::uint64_t seed) {
  if (map.dims == 0) throw std::invalid_argument("operator_norm_estimate: empty map");
  std::mt19937_64 rng(seed);
  Eigen::VectorXcd x = random_vector(map.dims, rng);
  x.normalize();
  Eigen::VectorXcd y(map.dims), z(map.dims);
  NormEstimate est;
  double mu_prev = 0.0;
  for (int it = 1; it <= max_iters; ++it) {
    map.apply({x.data(), map.dims}, {y.data(), map.dims});
    map.apply_adjoint({y.data(), map.dims}, {z.data(), map.dims});
    const double mu = y.squaredNorm();
    const double zn = z.norm();
    est.iterations = it;
    est.value = std::sqrt(mu);
    if (zn == 0.0) {
      est.converged = true;
      return est;
    }
    x = z / zn;
    if (it > 1 && std::abs(mu - mu_prev) < rel_tol * mu) {
      est.converged = true;
      return est;
    }
    mu_prev = mu;
  }
  throw NumericalError("operator_norm_estimate: power iteration did not stagnate");
}

LinearMap resolvent_map(const SparseOperator& l, cplx lambda) {
  auto lu = std::make_shared<SparseLuSolver>(
      combine(lambda, SparseOperator::identity(l.grid(), l.components()), -1.0, l));
  if (!lu->ok()) throw NumericalError("resolvent_map: lambda is an eigenvalue");
  LinearMap map;
  map.dims = l.dims();
  map.apply = [lu](std::span<const cplx> in, std::span<cplx> out) {
    if (lu->solve(in, out) > 1e-8) throw NumericalError("resolvent_map: inaccurate solve near the spectrum");
  };
  map.apply_adjoint = [lu](std::span<const cplx> in, std::span<cplx> out) {
    if (lu->solve_adjoint(in, out) > 1e-8)
      throw NumericalError("resolvent_map: inaccurate adjoint solve near the spectrum");
  };
  return map;
}

EigenResult eigenpairs(const SparseOperator& l, int k, cplx shift, int max_iters) {
  const std::size_t n = l.dims();
  if (k < 1 || static_cast<std::size_t>(k) > n) throw std::invalid_argument("eigenpairs: bad k");
  if (k > 20) throw std::invalid_argument("eigenpairs: at most 20 eigenvalues");
  const SparseOperator id = SparseOperator::identity(l.grid(), l.components());
  std::unique_ptr<SparseLuSolver> lu;
  cplx sigma = shift;
  for (int attempt = 0; attempt < 2; ++attempt) {
    lu = std::make_unique<SparseLuSolver>(combine(1.0, l, -sigma, id));
    if (lu->ok()) break;
    if (attempt == 1) throw NumericalError("eigenpairs: shift coincides with an eigenvalue");
    sigma += 1e-6 * std::max(1.0, std::abs(sigma)) * cplx(1.0, 1.0);
  }

  const Eigen::Index p = static_cast<Eigen::Index>(std::min<std::size_t>(n, std::max(2 * k, k + 10)));
  std::mt19937_64 rng(12345);
  Eigen::MatrixXcd x(n, p);
  for (Eigen::Index j = 0; j < p; ++j) x.col(j) = random_vector(n, rng);
  auto orthonormalize = [&](const Eigen::MatrixXcd& y) -> Eigen::MatrixXcd {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(y);
    return qr.householderQ() * Eigen::MatrixXcd::Identity(n, p);
  };
  x = orthonormalize(x);

  const auto lmat = l.to_eigen();
  Eigen::MatrixXcd y(n, p);
  EigenResult res;
  res.shift_used = sigma;
  for (int it = 1; it <= max_iters; ++it) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const Eigen::VectorXcd col = x.col(j);
      Eigen::VectorXcd sol(n);
      lu->solve({col.data(), n}, {sol.data(), n});
      y.col(j) = sol;
    }
    x = orthonormalize(y);
    const Eigen::MatrixXcd lx = lmat * x;
    const Eigen::MatrixXcd h = x.adjoint() * lx;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(h);
    std::vector<Eigen::Index> order(p);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
      return std::abs(es.eigenvalues()(a) - sigma) < std::abs(es.eigenvalues()(b) - sigma);
    });
    std::vector<cplx> vals;
    std::vector<Eigen::VectorXcd> vecs;
    std::vector<double> resid;
    double worst = 0.0;
    for (int j = 0; j < k; ++j) {
      const cplx theta = es.eigenvalues()(order[j]);
      Eigen::VectorXcd v = x * es.eigenvectors().col(order[j]);
      v.normalize();
      const double r = (lmat * v - theta * v).norm();
      worst = std::max(worst, r);
      vals.push_back(theta);
      vecs.push_back(std::move(v));
      resid.push_back(r);
    }
    res.iterations = it;
    if (worst <= 1e-9) {
      std::vector<int> idx(k);
      std::iota(idx.begin(), idx.end(), 0);
      std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (vals[a].real() != vals[b].real()) return vals[a].real() > vals[b].real();
        return vals[a].imag() > vals[b].imag();
      });
      for (int j : idx) {
        res.eigenvalues.push_back(vals[j]);
        res.eigenfields.emplace_back(l.grid(), l.components(),
                                     std::vector<cplx>(vecs[j].data(), vecs[j].data() + n));
        res.residuals.push_back(resid[j]);
      }
      return res;
    }
  }
  throw NumericalError("eigenpairs: subspace iteration did not converge");
}

KernelEstimate kernel_column(const EvolutionContext& ctx, double t, std::size_t source_cell,
                             int source_component, const SplitConfig& cfg) {
  if (!(t > 0.0)) throw std::invalid_argument("kernel_column: t must be positive");
  const Grid& g = ctx.a.grid();
  const int m = ctx.a.components();
  if (source_cell >= g.cell_count() || source_component < 0 || source_component >= m)
    throw std::invalid_argument("kernel_column: source out of range");
  VectorField delta(g, m);
  delta(source_cell, source_component) = 1.0 / g.cell_measure();
  SplitConfig c = cfg;
  c.t_final = t;
  c.keep_snapshots = false;
  c.record_every = c.n_steps;
  Trajectory traj = trotter_evolve(ctx.a, ctx.v, delta, c);
  KernelEstimate k{t, source_cell, source_component, traj.final_state(), 0.0};
  for (auto v : k.column.values()) k.sup_abs = std::max(k.sup_abs, std::abs(v));
  return k;
}

}  // namespace vschro
