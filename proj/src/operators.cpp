#include "vschro/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "vschro/kernels.hpp"

namespace vschro {

SparseOperator::SparseOperator(Grid grid, int m, std::vector<std::int64_t> row_ptr,
                               std::vector<std::int64_t> cols, std::vector<cplx> vals,
                               bool symmetric)
    : grid_(grid), m_(m), row_ptr_(std::move(row_ptr)), cols_(std::move(cols)),
      vals_(std::move(vals)), symmetric_(symmetric) {
  const std::size_t n = grid_.cell_count() * static_cast<std::size_t>(m_);
  if (row_ptr_.size() != n + 1 || row_ptr_.front() != 0 ||
      static_cast<std::size_t>(row_ptr_.back()) != cols_.size() || cols_.size() != vals_.size())
    throw std::invalid_argument("SparseOperator: inconsistent CSR arrays");
  for (std::size_t r = 0; r < n; ++r) {
    if (row_ptr_[r + 1] < row_ptr_[r]) throw std::invalid_argument("SparseOperator: row offsets decrease");
    for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (cols_[k] < 0 || static_cast<std::size_t>(cols_[k]) >= n)
        throw std::invalid_argument("SparseOperator: column out of range");
      if (k > row_ptr_[r] && cols_[k] <= cols_[k - 1])
        throw std::invalid_argument("SparseOperator: columns not sorted");
    }
  }
  if (symmetric_ && max_asymmetry() > 1e-12)
    throw std::invalid_argument("SparseOperator: symmetry flag set on a non-symmetric operator");
}

SparseOperator SparseOperator::from_triplets(Grid grid, int m, std::vector<Triplet> t,
                                             bool symmetric) {
  std::sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  const std::size_t n = grid.cell_count() * static_cast<std::size_t>(m);
  std::vector<std::int64_t> row_ptr(n + 1, 0), cols;
  std::vector<cplx> vals;
  cols.reserve(t.size());
  vals.reserve(t.size());
  for (std::size_t i = 0; i < t.size();) {
    std::size_t j = i;
    cplx sum{};
    while (j < t.size() && t[j].row == t[i].row && t[j].col == t[i].col) sum += t[j++].value;
    if (t[i].row < 0 || static_cast<std::size_t>(t[i].row) >= n)
      throw std::invalid_argument("SparseOperator: row out of range");
    cols.push_back(t[i].col);
    vals.push_back(sum);
    ++row_ptr[t[i].row + 1];
    i = j;
  }
  for (std::size_t r = 0; r < n; ++r) row_ptr[r + 1] += row_ptr[r];
  return SparseOperator(grid, m, std::move(row_ptr), std::move(cols), std::move(vals), symmetric);
}

SparseOperator SparseOperator::identity(Grid grid, int m, cplx scale) {
  const std::size_t n = grid.cell_count() * static_cast<std::size_t>(m);
  std::vector<std::int64_t> row_ptr(n + 1), cols(n);
  for (std::size_t i = 0; i <= n; ++i) row_ptr[i] = static_cast<std::int64_t>(i);
  for (std::size_t i = 0; i < n; ++i) cols[i] = static_cast<std::int64_t>(i);
  const bool sym = scale.imag() == 0.0;
  return SparseOperator(grid, m, std::move(row_ptr), std::move(cols), std::vector<cplx>(n, scale), sym);
}

cplx SparseOperator::entry(std::size_t row, std::size_t col) const {
  const auto first = cols_.begin() + row_ptr_[row];
  const auto last = cols_.begin() + row_ptr_[row + 1];
  const auto it = std::lower_bound(first, last, static_cast<std::int64_t>(col));
  if (it == last || *it != static_cast<std::int64_t>(col)) return {};
  return vals_[it - cols_.begin()];
}

std::vector<cplx> SparseOperator::diagonal() const {
  std::vector<cplx> d(dims());
  for (std::size_t r = 0; r < dims(); ++r) d[r] = entry(r, r);
  return d;
}

double SparseOperator::max_asymmetry() const {
  double worst = 0.0;
  for (std::size_t r = 0; r < dims(); ++r)
    for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      worst = std::max(worst, std::abs(vals_[k] - entry(cols_[k], r)));
  return worst;
}

bool SparseOperator::nonnegative_offdiagonal() const {
  for (std::size_t r = 0; r < dims(); ++r)
    for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      if (static_cast<std::size_t>(cols_[k]) != r && (vals_[k].real() < 0.0 || vals_[k].imag() != 0.0))
        return false;
  return true;
}

SparseOperator SparseOperator::adjoint() const {
  std::vector<Triplet> t;
  t.reserve(vals_.size());
  for (std::size_t r = 0; r < dims(); ++r)
    for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      t.push_back({cols_[k], static_cast<std::int64_t>(r), std::conj(vals_[k])});
  return from_triplets(grid_, m_, std::move(t), symmetric_);
}

void SparseOperator::apply(std::span<const cplx> x, std::span<cplx> y) const {
  if (x.size() != dims() || y.size() != dims())
    throw std::invalid_argument("SparseOperator::apply: dimension mismatch");
  kernels::omp::spmv(view(), x, y);
}

Eigen::SparseMatrix<cplx, Eigen::RowMajor, std::int64_t> SparseOperator::to_eigen() const {
  const auto n = static_cast<std::int64_t>(dims());
  return Eigen::Map<const Eigen::SparseMatrix<cplx, Eigen::RowMajor, std::int64_t>>(
      n, n, static_cast<std::int64_t>(vals_.size()), row_ptr_.data(), cols_.data(), vals_.data());
}

Eigen::MatrixXcd SparseOperator::to_dense() const {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(dims(), dims());
  for (std::size_t r = 0; r < dims(); ++r)
    for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) d(r, cols_[k]) = vals_[k];
  return d;
}

SparseOperator combine(cplx alpha, const SparseOperator& a, cplx beta, const SparseOperator& b) {
  if (!(a.grid() == b.grid()) || a.components() != b.components())
    throw std::invalid_argument("combine: operators live on different layouts");
  std::vector<Triplet> t;
  t.reserve(a.nonzeros() + b.nonzeros());
  for (const auto* op : {&a, &b}) {
    const cplx s = op == &a ? alpha : beta;
    for (std::size_t r = 0; r < op->dims(); ++r)
      for (auto k = op->row_ptr()[r]; k < op->row_ptr()[r + 1]; ++k)
        t.push_back({static_cast<std::int64_t>(r), op->cols()[k], s * op->vals()[k]});
  }
  const bool sym = a.symmetric() && b.symmetric() && alpha.imag() == 0.0 && beta.imag() == 0.0;
  return SparseOperator::from_triplets(a.grid(), a.components(), std::move(t), sym);
}

SparseOperator shifted(const SparseOperator& a, cplx c) {
  return combine(1.0, a, 1.0, SparseOperator::identity(a.grid(), a.components(), c));
}

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
  return combine(1.0, a, 1.0, b);
}

namespace {

struct Stencil {
  std::vector<std::pair<std::int64_t, double>> terms;
  void add(std::int64_t cell, double w) {
    if (cell >= 0) terms.emplace_back(cell, w);
  }
};

// Expands a scalar cells x cells triplet list to m identical component blocks.
std::vector<Triplet> expand_components(const std::vector<Triplet>& scalar, int m) {
  std::vector<Triplet> t;
  t.reserve(scalar.size() * m);
  for (const auto& s : scalar)
    for (int k = 0; k < m; ++k) t.push_back({s.row * m + k, s.col * m + k, s.value});
  return t;
}

void add_outer(std::vector<Triplet>& t, const Stencil& a, const Stencil& b, double w) {
  if (w == 0.0) return;
  for (const auto& [i, wi] : a.terms)
    for (const auto& [j, wj] : b.terms) t.push_back({i, j, w * wi * wj});
}

Eigen::Matrix2d face_mean(const MatrixField& q, std::int64_t a, std::int64_t b, int d) {
  Eigen::Matrix2d out = Eigen::Matrix2d::Zero();
  const Eigen::MatrixXd qa = q.at(a >= 0 ? a : b).real();
  const Eigen::MatrixXd qb = q.at(b >= 0 ? b : a).real();
  out.topLeftCorner(d, d) = 0.5 * (qa + qb);
  return out;
}

void check_face_elliptic(const Eigen::Matrix2d& q, int d) {
  const double lo = d == 1 ? q(0, 0)
                           : Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(q).eigenvalues().minCoeff();
  if (!(lo > 0.0)) throw std::invalid_argument("assemble_diffusion: face coefficient is not elliptic");
}

}  // namespace

SparseOperator assemble_diffusion(const MatrixField& q, const Grid& grid, int m) {
  if (q.kind() != FieldKind::diffusion || !(q.grid() == grid))
    throw std::invalid_argument("assemble_diffusion: Q must be a diffusion field on the grid");
  if (m < 1) throw std::invalid_argument("assemble_diffusion: m must be positive");
  const int d = grid.dim();
  const int n = grid.n_per_axis();
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  // Ghost cells map to -1 and drop out of every stencil.
  auto cell = [&](int ix, int iy) -> std::int64_t {
    if (ix < 0 || ix >= n || iy < 0 || iy >= (d == 2 ? n : 1)) return -1;
    return static_cast<std::int64_t>(grid.flat(ix, iy));
  };
  // Centered difference along `axis` at a cell, in units of 1/h.
  auto centered = [&](int ix, int iy, int axis, double w, Stencil& s) {
    if (cell(ix, iy) < 0) return;
    if (axis == 0) {
      s.add(cell(ix + 1, iy), 0.5 * w);
      s.add(cell(ix - 1, iy), -0.5 * w);
    } else {
      s.add(cell(ix, iy + 1), 0.5 * w);
      s.add(cell(ix, iy - 1), -0.5 * w);
    }
  };

  std::vector<Triplet> t;
  const int ny = d == 2 ? n : 1;
  for (int axis = 0; axis < d; ++axis) {
    const int other = 1 - axis;
    // Face between lower cell `lo` and upper cell `up` along `axis`.
    const int faces_a = axis == 0 ? n + 1 : n;
    const int faces_b = axis == 0 ? ny : n + 1;
    for (int fb = 0; fb < faces_b; ++fb) {
      for (int fa = 0; fa < faces_a; ++fa) {
        const int ux = fa, uy = fb;
        const int lx = axis == 0 ? ux - 1 : ux;
        const int ly = axis == 0 ? uy : uy - 1;
        const std::int64_t lo = cell(lx, ly), up = cell(ux, uy);
        if (lo < 0 && up < 0) continue;
        const Eigen::Matrix2d qf = face_mean(q, lo, up, d);
        check_face_elliptic(qf, d);
        Stencil normal;
        normal.add(up, 1.0);
        normal.add(lo, -1.0);
        add_outer(t, normal, normal, qf(axis, axis) * inv_h2);
        if (d == 2 && qf(0, 1) != 0.0) {
          Stencil tangential;
          centered(lx, ly, other, 0.5, tangential);
          centered(ux, uy, other, 0.5, tangential);
          add_outer(t, normal, tangential, 0.5 * qf(0, 1) * inv_h2);
          add_outer(t, tangential, normal, 0.5 * qf(0, 1) * inv_h2);
        }
      }
    }
  }
  // A = -K - I
  for (auto& e : t) e.value = -e.value;
  for (std::size_t c = 0; c < grid.cell_count(); ++c)
    t.push_back({static_cast<std::int64_t>(c), static_cast<std::int64_t>(c), -1.0});

  // Exact symmetrization removes summation-order round-off.
  auto scalar = SparseOperator::from_triplets(grid, 1, std::move(t), false);
  std::vector<Triplet> sym;
  sym.reserve(scalar.nonzeros());
  for (std::size_t r = 0; r < scalar.dims(); ++r)
    for (auto k = scalar.row_ptr()[r]; k < scalar.row_ptr()[r + 1]; ++k) {
      const auto c = scalar.cols()[k];
      const cplx v = 0.5 * (scalar.vals()[k] + scalar.entry(c, r));
      sym.push_back({static_cast<std::int64_t>(r), c, cplx(v.real(), 0.0)});
    }
  return SparseOperator::from_triplets(grid, m, expand_components(sym, m), true);
}

SparseOperator assemble_diffusion(const MatrixField& q, int m) {
  return assemble_diffusion(q, q.grid(), m);
}

SparseOperator assemble_potential(const MatrixField& v, int m) {
  if (v.kind() != FieldKind::potential) throw std::invalid_argument("assemble_potential: not a potential field");
  if (v.size() != m) throw std::invalid_argument("assemble_potential: V is not m x m");
  std::vector<Triplet> t;
  t.reserve(v.grid().cell_count() * m * m);
  bool sym = true;
  for (std::size_t c = 0; c < v.grid().cell_count(); ++c) {
    const DenseMatrix& b = v.at(c);
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l) {
        if (b(k, l) != b(l, k)) sym = false;
        if (b(k, l) != cplx{} || k == l)
          t.push_back({static_cast<std::int64_t>(c * m + k), static_cast<std::int64_t>(c * m + l), b(k, l)});
      }
  }
  return SparseOperator::from_triplets(v.grid(), m, std::move(t), sym);
}

SparseOperator assemble_potential(const MatrixField& v) { return assemble_potential(v, v.size()); }

VectorField apply_operator(const SparseOperator& op, const VectorField& f) {
  if (!(op.grid() == f.grid()) || op.components() != f.components())
    throw std::invalid_argument("apply_operator: dimension mismatch");
  VectorField out(f.grid(), f.components());
  op.apply(f.values(), out.values());
  return out;
}

double commutator_defect(const MatrixField& q, const MatrixField& mfield, const VectorField& f,
                         bool smooth_rule) {
  if (!smooth_rule)
    throw std::invalid_argument("commutator_defect: M must come from a twice differentiable rule");
  const Grid& g = f.grid();
  const int m = f.components();
  const int d = g.dim();
  if (mfield.size() != m || !(mfield.grid() == g) || !(q.grid() == g))
    throw std::invalid_argument("commutator_defect: layout mismatch");
  const SparseOperator a = assemble_diffusion(q, m);
  const SparseOperator mult = assemble_potential(mfield, m);
  VectorField comm = apply_operator(a, apply_operator(mult, f));
  comm -= apply_operator(mult, apply_operator(a, f));

  const double h = g.spacing();
  const int n = g.n_per_axis();
  auto value = [&](int ix, int iy, int l) -> cplx {
    if (ix < 0 || ix >= n || iy < 0 || iy >= (d == 2 ? n : 1)) return {};
    return f(g.flat(ix, iy), l);
  };
  auto df = [&](std::size_t c, int axis, int l) -> cplx {
    auto ij = g.multi(c);
    auto up = ij, dn = ij;
    up[axis] += 1;
    dn[axis] -= 1;
    return (value(up[0], up[1], l) - value(dn[0], dn[1], l)) / (2.0 * h);
  };

  std::vector<std::vector<DenseMatrix>> grad_m(d);
  for (int axis = 0; axis < d; ++axis) {
    grad_m[axis].reserve(g.cell_count());
    for (std::size_t c = 0; c < g.cell_count(); ++c)
      grad_m[axis].push_back(field_derivative(mfield, c, axis));
  }

  // flux[axis][c*m + k] = (Q (grad m_k.) f)_axis at cell c
  std::vector<std::vector<cplx>> flux(d, std::vector<cplx>(g.cell_count() * m));
  VectorField phi(g, m);
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    const Eigen::MatrixXd qc = q.at(c).real();
    for (int k = 0; k < m; ++k) {
      std::array<cplx, 2> grad{};
      for (int axis = 0; axis < d; ++axis)
        for (int l = 0; l < m; ++l) grad[axis] += grad_m[axis][c](k, l) * f(c, l);
      for (int i = 0; i < d; ++i) {
        cplx s{};
        for (int j = 0; j < d; ++j) s += qc(i, j) * grad[j];
        flux[i][c * m + k] = s;
      }
      cplx tr{};
      for (int l = 0; l < m; ++l)
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) tr += grad_m[i][c](k, l) * qc(i, j) * df(c, j, l);
      phi(c, k) = tr;
    }
  }
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    const auto ij = g.multi(c);
    for (int axis = 0; axis < d; ++axis) {
      auto prev = ij;
      prev[axis] -= 1;
      const bool ghost = prev[axis] < 0;
      const std::size_t pc = ghost ? 0 : g.flat(prev[0], prev[1]);
      for (int k = 0; k < m; ++k) {
        const cplx back = ghost ? cplx{} : flux[axis][pc * m + k];
        phi(c, k) += (flux[axis][c * m + k] - back) / h;
      }
    }
  }
  comm -= phi;
  return lp_norm(comm, 2.0);
}

void write_matrix_market(const SparseOperator& op, std::ostream& out) {
  out << "%%MatrixMarket matrix coordinate complex general\n";
  out << op.dims() << ' ' << op.dims() << ' ' << op.nonzeros() << '\n';
  char buf[96];
  for (std::size_t r = 0; r < op.dims(); ++r)
    for (auto k = op.row_ptr()[r]; k < op.row_ptr()[r + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%zu %lld %.17g %.17g\n", r + 1,
                    static_cast<long long>(op.cols()[k] + 1), op.vals()[k].real(), op.vals()[k].imag());
      out << buf;
    }
}

}  // namespace vschro
