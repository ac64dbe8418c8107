#include "vschro/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "vschro/error.hpp"

namespace vschro {

MatrixField::MatrixField(Grid grid, FieldKind kind, int size, std::vector<DenseMatrix> values,
                         double symmetry_defect)
    : grid_(grid), kind_(kind), size_(size), values_(std::move(values)),
      symmetry_defect_(symmetry_defect) {
  if (values_.size() != grid_.cell_count())
    throw std::invalid_argument("matrix field needs one matrix per cell");
  if (kind == FieldKind::diffusion && size != grid.dim())
    throw std::invalid_argument("diffusion field must be d x d");
  for (const auto& v : values_)
    if (v.rows() != size || v.cols() != size)
      throw std::invalid_argument("matrix field entry has wrong dimensions");
}

bool MatrixField::is_real() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](const DenseMatrix& m) { return m.imag().cwiseAbs().maxCoeff() == 0.0; });
}

MatrixField sample_field(const MatrixRule& rule, const Grid& grid, FieldKind kind, int size) {
  if (kind == FieldKind::diffusion && size != grid.dim())
    throw std::invalid_argument("diffusion rule must produce d x d matrices");
  std::vector<DenseMatrix> values;
  values.reserve(grid.cell_count());
  double defect = 0.0;
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    DenseMatrix m = rule(grid.coords(c));
    if (m.rows() != size || m.cols() != size)
      throw std::invalid_argument("matrix rule returned wrong dimensions");
    for (Eigen::Index i = 0; i < m.size(); ++i)
      if (!std::isfinite(m(i).real()) || !std::isfinite(m(i).imag()))
        throw std::invalid_argument("matrix rule returned a non-finite entry");
    if (kind == FieldKind::diffusion) {
      defect = std::max(defect, (m - m.transpose()).cwiseAbs().maxCoeff());
      m = 0.5 * (m + m.transpose()).eval();
    }
    values.push_back(std::move(m));
  }
  if (defect > 1e-8) throw std::invalid_argument("diffusion rule is not symmetric");
  return MatrixField(grid, kind, size, std::move(values), defect);
}

MatrixField transform(const MatrixField& field,
                      const std::function<DenseMatrix(const DenseMatrix&)>& op) {
  std::vector<DenseMatrix> values;
  values.reserve(field.values().size());
  for (const auto& m : field.values()) values.push_back(op(m));
  return MatrixField(field.grid(), field.kind(), field.size(), std::move(values),
                     field.symmetry_defect());
}

MatrixField shifted(const MatrixField& v, double c) {
  const int n = v.size();
  return transform(v, [&](const DenseMatrix& m) -> DenseMatrix {
    return m + c * DenseMatrix::Identity(n, n);
  });
}

MatrixField adjoint(const MatrixField& v) {
  return transform(v, [](const DenseMatrix& m) -> DenseMatrix { return m.adjoint(); });
}

DenseMatrix field_derivative(const MatrixField& v, std::size_t cell, int axis) {
  const Grid& g = v.grid();
  auto ij = g.multi(cell);
  const int i = ij[axis];
  const int n = g.n_per_axis();
  auto neighbor = [&](int offset) {
    auto k = ij;
    k[axis] = i + offset;
    return g.flat(k[0], k[1]);
  };
  const double h = g.spacing();
  if (i > 0 && i < n - 1) return (v.at(neighbor(1)) - v.at(neighbor(-1))) / (2.0 * h);
  if (i == 0) return (v.at(neighbor(1)) - v.at(cell)) / h;
  return (v.at(cell) - v.at(neighbor(-1))) / h;
}

bool HypothesisReport::growth_bounded() const { return std::isfinite(growth_sup); }

namespace {

double max_hermitian_eigenvalue(const DenseMatrix& m) {
  const DenseMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace

HypothesisReport validate_hypotheses(const MatrixField& q, const MatrixField& v, double alpha) {
  if (!(q.grid() == v.grid())) throw std::invalid_argument("validate_hypotheses: grid mismatch");
  if (!(alpha >= 0.0 && alpha < 0.5))
    throw std::invalid_argument("validate_hypotheses: alpha must lie in [0, 1/2)");
  const Grid& g = v.grid();
  HypothesisReport r;
  r.alpha = alpha;
  r.eta1 = std::numeric_limits<double>::infinity();
  r.eta2 = -std::numeric_limits<double>::infinity();
  for (const auto& qm : q.values()) {
    const Eigen::MatrixXd sym = 0.5 * (qm.real() + qm.real().transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
    r.eta1 = std::min(r.eta1, es.eigenvalues().minCoeff());
    r.eta2 = std::max(r.eta2, es.eigenvalues().maxCoeff());
  }

  const int m = v.size();
  double lam_max = -std::numeric_limits<double>::infinity();
  r.offdiag_min = m > 1 ? std::numeric_limits<double>::infinity() : 0.0;
  r.kappa_profile.resize(g.cell_count());
  r.growth_sup = 0.0;
  std::size_t undefined_cells = 0;
  std::ostringstream notes;
  const DenseMatrix id = DenseMatrix::Identity(m, m);
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    const DenseMatrix& vm = v.at(c);
    lam_max = std::max(lam_max, max_hermitian_eigenvalue(vm));
    for (int k = 0; k < m; ++k)
      for (int l = 0; l < m; ++l)
        if (k != l) r.offdiag_min = std::min(r.offdiag_min, vm(k, l).real());
    r.kappa_profile[c] = min_singular(vm);

    DenseMatrix power = id;
    if (alpha > 0.0) {
      try {
        power = matrix_power(-vm, cplx(-alpha, 0.0));
      } catch (const NumericalError&) {
        ++undefined_cells;
        r.growth_sup = std::numeric_limits<double>::infinity();
        continue;
      }
    }
    for (int axis = 0; axis < g.dim(); ++axis) {
      const double val = (field_derivative(v, c, axis) * power).norm();
      r.growth_sup = std::max(r.growth_sup, val);
    }
  }
  r.dissipativity_margin = lam_max + 1.0;
  r.shift_beta = std::max(0.0, lam_max);
  notes << "suprema over the sampled box [-" << g.extent() << ", " << g.extent() << "]^" << g.dim();
  if (undefined_cells > 0)
    notes << "; (-V)^{-alpha} undefined at " << undefined_cells << " cells";
  if (!r.dissipative()) notes << "; quadratic form exceeds -|xi|^2";
  r.notes = notes.str();
  return r;
}

ShiftedPotential normalize_shift(const MatrixField& v) {
  double lam_max = -std::numeric_limits<double>::infinity();
  for (const auto& m : v.values()) lam_max = std::max(lam_max, max_hermitian_eigenvalue(m));
  const double beta = std::max(0.0, lam_max);
  return {shifted(v, -(beta + 1.0)), beta};
}

}  // namespace vschro
