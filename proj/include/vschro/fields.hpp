#pragma once

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vschro/mesh.hpp"

namespace vschro {

using DenseMatrix = Eigen::MatrixXcd;

enum class FieldKind { diffusion, potential };

/// Per-point matrix rule x -> M(x). Unused trailing coordinates are zero.
using MatrixRule = std::function<DenseMatrix(const std::array<double, 2>&)>;

/// One small dense square matrix per grid cell. Diffusion fields are d x d
/// and symmetric; potential fields are m x m.
class MatrixField {
 public:
  MatrixField(Grid grid, FieldKind kind, int size, std::vector<DenseMatrix> values,
              double symmetry_defect = 0.0);

  const Grid& grid() const { return grid_; }
  FieldKind kind() const { return kind_; }
  int size() const { return size_; }
  const DenseMatrix& at(std::size_t cell) const { return values_[cell]; }
  std::span<const DenseMatrix> values() const { return values_; }

  /// Largest |M - M^T| entry removed when the field was symmetrized.
  double symmetry_defect() const { return symmetry_defect_; }
  bool is_real() const;

 private:
  Grid grid_;
  FieldKind kind_;
  int size_;
  std::vector<DenseMatrix> values_;
  double symmetry_defect_;
};

/// values(i) = rule(coords(i)). Diffusion fields are symmetrized; a defect
/// above 1e-8 or any non-finite entry throws std::invalid_argument.
MatrixField sample_field(const MatrixRule& rule, const Grid& grid, FieldKind kind, int size);

/// Cellwise transform, same grid and kind.
MatrixField transform(const MatrixField& field,
                      const std::function<DenseMatrix(const DenseMatrix&)>& op);

/// V + c I at every cell.
MatrixField shifted(const MatrixField& v, double c);
/// Cellwise adjoint V^*.
MatrixField adjoint(const MatrixField& v);

// Matrix functions of small dense matrices.

/// Scaling and squaring with the [13/13] Pade approximant. Throws
/// NumericalError when the 1-norm exceeds 1e8.
DenseMatrix matrix_exp(const DenseMatrix& m);

/// Principal power M^z. Uses the eigendecomposition when the eigenbasis is
/// well conditioned; otherwise real exponents z in (-1, 0) fall back to
/// fractional_power_quadrature and anything else throws NumericalError.
DenseMatrix matrix_power(const DenseMatrix& m, cplx z);

/// Eigendecomposition route of matrix_power. Throws when the eigenbasis
/// condition number exceeds 1e8.
DenseMatrix matrix_power_eigen(const DenseMatrix& m, cplx z);

/// M^{-alpha} for alpha in (0, 1) by the Balakrishnan integral
///   (sin(pi alpha) / pi) * int_0^inf t^{-alpha} (t + M)^{-1} dt
/// after t = e^u, with adaptively split Gauss-Legendre panels on [-40, 40]
/// and analytic tail corrections outside.
DenseMatrix fractional_power_quadrature(const DenseMatrix& m, double alpha);

/// Largest singular value.
double norm2(const DenseMatrix& m);
/// Smallest singular value.
double min_singular(const DenseMatrix& m);

/// Sampled check of the standing hypotheses. Violations are recorded, never
/// thrown. Suprema are taken over the sampled box only.
struct HypothesisReport {
  double eta1 = 0.0;
  double eta2 = 0.0;
  /// max over cells of lambda_max(sym V) + 1; <= 0 means dissipative.
  double dissipativity_margin = 0.0;
  double alpha = 0.0;
  /// max over cells and axes of |D_j V (-V)^{-alpha}|_F; +inf when the power
  /// does not exist at some cell.
  double growth_sup = 0.0;
  double offdiag_min = 0.0;
  std::vector<double> kappa_profile;
  double shift_beta = 0.0;
  std::string notes;

  bool elliptic() const { return eta1 > 0.0; }
  bool dissipative(double tol = 1e-12) const { return dissipativity_margin <= tol; }
  bool growth_bounded() const;
  bool passes() const { return elliptic() && dissipative() && growth_bounded(); }
};

HypothesisReport validate_hypotheses(const MatrixField& q, const MatrixField& v, double alpha);

/// Centered-difference derivative of a matrix field along one axis, one-sided
/// at the outermost cells.
DenseMatrix field_derivative(const MatrixField& v, std::size_t cell, int axis);

/// Potential moved so that <V xi, xi> <= -|xi|^2: V - (beta + 1) I with
/// beta = max(0, max_x lambda_max(sym V(x))). The semigroup of the original
/// potential is e^{t(beta+1)} times the shifted one.
struct ShiftedPotential {
  MatrixField potential;
  double beta = 0.0;
};
ShiftedPotential normalize_shift(const MatrixField& v);

}  // namespace vschro
