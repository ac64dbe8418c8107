#pragma once

#include <Eigen/SparseCore>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "vschro/fields.hpp"
#include "vschro/kernels.hpp"
#include "vschro/mesh.hpp"

namespace vschro {

struct Triplet {
  std::int64_t row;
  std::int64_t col;
  cplx value;
};

/// Square CSR operator on fields with layout (grid, m). Row offsets are
/// nondecreasing and column indices sorted within each row.
class SparseOperator {
 public:
  SparseOperator(Grid grid, int m, std::vector<std::int64_t> row_ptr,
                 std::vector<std::int64_t> cols, std::vector<cplx> vals, bool symmetric);

  /// Duplicates are summed. Setting `symmetric` asserts |Op - Op^T|_max <= 1e-12.
  static SparseOperator from_triplets(Grid grid, int m, std::vector<Triplet> triplets,
                                      bool symmetric);
  static SparseOperator identity(Grid grid, int m, cplx scale = 1.0);

  const Grid& grid() const { return grid_; }
  int components() const { return m_; }
  std::size_t dims() const { return row_ptr_.size() - 1; }
  std::size_t nonzeros() const { return vals_.size(); }
  bool symmetric() const { return symmetric_; }

  std::span<const std::int64_t> row_ptr() const { return row_ptr_; }
  std::span<const std::int64_t> cols() const { return cols_; }
  std::span<const cplx> vals() const { return vals_; }
  kernels::CsrView view() const { return {dims(), row_ptr_, cols_, vals_}; }

  cplx entry(std::size_t row, std::size_t col) const;
  std::vector<cplx> diagonal() const;
  double max_asymmetry() const;
  /// Off-diagonal entries real and nonnegative.
  bool nonnegative_offdiagonal() const;

  SparseOperator adjoint() const;
  void apply(std::span<const cplx> x, std::span<cplx> y) const;
  Eigen::SparseMatrix<cplx, Eigen::RowMajor, std::int64_t> to_eigen() const;
  Eigen::MatrixXcd to_dense() const;

 private:
  Grid grid_;
  int m_;
  std::vector<std::int64_t> row_ptr_;
  std::vector<std::int64_t> cols_;
  std::vector<cplx> vals_;
  bool symmetric_;
};

/// alpha a + beta b
SparseOperator combine(cplx alpha, const SparseOperator& a, cplx beta, const SparseOperator& b);
/// a + c I
SparseOperator shifted(const SparseOperator& a, cplx c);
SparseOperator operator+(const SparseOperator& a, const SparseOperator& b);

/// Flux-form discretization -G^T W_Q G - I of div(Q grad .) - 1, applied
/// identically to each of the m components. Face coefficients are arithmetic
/// means of the adjacent cells; in 2D the off-diagonal q12 couples each
/// face-normal difference to the face-averaged tangential difference.
/// Throws std::invalid_argument when a face coefficient is not elliptic.
SparseOperator assemble_diffusion(const MatrixField& q, const Grid& grid, int m);
SparseOperator assemble_diffusion(const MatrixField& q, int m);

/// Block-diagonal multiplication by V(x_i).
SparseOperator assemble_potential(const MatrixField& v, int m);
SparseOperator assemble_potential(const MatrixField& v);

VectorField apply_operator(const SparseOperator& op, const VectorField& f);

/// L2 norm of (A M - M A) f - Phi(f), Phi the discretized right-hand side of
/// the product-rule identity
///   [(A M - M A) f]_k = div(Q (grad m_k.) f) + tr[Q (grad m_k.) Df].
/// Derivatives of M and f are centered differences; the divergence is the
/// backward difference of the flux stencil, so the defect is O(h).
double commutator_defect(const MatrixField& q, const MatrixField& mfield, const VectorField& f,
                         bool smooth_rule = true);

/// Matrix Market coordinate complex general.
void write_matrix_market(const SparseOperator& op, std::ostream& out);

}  // namespace vschro
