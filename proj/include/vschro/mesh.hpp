#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace vschro {

using cplx = std::complex<double>;

/// Cell-centered discretization of the box [-R, R]^d with an implicit zero
/// ghost layer. Cell i along an axis sits at -R + (i+1)h, h = 2R/(N+1).
class Grid {
 public:
  Grid(int dim, double extent, int n_per_axis);

  int dim() const { return dim_; }
  double extent() const { return extent_; }
  int n_per_axis() const { return n_; }
  double spacing() const { return h_; }
  std::size_t cell_count() const { return cells_; }
  double cell_measure() const { return measure_; }

  /// Coordinate of index i along one axis.
  double axis_coord(int i) const { return -extent_ + (i + 1) * h_; }

  /// Point of a flat cell index; unused trailing coordinates are zero.
  std::array<double, 2> coords(std::size_t cell) const;

  /// Flat index, x fastest.
  std::size_t flat(int ix, int iy = 0) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(ix);
  }
  std::array<int, 2> multi(std::size_t cell) const;

  bool operator==(const Grid&) const = default;

 private:
  int dim_;
  double extent_;
  int n_;
  double h_;
  std::size_t cells_;
  double measure_;
};

Grid build_grid(int dim, double extent, int n_per_axis);

/// m-component complex grid function, stored cell-major: value(cell, k) at
/// cell * m + k.
class VectorField {
 public:
  VectorField(Grid grid, int components);
  VectorField(Grid grid, int components, std::vector<cplx> values);

  const Grid& grid() const { return grid_; }
  int components() const { return m_; }
  std::size_t size() const { return values_.size(); }

  cplx& operator()(std::size_t cell, int k) { return values_[cell * m_ + k]; }
  cplx operator()(std::size_t cell, int k) const { return values_[cell * m_ + k]; }

  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }

  /// True when every imaginary part is exactly zero.
  bool is_real() const;
  double max_imag() const;

  bool same_layout(const VectorField& other) const {
    return grid_ == other.grid_ && m_ == other.m_;
  }

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(cplx s);

 private:
  Grid grid_;
  int m_;
  std::vector<cplx> values_;
};

VectorField operator+(VectorField a, const VectorField& b);
VectorField operator-(VectorField a, const VectorField& b);
VectorField operator*(cplx s, VectorField a);

/// Discrete L^p norm (sum_cells |f(x)|^p h^d)^(1/p), |.| Euclidean over the
/// components; p = infinity gives the max cell norm. Throws for p < 1.
double lp_norm(const VectorField& f, double p);

/// <f, g> = sum_cells <f(x), conj g(x)> h^d.
cplx dual_pairing(const VectorField& f, const VectorField& g);

/// exp(-|x - c e_1|^2 / w^2) in every component, component k scaled by
/// 1 + phase k.
VectorField gaussian_field(const Grid& g, int m, double center, double width, double phase = 0.0);

/// CSV with columns x[,y],component,real,imag.
void write_csv(const VectorField& f, std::ostream& out);

/// 8-bit binary PGM of |component k|, min-max scaled. 1D fields produce a
/// single-row image.
void write_pgm(const VectorField& f, int component, std::ostream& out);

}  // namespace vschro
