#include "vschro/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "vschro/kernels.hpp"

namespace vschro {

Grid::Grid(int dim, double extent, int n_per_axis)
    : dim_(dim), extent_(extent), n_(n_per_axis) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
  if (!(extent > 0.0) || !std::isfinite(extent))
    throw std::invalid_argument("grid extent must be positive");
  if (n_per_axis < 3) throw std::invalid_argument("grid needs at least 3 cells per axis");
  h_ = 2.0 * extent / (n_per_axis + 1);
  cells_ = dim == 1 ? static_cast<std::size_t>(n_) : static_cast<std::size_t>(n_) * n_;
  measure_ = dim == 1 ? h_ : h_ * h_;
}

std::array<double, 2> Grid::coords(std::size_t cell) const {
  const auto ij = multi(cell);
  return {axis_coord(ij[0]), dim_ == 2 ? axis_coord(ij[1]) : 0.0};
}

std::array<int, 2> Grid::multi(std::size_t cell) const {
  return {static_cast<int>(cell % n_), static_cast<int>(cell / n_)};
}

Grid build_grid(int dim, double extent, int n_per_axis) { return Grid(dim, extent, n_per_axis); }

VectorField::VectorField(Grid grid, int components)
    : grid_(grid), m_(components) {
  if (components < 1) throw std::invalid_argument("field needs at least one component");
  values_.assign(grid_.cell_count() * m_, cplx{});
}

VectorField::VectorField(Grid grid, int components, std::vector<cplx> values)
    : grid_(grid), m_(components), values_(std::move(values)) {
  if (components < 1) throw std::invalid_argument("field needs at least one component");
  if (values_.size() != grid_.cell_count() * m_)
    throw std::invalid_argument("field value count must be cells * components");
}

bool VectorField::is_real() const {
  return std::all_of(values_.begin(), values_.end(), [](cplx v) { return v.imag() == 0.0; });
}

double VectorField::max_imag() const {
  double best = 0.0;
  for (auto v : values_) best = std::max(best, std::abs(v.imag()));
  return best;
}

VectorField& VectorField::operator+=(const VectorField& other) {
  if (!same_layout(other)) throw std::invalid_argument("field layout mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  if (!same_layout(other)) throw std::invalid_argument("field layout mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

VectorField& VectorField::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

VectorField operator+(VectorField a, const VectorField& b) { return a += b; }
VectorField operator-(VectorField a, const VectorField& b) { return a -= b; }
VectorField operator*(cplx s, VectorField a) { return a *= s; }

double lp_norm(const VectorField& f, double p) {
  if (std::isnan(p) || p < 1.0) throw std::invalid_argument("lp_norm requires p >= 1");
  if (std::isinf(p)) return kernels::omp::max_cell_norm(f.values(), f.components());
  const double s = kernels::omp::sum_cell_norm_pow(f.values(), f.components(), p);
  return std::pow(s * f.grid().cell_measure(), 1.0 / p);
}

cplx dual_pairing(const VectorField& f, const VectorField& g) {
  if (!f.same_layout(g)) throw std::invalid_argument("dual_pairing: fields live on different grids");
  return kernels::omp::dot(f.values(), g.values()) * f.grid().cell_measure();
}

namespace {

void put_number(std::ostream& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  out << buf;
}

}  // namespace

void write_csv(const VectorField& f, std::ostream& out) {
  const Grid& g = f.grid();
  out << (g.dim() == 1 ? "x" : "x,y") << ",component,real,imag\n";
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    const auto x = g.coords(c);
    for (int k = 0; k < f.components(); ++k) {
      put_number(out, x[0]);
      out << ',';
      if (g.dim() == 2) {
        put_number(out, x[1]);
        out << ',';
      }
      out << k << ',';
      put_number(out, f(c, k).real());
      out << ',';
      put_number(out, f(c, k).imag());
      out << '\n';
    }
  }
}

void write_pgm(const VectorField& f, int component, std::ostream& out) {
  if (component < 0 || component >= f.components())
    throw std::invalid_argument("write_pgm: component out of range");
  const Grid& g = f.grid();
  const int width = g.n_per_axis();
  const int height = g.dim() == 2 ? g.n_per_axis() : 1;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    const double a = std::abs(f(c, component));
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  const double span = hi > lo ? hi - lo : 1.0;
  out << "P5\n" << width << ' ' << height << "\n255\n";
  // Image rows run top to bottom, so the largest y comes first.
  for (int iy = height - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < width; ++ix) {
      const double a = std::abs(f(g.flat(ix, iy), component));
      const auto byte = static_cast<unsigned char>(std::lround(255.0 * (a - lo) / span));
      out.put(static_cast<char>(byte));
    }
  }
}

VectorField gaussian_field(const Grid& g, int m, double center, double width, double phase) {
  VectorField f(g, m);
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    const auto x = g.coords(c);
    double r2 = (x[0] - center) * (x[0] - center);
    if (g.dim() == 2) r2 += x[1] * x[1];
    const double e = std::exp(-r2 / (width * width));
    for (int k = 0; k < m; ++k) f(c, k) = e * (1.0 + phase * k);
  }
  return f;
}

}  // namespace vschro
