#pragma once

// Shared generators and dense reference computations for the unit tests.

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

#include "vschro/fields.hpp"
#include "vschro/mesh.hpp"
#include "vschro/operators.hpp"

namespace vschro::testing {

inline VectorField random_field(const Grid& g, int m, std::mt19937_64& rng, bool real = false) {
  std::normal_distribution<double> nd;
  VectorField f(g, m);
  for (auto& v : f.values()) v = cplx(nd(rng), real ? 0.0 : nd(rng));
  return f;
}

inline VectorField sampled(const Grid& g, int m,
                           const std::function<cplx(const std::array<double, 2>&, int)>& rule) {
  VectorField f(g, m);
  for (std::size_t c = 0; c < g.cell_count(); ++c)
    for (int k = 0; k < m; ++k) f(c, k) = rule(g.coords(c), k);
  return f;
}

inline DenseMatrix random_matrix(int n, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  DenseMatrix m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = scale * cplx(nd(rng), nd(rng));
  return m;
}

/// e^{tL} f by dense scaling and squaring (Eigen's unsupported MatrixFunctions).
inline VectorField dense_expm_action(const SparseOperator& l, double t, const VectorField& f) {
  const Eigen::MatrixXcd e = (t * l.to_dense()).exp();
  Eigen::Map<const Eigen::VectorXcd> fv(f.values().data(), f.size());
  const Eigen::VectorXcd out = e * fv;
  return VectorField(f.grid(), f.components(), std::vector<cplx>(out.data(), out.data() + out.size()));
}

inline double max_abs_diff(const VectorField& a, const VectorField& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
  return worst;
}

}  // namespace vschro::testing
