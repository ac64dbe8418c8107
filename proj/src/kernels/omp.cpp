#include <omp.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "reduction.hpp"

namespace vschro::kernels {

void set_threads(int n) {
  if (n > 0) omp_set_num_threads(n);
}

int max_threads() { return omp_get_max_threads(); }

namespace omp {

namespace {

using Index = std::ptrdiff_t;

double cell_norm(const cplx* v, int m) {
  double s = 0.0;
  for (int k = 0; k < m; ++k) s += std::norm(v[k]);
  return std::sqrt(s);
}

template <class T, class Term>
T chunked_sum(std::size_t n, const Term& term) {
  std::vector<T> partial(detail::chunk_count(n));
  const Index chunks = static_cast<Index>(partial.size());
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < chunks; ++c) partial[c] = detail::chunk_partial<T>(c, n, term);
  return detail::pairwise<T>(0, partial.size(), [&](std::size_t i) { return partial[i]; });
}

}  // namespace

void spmv(const CsrView& a, std::span<const cplx> x, std::span<cplx> y) {
  const Index rows = static_cast<Index>(a.rows);
#pragma omp parallel for schedule(static)
  for (Index r = 0; r < rows; ++r) {
    cplx s{};
    for (auto k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.vals[k] * x[a.cols[k]];
    y[r] = s;
  }
}

void apply_cell_blocks(std::span<const cplx> blocks, int m, std::span<const cplx> x,
                       std::span<cplx> y) {
  const Index cells = static_cast<Index>(x.size() / m);
  const std::size_t mm = static_cast<std::size_t>(m) * m;
#pragma omp parallel for schedule(static)
  for (Index c = 0; c < cells; ++c) {
    const cplx* b = blocks.data() + c * mm;
    const cplx* xc = x.data() + c * m;
    cplx* yc = y.data() + c * m;
    for (int i = 0; i < m; ++i) {
      cplx s{};
      for (int j = 0; j < m; ++j) s += b[i * m + j] * xc[j];
      yc[i] = s;
    }
  }
}

void axpby(cplx a, std::span<const cplx> x, cplx b, std::span<cplx> y) {
  const Index n = static_cast<Index>(y.size());
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

double pairwise_sum(std::span<const double> terms) {
  return chunked_sum<double>(terms.size(), [&](std::size_t i) { return terms[i]; });
}

double sum_cell_norm_pow(std::span<const cplx> f, int m, double p) {
  return chunked_sum<double>(f.size() / m, [&](std::size_t c) {
    const double r = cell_norm(f.data() + c * m, m);
    return p == 2.0 ? r * r : std::pow(r, p);
  });
}

double max_cell_norm(std::span<const cplx> f, int m) {
  const Index cells = static_cast<Index>(f.size() / m);
  double best = 0.0;
#pragma omp parallel for reduction(max : best) schedule(static)
  for (Index c = 0; c < cells; ++c) best = std::max(best, cell_norm(f.data() + c * m, m));
  return best;
}

cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  return chunked_sum<cplx>(x.size(), [&](std::size_t i) { return x[i] * std::conj(y[i]); });
}

}  // namespace omp
}  // namespace vschro::kernels
