#include <algorithm>
#include <cmath>
#include <vector>

#include "reduction.hpp"

namespace vschro::kernels::serial {

void spmv(const CsrView& a, std::span<const cplx> x, std::span<cplx> y) {
  for (std::size_t r = 0; r < a.rows; ++r) {
    cplx s{};
    for (auto k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) s += a.vals[k] * x[a.cols[k]];
    y[r] = s;
  }
}

void apply_cell_blocks(std::span<const cplx> blocks, int m, std::span<const cplx> x,
                       std::span<cplx> y) {
  const std::size_t cells = x.size() / m;
  const std::size_t mm = static_cast<std::size_t>(m) * m;
  for (std::size_t c = 0; c < cells; ++c) {
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
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = a * x[i] + b * y[i];
}

double pairwise_sum(std::span<const double> terms) {
  const std::size_t n = terms.size();
  auto term = [&](std::size_t i) { return terms[i]; };
  std::vector<double> partial(detail::chunk_count(n));
  for (std::size_t c = 0; c < partial.size(); ++c)
    partial[c] = detail::chunk_partial<double>(c, n, term);
  return detail::pairwise<double>(0, partial.size(), [&](std::size_t i) { return partial[i]; });
}

namespace {

double cell_norm(const cplx* v, int m) {
  double s = 0.0;
  for (int k = 0; k < m; ++k) s += std::norm(v[k]);
  return std::sqrt(s);
}

}  // namespace

double sum_cell_norm_pow(std::span<const cplx> f, int m, double p) {
  const std::size_t cells = f.size() / m;
  auto term = [&](std::size_t c) {
    const double r = cell_norm(f.data() + c * m, m);
    return p == 2.0 ? r * r : std::pow(r, p);
  };
  std::vector<double> partial(detail::chunk_count(cells));
  for (std::size_t c = 0; c < partial.size(); ++c)
    partial[c] = detail::chunk_partial<double>(c, cells, term);
  return detail::pairwise<double>(0, partial.size(), [&](std::size_t i) { return partial[i]; });
}

double max_cell_norm(std::span<const cplx> f, int m) {
  const std::size_t cells = f.size() / m;
  double best = 0.0;
  for (std::size_t c = 0; c < cells; ++c) best = std::max(best, cell_norm(f.data() + c * m, m));
  return best;
}

cplx dot(std::span<const cplx> x, std::span<const cplx> y) {
  const std::size_t n = x.size();
  auto term = [&](std::size_t i) { return x[i] * std::conj(y[i]); };
  std::vector<cplx> partial(detail::chunk_count(n));
  for (std::size_t c = 0; c < partial.size(); ++c)
    partial[c] = detail::chunk_partial<cplx>(c, n, term);
  return detail::pairwise<cplx>(0, partial.size(), [&](std::size_t i) { return partial[i]; });
}

}  // namespace vschro::kernels::serial
