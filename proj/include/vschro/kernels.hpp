#pragma once

// Data-parallel inner loops. Every kernel exists twice: a serial reference
// in kernels::serial and an OpenMP version in kernels::omp. Both follow the
// same summation order, so reductions agree bit for bit regardless of the
// thread count.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

namespace vschro::kernels {

using cplx = std::complex<double>;

/// Non-owning CSR view.
struct CsrView {
  std::size_t rows = 0;
  std::span<const std::int64_t> row_ptr;
  std::span<const std::int64_t> cols;
  std::span<const cplx> vals;
};

/// Reductions are split into fixed chunks of this many terms; each chunk is
/// summed pairwise and the chunk partials are then combined pairwise.
inline constexpr std::size_t kReductionChunk = 4096;

namespace serial {

void spmv(const CsrView& a, std::span<const cplx> x, std::span<cplx> y);

/// y(cell) = B(cell) x(cell) with row-major m*m blocks per cell.
void apply_cell_blocks(std::span<const cplx> blocks, int m, std::span<const cplx> x,
                       std::span<cplx> y);

/// y = a x + b y
void axpby(cplx a, std::span<const cplx> x, cplx b, std::span<cplx> y);

double pairwise_sum(std::span<const double> terms);

/// sum over cells of |f(cell)|^p, f with m components per cell.
double sum_cell_norm_pow(std::span<const cplx> f, int m, double p);
double max_cell_norm(std::span<const cplx> f, int m);

/// sum_i x_i conj(y_i)
cplx dot(std::span<const cplx> x, std::span<const cplx> y);

}  // namespace serial

namespace omp {

void spmv(const CsrView& a, std::span<const cplx> x, std::span<cplx> y);
void apply_cell_blocks(std::span<const cplx> blocks, int m, std::span<const cplx> x,
                       std::span<cplx> y);
void axpby(cplx a, std::span<const cplx> x, cplx b, std::span<cplx> y);
double pairwise_sum(std::span<const double> terms);
double sum_cell_norm_pow(std::span<const cplx> f, int m, double p);
double max_cell_norm(std::span<const cplx> f, int m);
cplx dot(std::span<const cplx> x, std::span<const cplx> y);

}  // namespace omp

/// Thread control shared by the OpenMP kernels. 0 means the runtime default.
void set_threads(int n);
int max_threads();

}  // namespace vschro::kernels
