#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "vschro/kernels.hpp"
#include "vschro/operators.hpp"
#include "vschro/rules.hpp"

using namespace vschro;
namespace ks = vschro::kernels::serial;
namespace ko = vschro::kernels::omp;

TEST_CASE("OpenMP reductions match the serial reference bit for bit") {
  std::mt19937_64 rng(11);
  for (std::size_t n : {0ul, 1ul, 17ul, 4095ul, 4096ul, 4097ul, 100000ul}) {
    std::vector<double> terms(n);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (auto& t : terms) t = ud(rng);
    CHECK(ks::pairwise_sum(terms) == ko::pairwise_sum(terms));
    std::vector<cplx> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = cplx(ud(rng), ud(rng));
      y[i] = cplx(ud(rng), ud(rng));
    }
    CHECK(ks::dot(x, y) == ko::dot(x, y));
    if (n % 2 == 0) {
      for (double p : {1.0, 2.0, 3.5}) CHECK(ks::sum_cell_norm_pow(x, 2, p) == ko::sum_cell_norm_pow(x, 2, p));
      CHECK(ks::max_cell_norm(x, 2) == ko::max_cell_norm(x, 2));
    }
  }
}

TEST_CASE("reductions are independent of the thread count") {
  std::mt19937_64 rng(12);
  std::vector<cplx> x(50000);
  std::normal_distribution<double> nd;
  for (auto& v : x) v = cplx(nd(rng), nd(rng));
  kernels::set_threads(1);
  const cplx a = ko::dot(x, x);
  const double b = ko::sum_cell_norm_pow(x, 5, 4.0);
  kernels::set_threads(4);
  CHECK(ko::dot(x, x) == a);
  CHECK(ko::sum_cell_norm_pow(x, 5, 4.0) == b);
  kernels::set_threads(1);
}

TEST_CASE("pairwise summation is accurate") {
  // 1e6 copies of 0.1: naive summation drifts by ~1e-6 relative.
  std::vector<double> terms(1000000, 0.1);
  CHECK(ks::pairwise_sum(terms) == doctest::Approx(1e5).epsilon(1e-14));
}

TEST_CASE("spmv and cell blocks agree between serial and OpenMP") {
  std::mt19937_64 rng(13);
  const Grid g = build_grid(2, 1.0, 20);
  const auto q = make_diffusion_field({"constant_Q", {{"q12", 0.3}}, ""}, g);
  const auto a = assemble_diffusion(q, 2);
  const auto f = testing::random_field(g, 2, rng);
  std::vector<cplx> y1(a.dims()), y2(a.dims());
  ks::spmv(a.view(), f.values(), y1);
  ko::spmv(a.view(), f.values(), y2);
  CHECK(y1 == y2);

  std::vector<cplx> blocks(g.cell_count() * 4);
  std::normal_distribution<double> nd;
  for (auto& b : blocks) b = cplx(nd(rng), nd(rng));
  ks::apply_cell_blocks(blocks, 2, f.values(), y1);
  ko::apply_cell_blocks(blocks, 2, f.values(), y2);
  CHECK(y1 == y2);
  // cell 7, component 1
  const cplx expect = blocks[7 * 4 + 2] * f(7, 0) + blocks[7 * 4 + 3] * f(7, 1);
  CHECK(std::abs(y1[7 * 2 + 1] - expect) < 1e-14);
}
