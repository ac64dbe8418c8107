#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "test_support.hpp"
#include "vschro/mesh.hpp"

using namespace vschro;
using doctest::Approx;

TEST_CASE("build_grid cell-centering") {
  const Grid g = build_grid(1, 1.0, 3);
  CHECK(g.spacing() == Approx(0.5));
  CHECK(g.axis_coord(0) == Approx(-0.5));
  CHECK(g.axis_coord(1) == Approx(0.0));
  CHECK(g.axis_coord(2) == Approx(0.5));

  const Grid g2 = build_grid(2, 2.0, 4);
  CHECK(g2.cell_count() == 16);
  CHECK(g2.spacing() == Approx(0.8));
  CHECK(g2.cell_measure() == Approx(0.64));

  const Grid g3 = build_grid(1, 40.0, 799);
  CHECK(g3.spacing() == Approx(0.1).epsilon(1e-14));
  CHECK(g3.cell_count() == 799);
  CHECK(g3.spacing() * 800 == Approx(80.0).epsilon(1e-15));
}

TEST_CASE("build_grid rejects bad input") {
  CHECK_THROWS_AS(build_grid(3, 1.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(0, 1.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(1, 0.0, 8), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(1, -2.0, 8), std::invalid_argument);
}

TEST_CASE("grid invariants: interior coordinates and bijective flat index") {
  for (int n : {3, 4, 7, 16}) {
    const Grid g = build_grid(2, 1.5, n);
    std::set<std::size_t> seen;
    for (int iy = 0; iy < n; ++iy)
      for (int ix = 0; ix < n; ++ix) {
        const auto c = g.flat(ix, iy);
        CHECK(c < g.cell_count());
        seen.insert(c);
        const auto back = g.multi(c);
        CHECK(back[0] == ix);
        CHECK(back[1] == iy);
        const auto x = g.coords(c);
        CHECK(std::abs(x[0]) < 1.5);
        CHECK(std::abs(x[1]) < 1.5);
      }
    CHECK(seen.size() == g.cell_count());
  }
}

TEST_CASE("lp_norm of a constant field") {
  const Grid g = build_grid(1, 1.0, 3);
  VectorField f(g, 2);
  for (std::size_t c = 0; c < 3; ++c) f(c, 0) = 1.0;
  CHECK(lp_norm(f, 2.0) == Approx(std::sqrt(1.5)).epsilon(1e-14));
  CHECK(lp_norm(f, 1.0) == Approx(1.5));
  CHECK(lp_norm(f, INFINITY) == Approx(1.0));
  CHECK_THROWS_AS(lp_norm(f, 0.5), std::invalid_argument);
}

TEST_CASE("lp_norm is zero only for zero and homogeneous") {
  std::mt19937_64 rng(1);
  const Grid g = build_grid(2, 1.0, 16);
  VectorField zero(g, 3);
  for (double p : {1.0, 2.0, 4.0, double(INFINITY)}) CHECK(lp_norm(zero, p) == 0.0);
  const VectorField f = testing::random_field(g, 3, rng);
  for (double p : {1.0, 2.0, 4.0, double(INFINITY)}) {
    CHECK(lp_norm(f, p) > 0.0);
    CHECK(lp_norm(cplx(2.0, 0.0) * f, p) == Approx(2.0 * lp_norm(f, p)).epsilon(1e-13));
  }
}

TEST_CASE("squared 2-norm equals the self pairing") {
  std::mt19937_64 rng(2);
  const Grid g = build_grid(2, 3.0, 16);
  const VectorField f = testing::random_field(g, 2, rng);
  const cplx self = dual_pairing(f, f);
  CHECK(self.imag() == Approx(0.0));
  CHECK(std::pow(lp_norm(f, 2.0), 2) == Approx(self.real()).epsilon(1e-13));
}

TEST_CASE("dual_pairing basics") {
  const Grid g = build_grid(1, 0.5 * 0.1 * 11, 10);  // h = 0.1
  REQUIRE(g.spacing() == Approx(0.1));
  VectorField f(g, 2), h(g, 2);
  f(3, 0) = 1.0;
  CHECK(dual_pairing(f, f).real() == Approx(0.1));
  h(5, 0) = 1.0;
  CHECK(std::abs(dual_pairing(f, h)) == 0.0);
  const Grid other = build_grid(1, 1.0, 10);
  CHECK_THROWS_AS(dual_pairing(f, VectorField(other, 2)), std::invalid_argument);
}

TEST_CASE("pairing is sesquilinear") {
  std::mt19937_64 rng(3);
  const Grid g = build_grid(1, 2.0, 32);
  const auto f = testing::random_field(g, 2, rng);
  const auto h = testing::random_field(g, 2, rng);
  const cplx a(0.3, -1.2);
  const cplx lhs = dual_pairing(a * f, h);
  const cplx rhs = a * dual_pairing(f, h);
  CHECK(std::abs(lhs - rhs) < 1e-12);
  const cplx lhs2 = dual_pairing(f, a * h);
  CHECK(std::abs(lhs2 - std::conj(a) * dual_pairing(f, h)) < 1e-12);
}

TEST_CASE("discrete Hoelder inequality on random fields") {
  std::mt19937_64 rng(4);
  const Grid g = build_grid(2, 1.0, 12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = testing::random_field(g, 2, rng);
    const auto h = testing::random_field(g, 2, rng);
    const double pair = std::abs(dual_pairing(f, h));
    CHECK(pair <= lp_norm(f, 1.0) * lp_norm(h, INFINITY) * (1 + 1e-12));
    CHECK(pair <= lp_norm(f, 2.0) * lp_norm(h, 2.0) * (1 + 1e-12));
    CHECK(pair <= lp_norm(f, 4.0) * lp_norm(h, 4.0 / 3.0) * (1 + 1e-12));
  }
}

TEST_CASE("norm of a sampled smooth function converges at second order") {
  auto norm_at = [](int n) {
    const Grid g = build_grid(1, 3.0, n);
    const auto f = testing::sampled(g, 1, [](const auto& x, int) { return 9.0 - x[0] * x[0]; });
    return lp_norm(f, 1.0);
  };
  // int_{-3}^{3} (9 - x^2) dx = 36; the profile vanishes at the box edge.
  const double exact = 36.0;
  const double e1 = std::abs(norm_at(31) - exact);
  const double e2 = std::abs(norm_at(63) - exact);
  const double e3 = std::abs(norm_at(127) - exact);
  CHECK(e1 / e2 == Approx(4.0).epsilon(0.1));
  CHECK(e2 / e3 == Approx(4.0).epsilon(0.1));
}

TEST_CASE("csv and pgm dumps") {
  const Grid g = build_grid(2, 1.0, 4);
  VectorField f(g, 1);
  f(5, 0) = cplx(2.0, -1.0);
  std::ostringstream csv;
  write_csv(f, csv);
  const std::string s = csv.str();
  CHECK(s.rfind("x,y,component,real,imag\n", 0) == 0);
  CHECK(std::count(s.begin(), s.end(), '\n') == 17);
  std::ostringstream pgm;
  write_pgm(f, 0, pgm);
  const std::string p = pgm.str();
  CHECK(p.rfind("P5\n4 4\n255\n", 0) == 0);
  CHECK(p.size() == std::string("P5\n4 4\n255\n").size() + 16);
  CHECK_THROWS_AS(write_pgm(f, 1, pgm), std::invalid_argument);
}
