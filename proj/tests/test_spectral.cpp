#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "vschro/error.hpp"
#include "vschro/rules.hpp"
#include "vschro/spectral.hpp"

using namespace vschro;
using doctest::Approx;

namespace {

MatrixField identity_q(const Grid& g) { return make_diffusion_field({"identity_Q", {}, ""}, g); }

LinearMap dense_map(const Eigen::MatrixXcd& m) {
  LinearMap map;
  map.dims = m.rows();
  map.apply = [m](std::span<const cplx> x, std::span<cplx> y) {
    Eigen::Map<Eigen::VectorXcd>(y.data(), y.size()) = m * Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
  };
  map.apply_adjoint = [m](std::span<const cplx> x, std::span<cplx> y) {
    Eigen::Map<Eigen::VectorXcd>(y.data(), y.size()) =
        m.adjoint() * Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
  };
  return map;
}

SparseOperator rotation_l(const Grid& g) {
  const auto v = shifted(make_potential_field({"rotation_V", {{"r", 1.5}}, ""}, g, 2), -1.0);
  return assemble_diffusion(identity_q(g), 2) + assemble_potential(v);
}

}  // namespace

TEST_CASE("resolvent of -I") {
  const Grid g = build_grid(1, 1.0, 10);
  std::mt19937_64 rng(51);
  const auto rhs = testing::random_field(g, 2, rng);
  const auto sol = solve_resolvent(SparseOperator::identity(g, 2, -1.0), {1.0, rhs});
  CHECK(sol.converged);
  CHECK(testing::max_abs_diff(sol.u, cplx(0.5) * rhs) < 1e-14);
}

TEST_CASE("Hille-Yosida bound for a dissipative operator") {
  const Grid g = build_grid(1, 5.0, 100);
  const auto l = rotation_l(g);
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rhs = testing::random_field(g, 2, rng);
    const auto sol = solve_resolvent(l, {2.0, rhs});
    REQUIRE(sol.converged);
    CHECK(sol.relative_residual <= 1e-10);
    CHECK(lp_norm(sol.u, 2.0) <= lp_norm(rhs, 2.0) / 2.0 * (1 + 1e-10));
  }
}

TEST_CASE("resolvent at an eigenvalue reports spectral proximity") {
  const Grid g = build_grid(1, 1.0, 5);
  const auto rhs = VectorField(g, 1, std::vector<cplx>(5, 1.0));
  // -I has the single eigenvalue -1.
  const auto sol = solve_resolvent(SparseOperator::identity(g, 1, -1.0), {-1.0, rhs});
  CHECK_FALSE(sol.converged);
  CHECK_FALSE(sol.diagnostic.empty());
}

TEST_CASE("resolvent identity") {
  const Grid g = build_grid(1, 4.0, 80);
  const auto l = rotation_l(g);
  std::mt19937_64 rng(53);
  const cplx lambda(1.5, 0.7), mu(3.0, -2.0);
  for (int trial = 0; trial < 5; ++trial) {
    const auto f = testing::random_field(g, 2, rng);
    const auto rl = solve_resolvent(l, {lambda, f}).u;
    const auto rm = solve_resolvent(l, {mu, f}).u;
    const auto rlm = solve_resolvent(l, {lambda, rm}).u;
    CHECK(lp_norm(rl - rm - (mu - lambda) * rlm, 2.0) <= 1e-9 * lp_norm(f, 2.0));
  }
}

TEST_CASE("operator norm estimates") {
  CHECK(operator_norm_estimate(dense_map(3.0 * Eigen::MatrixXcd::Identity(12, 12))).value == Approx(3.0));
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(30, 30);
  for (int i = 0; i < 30; ++i) d(i, i) = i + 1.0;
  const auto est = operator_norm_estimate(dense_map(d));
  CHECK(est.converged);
  CHECK(est.value == Approx(30.0).epsilon(0.01));
  std::mt19937_64 rng(54);
  const Eigen::MatrixXcd r = testing::random_matrix(25, 1.0, rng);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r);
  CHECK(operator_norm_estimate(dense_map(r), 1e-10).value == Approx(svd.singularValues()(0)).epsilon(0.01));
}

TEST_CASE("resolvent norm of a non-normal operator against dense SVD") {
  const Grid g = build_grid(1, 40.0, 200);
  const auto b = assemble_diffusion(identity_q(g), 1) + SparseOperator::identity(g, 1) +
                 assemble_potential(make_potential_field({"imaginary_linear_V", {}, ""}, g, 1));
  const auto map = resolvent_map(b, 2.0);
  const Eigen::MatrixXcd dense = (2.0 * Eigen::MatrixXcd::Identity(200, 200) - b.to_dense()).inverse();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(dense);
  CHECK(operator_norm_estimate(map, 1e-9).value == Approx(svd.singularValues()(0)).epsilon(0.02));
  // Dissipative: |(lambda - B)^{-1}| <= 1 / Re lambda.
  CHECK(svd.singularValues()(0) <= 0.5 + 1e-12);
}

TEST_CASE("Dirichlet eigenvalues of the shifted Laplacian") {
  const Grid g = build_grid(1, 3.0, 300);
  const auto l = assemble_diffusion(identity_q(g), 1) +
                 assemble_potential(make_potential_field({"diag_V", {{"c", 0.0}}, ""}, g, 1));
  const int k = 6;
  const auto res = eigenpairs(l, k, 0.0);
  REQUIRE(res.eigenvalues.size() == k);
  const double r = g.extent();
  for (int j = 1; j <= k; ++j) {
    const double h = g.spacing();
    const double discrete = -1.0 - 4.0 / (h * h) * std::pow(std::sin(M_PI * j / (2.0 * (g.n_per_axis() + 1))), 2);
    const double continuum = -1.0 - M_PI * M_PI * j * j / (4 * r * r);
    CHECK(res.eigenvalues[j - 1].real() == Approx(discrete).epsilon(1e-10));
    // Relative O(h^2) gap: (pi j h / 2R)^2 / 12.
    CHECK(std::abs(res.eigenvalues[j - 1].real() - continuum) <=
          std::abs(continuum) * std::pow(M_PI * j * h / (2 * r), 2) / 6.0);
    CHECK(std::abs(res.eigenvalues[j - 1].imag()) < 1e-10);
  }
  for (std::size_t i = 0; i < res.eigenvalues.size(); ++i) {
    const auto& v = res.eigenfields[i];
    CHECK(res.residuals[i] <= 1e-8 * lp_norm(v, 2.0));
    CHECK(lp_norm(apply_operator(l, v) - res.eigenvalues[i] * v, 2.0) <= 1e-8 * lp_norm(v, 2.0));
  }
  for (std::size_t i = 1; i < res.eigenvalues.size(); ++i)
    CHECK(res.eigenvalues[i].real() <= res.eigenvalues[i - 1].real());
}

TEST_CASE("eigenpairs match a dense eigensolve of a non-normal operator") {
  const Grid g = build_grid(1, 6.0, 100);
  const auto l = rotation_l(g);
  const auto res = eigenpairs(l, 8, 0.0);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(l.to_dense());
  std::vector<cplx> all(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(all.begin(), all.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
  for (const cplx ev : res.eigenvalues) {
    double best = INFINITY;
    for (int i = 0; i < 8; ++i) best = std::min(best, std::abs(ev - all[i]));
    CHECK(best < 1e-8 * std::max(1.0, std::abs(ev)));
  }
}

TEST_CASE("singular shift is perturbed") {
  const Grid g = build_grid(1, 1.0, 12);
  std::vector<Triplet> diag;
  for (int i = 0; i < 12; ++i) diag.push_back({i, i, -1.0 - i});
  const auto l = SparseOperator::from_triplets(g, 1, diag, true);
  const auto res = eigenpairs(l, 3, -1.0);
  CHECK(res.shift_used != cplx(-1.0));
  REQUIRE(res.eigenvalues.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(res.eigenvalues[i].real() == Approx(-1.0 - i).epsilon(1e-10));
}

TEST_CASE("degenerate potential carries the scalar Dirichlet spectrum") {
  const Grid g = build_grid(1, 4.0, 200);
  const auto v = make_potential_field({"degenerate_V", {}, ""}, g, 2);
  const auto l = assemble_diffusion(identity_q(g), 2) + assemble_potential(v);
  const auto scalar = eigenpairs(assemble_diffusion(identity_q(g), 1), 3, 0.0);
  // Every scalar eigenvector lifted to (g, g) is an eigenvector of L.
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& w = scalar.eigenfields[i];
    VectorField lift(g, 2);
    for (std::size_t c = 0; c < g.cell_count(); ++c) lift(c, 0) = lift(c, 1) = w(c, 0);
    CHECK(lp_norm(apply_operator(l, lift) - scalar.eigenvalues[i] * lift, 2.0) <= 1e-7 * lp_norm(lift, 2.0));
  }
  const auto full = eigenpairs(l, 3, 0.0);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(std::abs(full.eigenvalues[i] - scalar.eigenvalues[i]) < 1e-8);
}

TEST_CASE("kernel column of the decoupled heat flow") {
  const Grid g = build_grid(1, 10.0, 2000);
  const auto a = assemble_diffusion(identity_q(g), 2);
  const auto v = make_potential_field({"diag_V", {{"c", 0.0}}, ""}, g, 2);
  SplitConfig cfg;
  cfg.n_steps = 100;
  cfg.t_final = 0.01;
  cfg.keep_snapshots = false;
  const double t = 0.01;
  const std::size_t y = 1000;
  const auto k = kernel_column({a, v}, t, y, 0, cfg);
  CHECK(k.sup_abs == Approx(std::exp(-t) / std::sqrt(4 * M_PI * t)).epsilon(0.05));
  double mass = 0.0, worst = 0.0;
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    mass += std::hypot(std::abs(k.column(c, 0)), std::abs(k.column(c, 1))) * g.spacing();
    const double x = g.axis_coord(int(c)) - g.axis_coord(int(y));
    const double heat = std::exp(-t) * std::exp(-x * x / (4 * t)) / std::sqrt(4 * M_PI * t);
    worst = std::max(worst, std::abs(k.column(c, 0) - heat));
    CHECK(std::abs(k.column(c, 1)) < 1e-14);
  }
  CHECK(worst <= 0.05 * k.sup_abs);
  CHECK(mass <= std::exp(-t) + 1e-6);
}

TEST_CASE("kernel columns of a positive system are nonnegative") {
  const Grid g = build_grid(1, 5.0, 100);
  const auto a = assemble_diffusion(identity_q(g), 2);
  const auto v = make_potential_field({"constant_V", {{"v11", -2}, {"v12", 1}, {"v21", 0.5}, {"v22", -2}}, ""}, g, 2);
  SplitConfig cfg;
  cfg.scheme = SplitScheme::lie;
  cfg.diffusion_substep = DiffusionScheme::backward_euler;
  cfg.n_steps = 50;
  cfg.t_final = 0.2;
  cfg.linear_solver_tol = 1e-13;
  for (int j = 0; j < 2; ++j) {
    const auto k = kernel_column({a, v}, 0.2, 37, j, cfg);
    for (auto x : k.column.values()) CHECK(x.real() >= -1e-10);
  }
}

TEST_CASE("adjoint kernel symmetry") {
  const Grid g = build_grid(1, 3.0, 40);
  const auto a = assemble_diffusion(identity_q(g), 2);
  const auto v = make_potential_field({"constant_V", {{"v11", -2}, {"v12", 1.5}, {"v21", -0.3}, {"v22", -1}}, ""}, g, 2);
  const auto vstar = adjoint(v);
  SplitConfig cfg;
  cfg.scheme = SplitScheme::strang;
  cfg.n_steps = 20;
  cfg.t_final = 0.1;
  cfg.linear_solver_tol = 1e-13;
  for (auto [yc, j, xc, i] : {std::tuple{5ul, 0, 20ul, 1}, std::tuple{11ul, 1, 11ul, 0}, std::tuple{30ul, 1, 2ul, 1}}) {
    const auto k = kernel_column({a, v}, 0.1, yc, j, cfg);
    const auto ks = kernel_column({a, vstar}, 0.1, xc, i, cfg);
    CHECK(std::abs(k.column(xc, i) - std::conj(ks.column(yc, j))) <= 1e-8 * k.sup_abs);
  }
}
