#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

#include "vschro/error.hpp"
#include "vschro/verify.hpp"

namespace vschro::oracle {

VectorField dense_expm_action(const SparseOperator& l, double t, const VectorField& f) {
  const Eigen::MatrixXcd e = (t * l.to_dense()).exp();
  Eigen::Map<const Eigen::VectorXcd> fv(f.values().data(), static_cast<Eigen::Index>(f.size()));
  const Eigen::VectorXcd out = e * fv;
  return VectorField(f.grid(), f.components(), std::vector<cplx>(out.data(), out.data() + out.size()));
}

double dense_expm_min_entry(const SparseOperator& l, double t) {
  const Eigen::MatrixXcd e = (t * l.to_dense()).exp();
  return e.real().minCoeff();
}

double heat_kernel(double t, double dist2, int dim) {
  return std::pow(4.0 * M_PI * t, -0.5 * dim) * std::exp(-dist2 / (4.0 * t));
}

std::vector<cplx> dense_eigenvalues(const SparseOperator& l) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(l.to_dense(), false);
  if (es.info() != Eigen::Success) throw NumericalError("dense eigensolve failed");
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double dense_norm2(const Eigen::MatrixXcd& m) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

namespace {

constexpr double kQuadTol = 1e-12;

void require_accuracy(double value, double err, const char* what) {
  if (!(err <= 1e-9 * std::abs(value) + 1e-300))
    throw NumericalError(std::string("quadrature tolerance not met for ") + what);
}

// int_x^inf e^{s(x-t)} / t dt = int_0^inf e^{-s w} / (x + w) dw
double upper_integral(double x, double s) {
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0;
  const double v = integrator.integrate([&](double w) { return std::exp(-s * w) / (x + w); }, kQuadTol, &err);
  require_accuracy(v, err, "the upper integral");
  return v;
}

// int_1^x e^{-s(x-t)} / t dt = int_0^{x-1} e^{-s w} / (x - w) dw
double lower_integral(double x, double s) {
  if (x <= 1.0) return 0.0;
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double w) { return std::exp(-s * w) / (x - w); }, 0.0, x - 1.0, 30, kQuadTol, &err);
  require_accuracy(v, err, "the lower integral");
  return v;
}

}  // namespace

double nongeneration_c(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("nongeneration: lambda must be positive");
  const double s = std::sqrt(lambda);
  return -std::exp(s) * upper_integral(1.0, s) / (2.0 * s);
}

double nongeneration_u2(double x, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("nongeneration: lambda must be positive");
  if (x < 1.0) return 0.0;
  const double s = std::sqrt(lambda);
  const double c = nongeneration_c(lambda);
  return (upper_integral(x, s) + lower_integral(x, s)) / (2.0 * s) + c * std::exp(-s * x);
}

}  // namespace vschro::oracle
