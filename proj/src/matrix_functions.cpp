#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>

#include "vschro/error.hpp"
#include "vschro/fields.hpp"

namespace vschro {

namespace {

bool all_finite(const DenseMatrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i)
    if (!std::isfinite(m(i).real()) || !std::isfinite(m(i).imag())) return false;
  return true;
}

double norm1(const DenseMatrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

}  // namespace

DenseMatrix matrix_exp(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("matrix_exp: matrix must be square");
  if (!all_finite(a)) throw std::invalid_argument("matrix_exp: non-finite entries");
  const Eigen::Index n = a.rows();
  const double anorm = norm1(a);
  if (anorm > 1e8) throw NumericalError("matrix_exp: norm exceeds 1e8");
  if (anorm == 0.0) return DenseMatrix::Identity(n, n);

  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;
  int s = 0;
  if (anorm > theta13) s = static_cast<int>(std::ceil(std::log2(anorm / theta13)));
  const DenseMatrix x = a / std::ldexp(1.0, s);
  const DenseMatrix id = DenseMatrix::Identity(n, n);
  const DenseMatrix x2 = x * x;
  const DenseMatrix x4 = x2 * x2;
  const DenseMatrix x6 = x4 * x2;
  const DenseMatrix u =
      x * (x6 * (b[13] * x6 + b[11] * x4 + b[9] * x2) + b[7] * x6 + b[5] * x4 + b[3] * x2 + b[1] * id);
  const DenseMatrix v =
      x6 * (b[12] * x6 + b[10] * x4 + b[8] * x2) + b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * id;
  DenseMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < s; ++k) r = r * r;
  if (!all_finite(r)) throw NumericalError("matrix_exp: overflow");
  return r;
}

double norm2(const DenseMatrix& m) {
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  return svd.singularValues()(0);
}

double min_singular(const DenseMatrix& m) {
  Eigen::JacobiSVD<DenseMatrix> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

namespace {

constexpr double kEigenbasisCondLimit = 1e8;

void check_branch_cut(const Eigen::VectorXcd& eig) {
  for (auto lam : eig) {
    const double scale = std::max(1.0, std::abs(lam));
    if (lam.real() <= 0.0 && std::abs(lam.imag()) <= 1e-14 * scale)
      throw NumericalError("matrix_power: spectrum touches the branch cut (-inf, 0]");
  }
}

struct EigenSplit {
  DenseMatrix basis;
  Eigen::VectorXcd values;
  double cond = 0.0;
};

EigenSplit eigen_split(const DenseMatrix& m) {
  Eigen::ComplexEigenSolver<DenseMatrix> es(m);
  if (es.info() != Eigen::Success) throw NumericalError("matrix_power: eigensolver failed");
  EigenSplit out{es.eigenvectors(), es.eigenvalues(), 0.0};
  Eigen::JacobiSVD<DenseMatrix> svd(out.basis);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  out.cond = smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace

DenseMatrix matrix_power_eigen(const DenseMatrix& m, cplx z) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix_power: matrix must be square");
  if (!all_finite(m)) throw std::invalid_argument("matrix_power: non-finite entries");
  const EigenSplit es = eigen_split(m);
  check_branch_cut(es.values);
  if (es.cond > kEigenbasisCondLimit)
    throw NumericalError("matrix_power: eigenbasis ill-conditioned or defective");
  Eigen::VectorXcd powered(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) powered(i) = std::exp(z * std::log(es.values(i)));
  return es.basis * powered.asDiagonal() * es.basis.inverse();
}

DenseMatrix matrix_power(const DenseMatrix& m, cplx z) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix_power: matrix must be square");
  if (!all_finite(m)) throw std::invalid_argument("matrix_power: non-finite entries");
  if (z == cplx{}) return DenseMatrix::Identity(m.rows(), m.cols());
  const EigenSplit es = eigen_split(m);
  check_branch_cut(es.values);
  if (es.cond <= kEigenbasisCondLimit) return matrix_power_eigen(m, z);
  if (z.imag() == 0.0 && z.real() < 0.0 && z.real() > -1.0)
    return fractional_power_quadrature(m, -z.real());
  throw NumericalError("matrix_power: complex powers of defective matrices are not supported");
}

namespace {

using Gauss10 = boost::math::quadrature::gauss<double, 10>;
using Gauss20 = boost::math::quadrature::gauss<double, 20>;

template <class Rule, class F>
DenseMatrix gauss_panel(const F& f, double a, double b, Eigen::Index n) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const auto& x = Rule::abscissa();
  const auto& w = Rule::weights();
  DenseMatrix acc = DenseMatrix::Zero(n, n);
  for (std::size_t k = 0; k < x.size(); ++k) {
    acc += w[k] * (f(mid + half * x[k]) + f(mid - half * x[k]));
  }
  return half * acc;
}

}  // namespace

DenseMatrix fractional_power_quadrature(const DenseMatrix& m, double alpha) {
  if (m.rows() != m.cols()) throw std::invalid_argument("fractional power: matrix must be square");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("fractional power: alpha must lie in (0, 1)");
  if (!all_finite(m)) throw std::invalid_argument("fractional power: non-finite entries");
  {
    Eigen::ComplexEigenSolver<DenseMatrix> es(m, false);
    check_branch_cut(es.eigenvalues());
  }
  const Eigen::Index n = m.rows();
  const DenseMatrix id = DenseMatrix::Identity(n, n);
  auto integrand = [&](double u) -> DenseMatrix {
    const double t = std::exp(u);
    return std::exp((1.0 - alpha) * u) * (t * id + m).partialPivLu().inverse();
  };

  constexpr double lo = -40.0;
  constexpr double hi = 40.0;
  const double tol = 1e-13;
  DenseMatrix total = DenseMatrix::Zero(n, n);
  struct Panel {
    double a, b;
    int depth;
  };
  std::vector<Panel> stack;
  for (double a = hi - 1.0; a >= lo; a -= 1.0) stack.push_back({a, a + 1.0, 0});
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    const DenseMatrix coarse = gauss_panel<Gauss10>(integrand, p.a, p.b, n);
    const DenseMatrix fine = gauss_panel<Gauss20>(integrand, p.a, p.b, n);
    const double err = (fine - coarse).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, fine.cwiseAbs().maxCoeff());
    if (err <= tol * scale) {
      total += fine;
      continue;
    }
    if (p.depth >= 30) throw NumericalError("fractional power: quadrature did not converge");
    const double mid = 0.5 * (p.a + p.b);
    stack.push_back({mid, p.b, p.depth + 1});
    stack.push_back({p.a, mid, p.depth + 1});
  }

  // Near t = 0: (t + M)^{-1} ~ M^{-1}. Beyond t = e^40: expand in M / t.
  const double t0 = std::exp(lo);
  const double t1 = std::exp(hi);
  total += std::pow(t0, 1.0 - alpha) / (1.0 - alpha) * m.partialPivLu().inverse();
  DenseMatrix term = id;
  for (int k = 0; k < 3; ++k) {
    total += std::pow(t1, -alpha - k) / (alpha + k) * term;
    term = -term * m;
  }
  const double pre = std::sin(std::numbers::pi * alpha) / std::numbers::pi;
  DenseMatrix out = pre * total;
  if (!all_finite(out)) throw NumericalError("fractional power: non-finite result");
  return out;
}

}  // namespace vschro
