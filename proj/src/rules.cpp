#include "vschro/rules.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vschro/error.hpp"

namespace vschro {

double RuleSpec::param(const std::string& key, double fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

namespace {

double radius(const std::array<double, 2>& x) { return std::hypot(x[0], x[1]); }

DenseMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
  DenseMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

DenseMatrix scaled_identity(int n, cplx s) { return s * DenseMatrix::Identity(n, n); }

void require_m(const RuleSpec& spec, int m, int want) {
  if (m != want)
    throw ConfigError("potential rule " + spec.name + " needs " + std::to_string(want) +
                      " components, got " + std::to_string(m));
}

}  // namespace

const std::vector<std::string>& diffusion_rule_names() {
  static const std::vector<std::string> names = {"identity_Q", "scalar_Q",   "anisotropic_Q",
                                                 "constant_Q", "variable_Q", "custom_table"};
  return names;
}

const std::vector<std::string>& potential_rule_names() {
  static const std::vector<std::string> names = {
      "rotation_V",    "upper_triangular_V", "degenerate_V",       "diag_V",       "skew_linear_V",
      "constant_V",    "imaginary_linear_V", "abs_linear_V",       "custom_table"};
  return names;
}

const std::vector<std::string>& rule_parameters(const std::string& rule) {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"identity_Q", {}},
      {"scalar_Q", {"q"}},
      {"anisotropic_Q", {"theta", "ratio"}},
      {"constant_Q", {"q11", "q12", "q22"}},
      {"variable_Q", {"amp"}},
      {"custom_table", {}},
      {"rotation_V", {"r"}},
      {"upper_triangular_V", {"cutoff"}},
      {"degenerate_V", {}},
      {"diag_V", {"c"}},
      {"skew_linear_V", {}},
      {"constant_V", {"v11", "v12", "v21", "v22"}},
      {"imaginary_linear_V", {}},
      {"abs_linear_V", {}},
  };
  auto it = table.find(rule);
  if (it == table.end()) throw ConfigError("unknown rule: " + rule);
  return it->second;
}

MatrixField make_diffusion_field(const RuleSpec& spec, const Grid& grid) {
  const int d = grid.dim();
  const auto& n = spec.name;
  MatrixRule rule;
  if (n == "identity_Q") {
    rule = [d](const std::array<double, 2>&) { return scaled_identity(d, 1.0); };
  } else if (n == "scalar_Q") {
    const double q = spec.param("q", 1.0);
    rule = [d, q](const std::array<double, 2>&) { return scaled_identity(d, q); };
  } else if (n == "anisotropic_Q") {
    const double theta = spec.param("theta", 0.0);
    const double ratio = spec.param("ratio", 1.0);
    if (d == 1) {
      rule = [](const std::array<double, 2>&) { return scaled_identity(1, 1.0); };
    } else {
      const double c = std::cos(theta), s = std::sin(theta);
      const DenseMatrix q = mat2(c * c + ratio * s * s, (1.0 - ratio) * c * s,
                                 (1.0 - ratio) * c * s, s * s + ratio * c * c);
      rule = [q](const std::array<double, 2>&) { return q; };
    }
  } else if (n == "constant_Q") {
    const double q11 = spec.param("q11", 1.0);
    const double q12 = spec.param("q12", 0.0);
    const double q22 = spec.param("q22", 1.0);
    if (d == 1) {
      rule = [q11](const std::array<double, 2>&) { return scaled_identity(1, q11); };
    } else {
      rule = [=](const std::array<double, 2>&) { return mat2(q11, q12, q12, q22); };
    }
  } else if (n == "variable_Q") {
    const double amp = spec.param("amp", 0.5);
    rule = [d, amp](const std::array<double, 2>& x) {
      return scaled_identity(d, 1.0 + amp * std::sin(x[0]) * std::cos(x[1]));
    };
  } else if (n == "custom_table") {
    return load_field_table(spec.table, grid, FieldKind::diffusion, d);
  } else {
    throw ConfigError("unknown diffusion rule: " + n);
  }
  return sample_field(rule, grid, FieldKind::diffusion, d);
}

MatrixField make_potential_field(const RuleSpec& spec, const Grid& grid, int m) {
  const auto& n = spec.name;
  MatrixRule rule;
  if (n == "rotation_V") {
    require_m(spec, m, 2);
    const double r = spec.param("r", 1.5);
    if (!(r >= 1.0 && r < 2.0)) throw ConfigError("rotation_V needs r in [1, 2)");
    rule = [r](const std::array<double, 2>& x) {
      const double k = 1.0 + std::pow(radius(x), r);
      return mat2(0.0, k, -k, 0.0);
    };
  } else if (n == "upper_triangular_V") {
    require_m(spec, m, 2);
    const double cutoff = spec.param("cutoff", 0.0);
    rule = [cutoff](const std::array<double, 2>& x) {
      const double e = cutoff > 0.0 ? cutoff * std::tanh(x[0] / cutoff) : x[0];
      return mat2(0.0, e, 0.0, 0.0);
    };
  } else if (n == "degenerate_V") {
    require_m(spec, m, 2);
    rule = [](const std::array<double, 2>& x) {
      const double a = radius(x);
      return mat2(-a, a, a, -a);
    };
  } else if (n == "diag_V") {
    const double c = spec.param("c", -1.0);
    rule = [m, c](const std::array<double, 2>&) { return scaled_identity(m, c); };
  } else if (n == "skew_linear_V") {
    require_m(spec, m, 2);
    rule = [](const std::array<double, 2>& x) { return mat2(0.0, x[0], -x[0], 0.0); };
  } else if (n == "constant_V") {
    require_m(spec, m, 2);
    const DenseMatrix v = mat2(spec.param("v11", -1.0), spec.param("v12", 0.0),
                               spec.param("v21", 0.0), spec.param("v22", -1.0));
    rule = [v](const std::array<double, 2>&) { return v; };
  } else if (n == "imaginary_linear_V") {
    rule = [m](const std::array<double, 2>& x) { return scaled_identity(m, cplx(0.0, -x[0])); };
  } else if (n == "abs_linear_V") {
    rule = [m](const std::array<double, 2>& x) { return scaled_identity(m, -radius(x)); };
  } else if (n == "custom_table") {
    return load_field_table(spec.table, grid, FieldKind::potential, m);
  } else {
    throw ConfigError("unknown potential rule: " + n);
  }
  return sample_field(rule, grid, FieldKind::potential, m);
}

MatrixField load_field_table(const std::string& path, const Grid& grid, FieldKind kind,
                             int size) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open field table " + path);
  std::vector<DenseMatrix> values(grid.cell_count(), DenseMatrix::Zero(size, size));
  std::string line;
  std::getline(in, line);  // header
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    long long cell = 0;
    int i = 0, j = 0;
    double re = 0.0, im = 0.0;
    if (!(row >> cell >> i >> j >> re)) throw ConfigError(path + ":" + std::to_string(lineno) + ": malformed row");
    row >> im;
    if (cell < 0 || static_cast<std::size_t>(cell) >= grid.cell_count() || i < 0 || j < 0 ||
        i >= size || j >= size)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": index out of range");
    values[cell](i, j) = cplx(re, im);
  }
  double defect = 0.0;
  if (kind == FieldKind::diffusion) {
    for (auto& v : values) {
      defect = std::max(defect, (v - v.transpose()).cwiseAbs().maxCoeff());
      v = 0.5 * (v + v.transpose()).eval();
    }
    if (defect > 1e-8) throw ConfigError(path + ": diffusion table is not symmetric");
  }
  return MatrixField(grid, kind, size, std::move(values), defect);
}

}  // namespace vschro
