#pragma once

#include <map>
#include <string>
#include <vector>

#include "vschro/fields.hpp"

namespace vschro {

/// A coefficient rule selected by name, as written in experiment configs.
struct RuleSpec {
  std::string name;
  std::map<std::string, double> params;
  /// CSV path for custom_table.
  std::string table;

  double param(const std::string& key, double fallback) const;
};

/// identity_Q, scalar_Q(q), anisotropic_Q(theta, ratio), constant_Q(q11, q12, q22),
/// variable_Q(amp), custom_table.
MatrixField make_diffusion_field(const RuleSpec& spec, const Grid& grid);

/// rotation_V(r), upper_triangular_V(cutoff), degenerate_V, diag_V(c),
/// skew_linear_V, constant_V(v11, v12, v21, v22), imaginary_linear_V,
/// abs_linear_V, custom_table.
MatrixField make_potential_field(const RuleSpec& spec, const Grid& grid, int m);

const std::vector<std::string>& diffusion_rule_names();
const std::vector<std::string>& potential_rule_names();

/// Parameter keys accepted by a rule; throws ConfigError for unknown rules.
const std::vector<std::string>& rule_parameters(const std::string& rule);

/// Per-cell entries from CSV with header cell,row,col,real,imag. Unlisted
/// entries are zero.
MatrixField load_field_table(const std::string& path, const Grid& grid, FieldKind kind, int size);

}  // namespace vschro
