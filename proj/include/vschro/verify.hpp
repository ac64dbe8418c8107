#pragma once

#include <map>
#include <string>
#include <vector>

#include "vschro/evolve.hpp"
#include "vschro/problem.hpp"
#include "vschro/spectral.hpp"

namespace vschro {

struct PropertyCheckResult {
  std::string name;
  bool passed = false;
  /// Ordered so serialized reports are stable.
  std::map<std::string, double> measured;
  double tolerance = 0.0;
  std::string notes;
};

/// A worked example with its parameters and grid plan.
struct ExampleSpec {
  std::string name;  // nongeneration, rotation, nonanalytic, degenerate
  double r = 1.5;
  double lambda = 1.0;
  std::vector<double> sigmas = {1.0, 2.0, 5.0};
  double alpha = 0.45;
  std::vector<double> extents;
  std::vector<int> sizes;

  /// Throws ConfigError on r outside [1, 2) or, for rotation, alpha outside ((r-1)/r, 1/2).
  void validate() const;
};

/// Problem for a named example on one grid of its plan.
ProblemSpec example_problem(const ExampleSpec& ex, double extent, int n);

// Reference computations used by the checks.
namespace oracle {

/// e^{tL} f through a dense exponential.
VectorField dense_expm_action(const SparseOperator& l, double t, const VectorField& f);
/// Smallest real part among the entries of e^{tL}.
double dense_expm_min_entry(const SparseOperator& l, double t);
/// (4 pi t)^{-d/2} exp(-|x|^2 / 4t)
double heat_kernel(double t, double dist2, int dim);
/// All eigenvalues of a small operator.
std::vector<cplx> dense_eigenvalues(const SparseOperator& l);
double dense_norm2(const Eigen::MatrixXcd& m);

/// Closed-form solution of lambda u - u'' = 1/x on [1, inf), zero on (-inf, 1),
/// continuous at 1. Each integral is computed by adaptive quadrature.
double nongeneration_u2(double x, double lambda);
/// The constant c with u2(1) = 0.
double nongeneration_c(double lambda);

}  // namespace oracle

PropertyCheckResult run_contraction_check(const Trajectory& traj, double slack = 1e-8);

struct ConsistencyOptions {
  double lambda = 2.0;
  double tau = 0.01;
  double horizon = 8.0;
  double tol = 0.01;
};
/// Laplace transform of t -> <S(t)f, g> against <(lambda - L)^{-1} f, g> for
/// the (2, 2) and (4, 4/3) normalizations of f and g.
PropertyCheckResult run_consistency_check(const Problem& p, const VectorField& f,
                                          const VectorField& g, const ConsistencyOptions& opt = {});

struct PositivityOptions {
  int samples = 50;
  double t = 0.5;
  int n_steps = 50;
  double tol = 1e-10;
  std::uint64_t seed = 1;
  /// Predict positivity regardless of the sign pattern (negative control).
  bool assume_positive = false;
};
/// Passes iff observed positivity matches the prediction offdiag_min >= 0.
/// Inputs: random nonnegative fields, plus a bump in component l at the cell
/// of the most negative v_kl, evolved to 4h^2.
PropertyCheckResult run_positivity_check(const Problem& p, const PositivityOptions& opt = {});

struct DominationOptions {
  std::vector<double> times = {0.1, 0.5, 1.0};
  double tau = 0.005;
  double tol = 1e-8;
};
/// Cellwise |S(t)f|^2 <= T(t)|f|^2 + tol |T(t)|f|^2|_inf, both by backward Euler
/// with the same step count.
PropertyCheckResult run_domination_check(const Problem& p, const VectorField& f,
                                         const DominationOptions& opt = {});

/// Usable t range (10 h^2, (R/4)^2 / eta2). Throws ConfigError with a sizing
/// hint when it is empty or does not contain [t_lo, t_hi].
std::pair<double, double> ultracontractivity_window(const Problem& p, double t_lo, double t_hi);

struct KernelSweepOptions {
  double t_lo = 0.002;
  double t_hi = 0.02;
  int points = 6;
  int steps_per_t = 40;
};
/// Kernel columns from the central cell, component 0, at geometric times.
std::vector<KernelEstimate> kernel_sweep(const Problem& p, const KernelSweepOptions& opt = {});
PropertyCheckResult run_ultracontractivity_fit(const std::vector<KernelEstimate>& sweep, int dim,
                                               double tol = 0.1);

/// Errors of lie and strang against the dense exponential for each n of the
/// schedule; passes iff every log2(e_n / e_2n) lies in [0.7, 1.3] (lie) and
/// [1.6, 2.4] (strang). Rejects problems with more than 5000 unknowns.
PropertyCheckResult run_trotter_order_check(const Problem& p, const VectorField& f, double t,
                                            const std::vector<int>& schedule);

struct NongenerationOptions {
  double lambda = 1.0;
  std::vector<double> extents = {50.0, 100.0, 200.0};
  double h = 0.1;
  double probe_x = 1000.0;
};
PropertyCheckResult run_nongeneration_demo(const NongenerationOptions& opt = {});

struct ShiftInvarianceOptions {
  double mu = 1.0;
  std::vector<double> sigmas = {1.0, 2.0, 5.0};
  double extent = 40.0;
  int n = 1600;
  double tol = 0.02;
  /// Use the self-adjoint control Delta - |x| instead of Delta - ix.
  bool control = false;
};
/// |(mu - i sigma - B_h)^{-1}|_2 relative to sigma = 0.
PropertyCheckResult run_shift_invariance_check(const ShiftInvarianceOptions& opt = {});

struct DegenerateOptions {
  double t = 0.2;
  int n_steps = 400;
  double match_tol = 1e-6;
  double mismatch_min = 0.1;
};
/// S(t)(f, f) against (T(t)f, T(t)f) and S(t)(f, 0) against (T(t)f, 0) for the
/// degenerate potential on the grid of the scalar field f.
PropertyCheckResult run_degenerate_kernel_check(const VectorField& f, const DegenerateOptions& opt = {});

struct HypothesisCheckOptions {
  double alpha = 0.45;
  double growth_tol = 0.05;
  std::vector<double> s_values = {-3.0, -1.0, 1.0, 3.0};
};
/// Validator on p and on p with N doubled: growth_sup finite and stable,
/// |(-V(x))^{is}|_2 <= e^{pi |s| / 2} at every cell.
PropertyCheckResult run_hypothesis_check(const ProblemSpec& spec, const HypothesisCheckOptions& opt = {});

struct CommutatorOptions {
  double extent = 10.0;
  int n = 200;
  double lo = 0.35;
  double hi = 0.65;
};
/// Q = I, M = diag(sin x, cos x), Gaussian f: defect ratio under N -> 2N + 1.
PropertyCheckResult run_commutator_check(const CommutatorOptions& opt = {});

struct CompactnessOptions {
  int k = 10;
  double spacing_tol = 0.2;
  double collapse_factor = 3.0;
};
/// Mean gap of the k eigenvalues nearest 0 on R and 2R at fixed h. Predicts a
/// compact resolvent when the box-edge minimum of kappa grows under R -> 2R,
/// and passes iff the spacing behaves accordingly.
PropertyCheckResult run_compactness_check(const ProblemSpec& spec, const CompactnessOptions& opt = {});

}  // namespace vschro
