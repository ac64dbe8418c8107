#pragma once

#include <array>
#include <limits>
#include <vector>

#include "vschro/fields.hpp"
#include "vschro/mesh.hpp"
#include "vschro/operators.hpp"

namespace vschro {

enum class SplitScheme { lie, strang };
enum class DiffusionScheme { crank_nicolson, backward_euler };

struct SplitConfig {
  SplitScheme scheme = SplitScheme::strang;
  DiffusionScheme diffusion_substep = DiffusionScheme::crank_nicolson;
  int n_steps = 100;
  double t_final = 1.0;
  double linear_solver_tol = 1e-10;
  int max_solver_iters = 5000;
  /// Snapshot/norm cadence in steps; the final state is always recorded.
  int record_every = 1;
  bool keep_snapshots = true;

  double tau() const { return t_final / n_steps; }
  /// Throws std::invalid_argument unless t_final > 0, n_steps >= 1 and the
  /// solver tolerance lies in (0, 1e-4].
  void validate() const;
};

/// Exponents of the norm log, in column order.
inline constexpr std::array<double, 4> kNormExponents = {1.0, 2.0, 4.0,
                                                         std::numeric_limits<double>::infinity()};

struct Trajectory {
  std::vector<double> times;
  std::vector<VectorField> snapshots;
  /// norms[i][j] = lp_norm(state at times[i], kNormExponents[j])
  std::vector<std::array<double, 4>> norms;
  /// Largest linear-solver iteration count seen in any diffusion substep.
  int max_solver_iterations = 0;

  const VectorField& final_state() const { return snapshots.back(); }
};

/// Cached per-cell exponentials e^{tau V(x)} for repeated potential steps.
class PotentialPropagator {
 public:
  PotentialPropagator(const MatrixField& v, double tau);
  void apply(const VectorField& in, VectorField& out) const;
  double tau() const { return tau_; }

 private:
  int m_;
  double tau_;
  std::vector<cplx> blocks_;
};

/// One implicit diffusion substep of size tau by preconditioned CG.
class DiffusionPropagator {
 public:
  DiffusionPropagator(const SparseOperator& a, double tau, DiffusionScheme scheme, double tol,
                      int max_iters);
  /// Returns the CG iteration count; throws NumericalError on non-convergence.
  int apply(const VectorField& in, VectorField& out) const;

 private:
  const SparseOperator& a_;
  double tau_;
  DiffusionScheme scheme_;
  double tol_;
  int max_iters_;
};

/// u(x) <- e^{tau V(x)} u(x) at every cell.
VectorField potential_step(const MatrixField& v, const VectorField& f, double tau);

/// Crank-Nicolson: (I - tau/2 A) u = (I + tau/2 A) f. Backward Euler:
/// (I - tau A) u = f. Residual <= tol * |rhs|_2.
VectorField diffusion_step(const SparseOperator& a, const VectorField& f, double tau,
                           const SplitConfig& cfg);

/// Splitting approximation of e^{t (A + V)} f with tau = t / n. Lie applies
/// the potential step then the diffusion step; Strang wraps each diffusion
/// step in two half potential steps.
Trajectory trotter_evolve(const SparseOperator& a, const MatrixField& v, const VectorField& f,
                          const SplitConfig& cfg);

/// w_t = div(Q grad w) on a scalar field, without the -1 shift, using the
/// diffusion substep and step count of cfg.
VectorField scalar_heat_evolve(const MatrixField& q, const VectorField& g, double t,
                               const SplitConfig& cfg);

/// Multiplies by e^{rate t}. rate = beta + 1 undoes a potential shift by
/// -(beta + 1) I; rate = 1 undoes the -I inside A.
VectorField unshift(const VectorField& f, double t, double rate);

}  // namespace vschro
