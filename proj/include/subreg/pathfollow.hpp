#pragma once

#include "subreg/uniformize.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace subreg {

/// Continuous right-hand side t -> p(t), from a small closed-form catalog.
struct PathRule {
  enum class Kind { Polynomial, Trig };
  Kind kind = Kind::Polynomial;
  // Polynomial: p_j(t) = sum_k coeffs[j][k] * t^k.
  std::vector<std::vector<double>> coeffs;
  // Trig: p_j(t) = amplitude[j] * sin(frequency[j] * t + phase[j]) + offset[j].
  std::vector<double> amplitude;
  std::vector<double> frequency;
  std::vector<double> phase;
  std::vector<double> offset;

  int dim() const;
};

Vec evaluate(const PathRule& p, double t);

/// Sampled slope bound of p on [0, horizon]; feeds the default trust radius.
double path_lipschitz_bound(const PathRule& p, double horizon,
                            int samples = 2001);

/// The parametric generalized equation p(t) ∈ f(t, x(t)) + F(x(t)) on [0, T].
struct ParametricGE {
  ParametricSingleValuedMap f;
  SetValuedMap F;
  PathRule p;
  double horizon = 1.0;
  int t_steps = 100;  // intervals; a complete trajectory has t_steps+1 nodes
};

/// dist(p(t), f(t,x) + F(x)); identical bit-for-bit to dist_to_image on the
/// sum map.
double residual(const ParametricGE& ge, double t, const Vec& x);

struct TrajectoryNode {
  double t = 0.0;
  Vec x;
  double residual = 0.0;
  double step_norm = 0.0;
};

struct Trajectory {
  enum class Status { Complete, Stalled };
  std::vector<TrajectoryNode> nodes;
  Status status = Status::Complete;
  int stall_index = -1;
};

/// solve_step failure: tolerance unreachable at max depth, or the incumbent
/// pinned to the trust-region boundary.
class StallError : public std::runtime_error {
 public:
  StallError(const std::string& msg, Vec best, double best_residual)
      : std::runtime_error(msg), best_point(std::move(best)),
        residual(best_residual) {}
  Vec best_point;
  double residual;
};

struct SolveOptions {
  double trust_radius = 0.1;
  double tol = 1e-8;
  int level_steps = 21;  // grid points per axis per refinement level
  int max_depth = 48;    // x10 refinements before declaring a stall
  /// When set, asserts the strong-subregularity warm-start bound
  /// ||x - x_warm|| <= kappa * residual(warm) + kappa * tol.
  std::optional<double> warm_start_kappa;
};

/// Derivative-free multi-resolution search over B[x_warm, trust_radius];
/// breakpoint coordinates of F (box faces) join every candidate level so
/// face solutions are hit exactly.
Vec solve_step(const ParametricGE& ge, double t, const Vec& x_warm,
               const SolveOptions& opt);

/// Warm-started solve over the t-grid; stalls abort with status rather than
/// extrapolating.
Trajectory follow(const ParametricGE& ge, const Vec& x0,
                  const SolveOptions& opt);

struct TrajectoryCertOptions {
  double window_a = 0.2;
  double window_b = 0.2;
  double r0 = 0.05;
  double base_grid_step = 2e-3;
  double base_range_step = -1.0;  // < 0: base_grid_step
  double pad = 1.1;               // estimate -> certificate headroom
  double kappa_floor = 1.0;       // covers vacuously-regular face windows
  double center_tol = 1e-6;       // nodes carry solver residual <= tol
  double cover_radius_floor = 1e-9;
  ValidateOptions validate{};
  UniformizeOptions uniformize{};
};

struct TrajectoryCertificate {
  UniformCert cert;
  UniformValidationReport validation;
  CompactSample sample;
};

/// Theorem-5 reduction: packs the parameter as (t, p(t)), builds the compact
/// sample from the trajectory nodes, estimates per-node base certificates,
/// and delegates to the uniformization pipeline.
TrajectoryCertificate certify_trajectory(const ParametricGE& ge,
                                         const Trajectory& trajectory,
                                         const TrajectoryCertOptions& opt = {});

struct WarmStartCheck {
  bool ok = true;
  int worst_index = -1;
  double worst_lhs = 0.0;
  double worst_rhs = 0.0;
};

/// Re-checks ||x_{i+1} - x_i|| <= kappa * residual(ge, t_{i+1}, x_i)
/// + kappa * tol at every accepted step.
WarmStartCheck check_warm_start_bound(const ParametricGE& ge,
                                      const Trajectory& trajectory,
                                      double kappa, double tol);

}  // namespace subreg
