#pragma once

#include "subreg/maps.hpp"

#include <optional>
#include <string>
#include <vector>

namespace subreg {

/// Labeled argument tuple attaining a supremum; replayable through the
/// matching *_contribution function.
struct Witness {
  std::vector<std::pair<std::string, Vec>> entries;

  const Vec& at(const std::string& label) const;
  bool empty() const { return entries.empty(); }
};

/// Result of a brute-force modulus sweep. The value is a sampling-based
/// lower bound of the supremum and is +inf when the defining inequality is
/// violated outright (zero denominator against a nonzero numerator).
struct ModulusEstimate {
  double value = 0.0;
  Witness witness;
  long long sample_count = 0;
  std::vector<double> radii_used;
  double grid_step = 0.0;
};

struct SweepOptions {
  /// Range-membership tolerance for inverse_dist; < 0 selects the default
  /// (half the inverse search grid step).
  double membership_tol = -1.0;
  /// Tolerance for the "center lies on the graph" precondition.
  double center_tol = 1e-9;
  int threads = 1;
};

// Single-point contributions (shared by the sweeps, witness replay, and
// certificate validation). nullopt marks a vacuous point: outside the
// window or an empty image. A zero denominator yields 0 against a zero
// numerator and +inf against a nonzero one.
std::optional<double> subreg_at_contribution(const SetValuedMap& F,
                                             const Vec& ybar, const Vec& x,
                                             const Grid& inverse_grid,
                                             double membership_tol);
std::optional<double> strong_at_contribution(const SetValuedMap& F,
                                             const Vec& xbar, const Vec& ybar,
                                             const Vec& x);
std::optional<double> strong_around_contribution(const SetValuedMap& F,
                                                 const Vec& ybar, double b,
                                                 const Vec& x, const Vec& y,
                                                 const Vec& u);
std::optional<double> calmness_contribution(const SingleValuedMap& g,
                                            const Vec& xbar, const Vec& gxbar,
                                            const Vec& x);
std::optional<double> lipschitz_contribution(const SingleValuedMap& g,
                                             const Vec& x, const Vec& u);
std::optional<double> equi_continuity_contribution(
    const ParametricSingleValuedMap& f, const Vec& t, const Vec& s,
    const Vec& x, const Vec& u);

/// Definition 1 (i): sup over grid x in B[xbar, radius] of
/// dist(x, F^-1(ybar)) / dist(ybar, F(x)), with the inverse distance taken
/// on inverse_grid. Points with zero denominator contribute 0; empty images
/// are vacuously feasible and are skipped.
ModulusEstimate empirical_subreg_at(const SetValuedMap& F, const Vec& xbar,
                                    const Vec& ybar, double radius,
                                    const Grid& domain_grid,
                                    const Grid& inverse_grid,
                                    const SweepOptions& opt = {});

/// Definition 1 (ii): numerator ||x - xbar||.
ModulusEstimate empirical_strong_at(const SetValuedMap& F, const Vec& xbar,
                                    const Vec& ybar, double radius,
                                    const Grid& domain_grid,
                                    const SweepOptions& opt = {});

struct AroundGrids {
  Grid outer;            // domain grid covering B[xbar, a]
  double range_step;     // discretization of interval images in the y-window
  int inner_steps = 41;  // points per axis for each B[x, r0] sweep
};

/// Definition 1 (iii) with the existential neighborhood operationalized by
/// the verification radius r0: sup over sampled graph points (x, y) in the
/// window of sup over u in B[x, r0], u != x, of
/// ||u - x|| / dist(y, F(u) ∩ B[ybar, b]).
ModulusEstimate empirical_strong_around(const SetValuedMap& F, const Vec& xbar,
                                        const Vec& ybar, double a, double b,
                                        double r0, const AroundGrids& grids,
                                        const SweepOptions& opt = {});

/// Calmness of a single-valued map at xbar:
/// sup ||g(x) - g(xbar)|| / ||x - xbar||.
ModulusEstimate empirical_calmness(const SingleValuedMap& g, const Vec& xbar,
                                   double radius, const Grid& grid,
                                   const SweepOptions& opt = {});

/// Lipschitz bound over a region: sup over distinct grid pairs of the
/// difference quotient.
ModulusEstimate empirical_lipschitz(const SingleValuedMap& g,
                                    const Grid& region_grid,
                                    const SweepOptions& opt = {});

struct EquiGrids {
  Grid space_grid;  // over B[xbar, alpha]
  Grid param_grid;  // over B[t, alpha]
};

/// Parametric equi-continuity quotient
/// ||f(s,u) - f(t,u) - (f(s,x) - f(t,x))|| / ||x - u||
/// over x, u in B[xbar, alpha] and s in B[t, alpha].
ModulusEstimate equi_continuity_modulus(const ParametricSingleValuedMap& f,
                                        const Vec& t, const Vec& xbar,
                                        double alpha, const EquiGrids& grids,
                                        const SweepOptions& opt = {});

enum class DivergenceMode { StrongAt, SubregAt };

/// Modulus estimates on a strictly decreasing radius ladder; growth across
/// radii is the divergence test for non-(strong-)subregularity.
std::vector<ModulusEstimate> divergence_profile(
    const SetValuedMap& F, const Vec& xbar, const Vec& ybar,
    const std::vector<double>& radii, DivergenceMode mode, int steps_per_axis,
    const SweepOptions& opt = {});

/// Re-evaluates an estimate's witness with the stated contribution function.
double replay_subreg_at(const SetValuedMap& F, const Vec& ybar,
                        const ModulusEstimate& est, const Grid& inverse_grid,
                        double membership_tol = -1.0);
double replay_strong_at(const SetValuedMap& F, const Vec& xbar,
                        const Vec& ybar, const ModulusEstimate& est);
double replay_strong_around(const SetValuedMap& F, const Vec& ybar, double b,
                            const ModulusEstimate& est);
double replay_calmness(const SingleValuedMap& g, const Vec& xbar,
                       const ModulusEstimate& est);
double replay_lipschitz(const SingleValuedMap& g, const ModulusEstimate& est);
double replay_equi_continuity(const ParametricSingleValuedMap& f, const Vec& t,
                              const ModulusEstimate& est);

}  // namespace subreg
