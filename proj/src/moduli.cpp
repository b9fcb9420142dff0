#include "subreg/moduli.hpp"

#include "subreg/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subreg {

const Vec& Witness::at(const std::string& label) const {
  for (const auto& [name, point] : entries) {
    if (name == label) return point;
  }
  throw std::invalid_argument("Witness: no entry labeled '" + label + "'");
}

namespace {

// Two sample points closer than a few ulps of their magnitude are the same
// point at double precision: the 0/0 center cell, excluded from every
// supremum. A genuine zero denominator (a flat branch) shows up with a
// numerator at grid-step scale, many orders of magnitude above this.
bool ulp_collision(double num, const Vec& a, const Vec& b) {
  const double scale = std::max({1.0, a.cwiseAbs().maxCoeff(),
                                 b.cwiseAbs().maxCoeff()});
  return num <= 16.0 * std::numeric_limits<double>::epsilon() * scale;
}

std::optional<double> ratio_with_conventions(double num, double den,
                                             const Vec& a, const Vec& b) {
  if (std::isinf(den)) return std::nullopt;  // vacuous constraint
  if (den == 0.0) {
    if (num == 0.0) return 0.0;
    if (ulp_collision(num, a, b)) return std::nullopt;
    return kInf;
  }
  return num / den;
}

void check_center_on_graph(const SetValuedMap& F, const Vec& xbar,
                           const Vec& ybar, double tol) {
  const double d = dist_to_image(F, xbar, ybar);
  if (!(d <= tol)) {
    throw std::invalid_argument(
        "moduli: center (xbar, ybar) is not on the graph within tolerance");
  }
}

}  // namespace

std::optional<double> subreg_at_contribution(const SetValuedMap& F,
                                             const Vec& ybar, const Vec& x,
                                             const Grid& inverse_grid,
                                             double membership_tol) {
  const double den = dist_to_image(F, x, ybar);
  if (std::isinf(den)) return std::nullopt;
  if (den == 0.0) return 0.0;  // x already solves the inclusion
  const double num = inverse_dist(F, ybar, x, inverse_grid, membership_tol);
  return num / den;
}

std::optional<double> strong_at_contribution(const SetValuedMap& F,
                                             const Vec& xbar, const Vec& ybar,
                                             const Vec& x) {
  const double den = dist_to_image(F, x, ybar);
  const double num = distance(F.domain_space(), x, xbar);
  return ratio_with_conventions(num, den, x, xbar);
}

std::optional<double> strong_around_contribution(const SetValuedMap& F,
                                                 const Vec& ybar, double b,
                                                 const Vec& x, const Vec& y,
                                                 const Vec& u) {
  const double den = dist_to_restricted_image(F, u, y, ybar, b);
  const double num = distance(F.domain_space(), u, x);
  return ratio_with_conventions(num, den, u, x);
}

std::optional<double> calmness_contribution(const SingleValuedMap& g,
                                            const Vec& xbar, const Vec& gxbar,
                                            const Vec& x) {
  const double den = distance(g.domain, x, xbar);
  if (den == 0.0) return std::nullopt;  // the 0/0 center point is excluded
  return distance(g.range, evaluate(g, x), gxbar) / den;
}

std::optional<double> lipschitz_contribution(const SingleValuedMap& g,
                                             const Vec& x, const Vec& u) {
  const double den = distance(g.domain, x, u);
  if (den == 0.0) return std::nullopt;
  return distance(g.range, evaluate(g, x), evaluate(g, u)) / den;
}

std::optional<double> equi_continuity_contribution(
    const ParametricSingleValuedMap& f, const Vec& t, const Vec& s,
    const Vec& x, const Vec& u) {
  const double den = distance(f.domain, x, u);
  if (den == 0.0) return std::nullopt;
  const Vec diff =
      parameter_difference(f, s, t, u) - parameter_difference(f, s, t, x);
  return norm(f.range, diff) / den;
}

ModulusEstimate empirical_subreg_at(const SetValuedMap& F, const Vec& xbar,
                                    const Vec& ybar, double radius,
                                    const Grid& domain_grid,
                                    const Grid& inverse_grid,
                                    const SweepOptions& opt) {
  if (!(radius > 0)) throw std::invalid_argument("empirical_subreg_at: radius <= 0");
  check_center_on_graph(F, xbar, ybar, opt.center_tol);
  const double tol = opt.membership_tol >= 0 ? opt.membership_tol
                                             : 0.5 * inverse_grid.max_step();
  const Ball window{F.domain_space(), xbar, radius, false};

  const SweepBest best = sweep_max(
      domain_grid.size(), opt.threads, [&](long long i) -> std::optional<double> {
        const Vec x = domain_grid.point(i);
        if (!window.contains(x) || !in_domain(F, x)) return std::nullopt;
        return subreg_at_contribution(F, ybar, x, inverse_grid, tol);
      });

  ModulusEstimate est;
  est.value = best.index < 0 ? 0.0 : best.value;
  est.sample_count = best.contributing;
  est.radii_used = {radius};
  est.grid_step = domain_grid.max_step();
  if (best.index >= 0) {
    est.witness.entries.emplace_back("x", domain_grid.point(best.index));
  }
  return est;
}

ModulusEstimate empirical_strong_at(const SetValuedMap& F, const Vec& xbar,
                                    const Vec& ybar, double radius,
                                    const Grid& domain_grid,
                                    const SweepOptions& opt) {
  if (!(radius > 0)) throw std::invalid_argument("empirical_strong_at: radius <= 0");
  check_center_on_graph(F, xbar, ybar, opt.center_tol);
  const Ball window{F.domain_space(), xbar, radius, false};

  const SweepBest best = sweep_max(
      domain_grid.size(), opt.threads, [&](long long i) -> std::optional<double> {
        const Vec x = domain_grid.point(i);
        if (!window.contains(x) || !in_domain(F, x)) return std::nullopt;
        return strong_at_contribution(F, xbar, ybar, x);
      });

  ModulusEstimate est;
  est.value = best.index < 0 ? 0.0 : best.value;
  est.sample_count = best.contributing;
  est.radii_used = {radius};
  est.grid_step = domain_grid.max_step();
  if (best.index >= 0) {
    est.witness.entries.emplace_back("x", domain_grid.point(best.index));
  }
  return est;
}

ModulusEstimate empirical_strong_around(const SetValuedMap& F, const Vec& xbar,
                                        const Vec& ybar, double a, double b,
                                        double r0, const AroundGrids& grids,
                                        const SweepOptions& opt) {
  if (!(a > 0 && b > 0 && r0 > 0)) {
    throw std::invalid_argument("empirical_strong_around: radii must be > 0");
  }
  check_center_on_graph(F, xbar, ybar, opt.center_tol);

  const std::vector<GraphPoint> graph =
      sample_graph(F, grids.outer, xbar, a, ybar, b, grids.range_step);
  if (graph.empty()) {
    throw std::runtime_error("empirical_strong_around: no graph samples in window");
  }

  std::vector<Grid> inner;
  inner.reserve(graph.size());
  for (const GraphPoint& gp : graph) {
    inner.push_back(Grid::centered(gp.x, r0, grids.inner_steps));
  }
  const long long inner_size = inner[0].size();
  const long long total = static_cast<long long>(graph.size()) * inner_size;
  const SweepBest best = sweep_max(
      total, opt.threads, [&](long long k) -> std::optional<double> {
        const long long g = k / inner_size;
        const long long j = k % inner_size;
        const GraphPoint& gp = graph[static_cast<size_t>(g)];
        const Vec u = inner[static_cast<size_t>(g)].point(j);
        if (u == gp.x) return std::nullopt;  // the 0/0 point
        if (distance(F.domain_space(), u, gp.x) > r0) return std::nullopt;
        if (!in_domain(F, u)) return std::nullopt;
        return strong_around_contribution(F, ybar, b, gp.x, gp.y, u);
      });

  ModulusEstimate est;
  est.value = best.index < 0 ? 0.0 : best.value;
  est.sample_count = best.contributing;
  est.radii_used = {a, b, r0};
  est.grid_step = std::max({grids.outer.max_step(), inner[0].max_step(),
                            grids.range_step});
  if (best.index >= 0) {
    const long long g = best.index / inner_size;
    const long long j = best.index % inner_size;
    est.witness.entries.emplace_back("x", graph[static_cast<size_t>(g)].x);
    est.witness.entries.emplace_back("y", graph[static_cast<size_t>(g)].y);
    est.witness.entries.emplace_back("u", inner[static_cast<size_t>(g)].point(j));
  }
  return est;
}

ModulusEstimate empirical_calmness(const SingleValuedMap& g, const Vec& xbar,
                                   double radius, const Grid& grid,
                                   const SweepOptions& opt) {
  if (!(radius > 0)) throw std::invalid_argument("empirical_calmness: radius <= 0");
  const Ball window{g.domain, xbar, radius, false};
  const Vec gxbar = evaluate(g, xbar);

  const SweepBest best = sweep_max(
      grid.size(), opt.threads, [&](long long i) -> std::optional<double> {
        const Vec x = grid.point(i);
        if (!window.contains(x) || !in_domain(g, x)) return std::nullopt;
        return calmness_contribution(g, xbar, gxbar, x);
      });

  ModulusEstimate est;
  est.value = best.index < 0 ? 0.0 : best.value;
  est.sample_count = best.contributing;
  est.radii_used = {radius};
  est.grid_step = grid.max_step();
  if (best.index >= 0) {
    est.witness.entries.emplace_back("x", grid.point(best.index));
  }
  return est;
}

ModulusEstimate empirical_lipschitz(const SingleValuedMap& g,
                                    const Grid& region_grid,
                                    const SweepOptions& opt) {
  const long long n = region_grid.size();
  if (n < 2) throw std::invalid_argument("empirical_lipschitz: need >= 2 points");

  const SweepBest best = sweep_max(
      n * n, opt.threads, [&](long long k) -> std::optional<double> {
        const long long i = k / n;
        const long long j = k % n;
        if (i >= j) return std::nullopt;
        const Vec x = region_grid.point(i);
        const Vec u = region_grid.point(j);
        if (!in_domain(g, x) || !in_domain(g, u)) return std::nullopt;
        return lipschitz_contribution(g, x, u);
      });

  ModulusEstimate est;
  est.value = best.index < 0 ? 0.0 : best.value;
  est.sample_count = best.contributing;
  est.grid_step = region_grid.max_step();
  if (best.index >= 0) {
    est.witness.entries.emplace_back("x", region_grid.point(best.index / n));
    est.witness.entries.emplace_back("u", region_grid.point(best.index % n));
  }
  return est;
}

ModulusEstimate equi_continuity_modulus(const ParametricSingleValuedMap& f,
                                        const Vec& t, const Vec& xbar,
                                        double alpha, const EquiGrids& grids,
                                        const SweepOptions& opt) {
  if (!(alpha > 0)) throw std::invalid_argument("equi_continuity_modulus: alpha <= 0");
  const Ball x_window{f.domain, xbar, alpha, false};
  const Ball s_window{f.parameter_space, t, alpha, false};
  const long long nx = grids.space_grid.size();
  const long long ns = grids.param_grid.size();

  const SweepBest best = sweep_max(
      ns * nx * nx, opt.threads, [&](long long k) -> std::optional<double> {
        const long long u_idx = k % nx;
        const long long x_idx = (k / nx) % nx;
        if (x_idx >= u_idx) return std::nullopt;  // quotient is symmetric
        const long long s_idx = k / (nx * nx);
        const Vec s = grids.param_grid.point(s_idx);
        if (!s_window.contains(s)) return std::nullopt;
        const Vec x = grids.space_grid.point(x_idx);
        const Vec u = grids.space_grid.point(u_idx);
        if (!x_window.contains(x) || !x_window.contains(u)) return std::nullopt;
        if (!in_domain(f.base, x) || !in_domain(f.base, u)) return std::nullopt;
        return equi_continuity_contribution(f, t, s, x, u);
      });

  ModulusEstimate est;
  est.value = best.index < 0 ? 0.0 : best.value;
  est.sample_count = best.contributing;
  est.radii_used = {alpha};
  est.grid_step =
      std::max(grids.space_grid.max_step(), grids.param_grid.max_step());
  if (best.index >= 0) {
    const long long u_idx = best.index % nx;
    const long long x_idx = (best.index / nx) % nx;
    const long long s_idx = best.index / (nx * nx);
    est.witness.entries.emplace_back("s", grids.param_grid.point(s_idx));
    est.witness.entries.emplace_back("x", grids.space_grid.point(x_idx));
    est.witness.entries.emplace_back("u", grids.space_grid.point(u_idx));
  }
  return est;
}

std::vector<ModulusEstimate> divergence_profile(
    const SetValuedMap& F, const Vec& xbar, const Vec& ybar,
    const std::vector<double>& radii, DivergenceMode mode, int steps_per_axis,
    const SweepOptions& opt) {
  if (radii.empty()) throw std::invalid_argument("divergence_profile: no radii");
  for (size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0) || (i > 0 && !(radii[i] < radii[i - 1]))) {
      throw std::invalid_argument(
          "divergence_profile: radii must be positive and strictly decreasing");
    }
  }
  std::vector<ModulusEstimate> profile;
  profile.reserve(radii.size());
  for (const double r : radii) {
    const Grid grid = Grid::centered(xbar, r, steps_per_axis);
    if (mode == DivergenceMode::StrongAt) {
      profile.push_back(empirical_strong_at(F, xbar, ybar, r, grid, opt));
    } else {
      const Grid inverse = Grid::centered(xbar, 2 * r, 2 * steps_per_axis - 1);
      profile.push_back(
          empirical_subreg_at(F, xbar, ybar, r, grid, inverse, opt));
    }
  }
  return profile;
}

double replay_subreg_at(const SetValuedMap& F, const Vec& ybar,
                        const ModulusEstimate& est, const Grid& inverse_grid,
                        double membership_tol) {
  if (est.witness.empty()) return 0.0;
  const double tol = membership_tol >= 0 ? membership_tol
                                         : 0.5 * inverse_grid.max_step();
  return subreg_at_contribution(F, ybar, est.witness.at("x"), inverse_grid, tol)
      .value_or(0.0);
}

double replay_strong_at(const SetValuedMap& F, const Vec& xbar,
                        const Vec& ybar, const ModulusEstimate& est) {
  if (est.witness.empty()) return 0.0;
  return strong_at_contribution(F, xbar, ybar, est.witness.at("x")).value_or(0.0);
}

double replay_strong_around(const SetValuedMap& F, const Vec& ybar, double b,
                            const ModulusEstimate& est) {
  if (est.witness.empty()) return 0.0;
  return strong_around_contribution(F, ybar, b, est.witness.at("x"),
                                    est.witness.at("y"), est.witness.at("u"))
      .value_or(0.0);
}

double replay_calmness(const SingleValuedMap& g, const Vec& xbar,
                       const ModulusEstimate& est) {
  if (est.witness.empty()) return 0.0;
  return calmness_contribution(g, xbar, evaluate(g, xbar), est.witness.at("x"))
      .value_or(0.0);
}

double replay_lipschitz(const SingleValuedMap& g, const ModulusEstimate& est) {
  if (est.witness.empty()) return 0.0;
  return lipschitz_contribution(g, est.witness.at("x"), est.witness.at("u"))
      .value_or(0.0);
}

double replay_equi_continuity(const ParametricSingleValuedMap& f, const Vec& t,
                              const ModulusEstimate& est) {
  if (est.witness.empty()) return 0.0;
  return equi_continuity_contribution(f, t, est.witness.at("s"),
                                      est.witness.at("x"), est.witness.at("u"))
      .value_or(0.0);
}

}  // namespace subreg
