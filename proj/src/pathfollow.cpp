#include "subreg/pathfollow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace subreg {

int PathRule::dim() const {
  return kind == Kind::Polynomial ? static_cast<int>(coeffs.size())
                                  : static_cast<int>(amplitude.size());
}

Vec evaluate(const PathRule& p, double t) {
  const int d = p.dim();
  Vec y(d);
  if (p.kind == PathRule::Kind::Polynomial) {
    for (int j = 0; j < d; ++j) {
      double acc = 0.0;
      for (size_t k = p.coeffs[j].size(); k-- > 0;) {
        acc = acc * t + p.coeffs[j][k];
      }
      y[j] = acc;
    }
  } else {
    for (int j = 0; j < d; ++j) {
      y[j] = p.amplitude[j] * std::sin(p.frequency[j] * t + p.phase[j]) +
             p.offset[j];
    }
  }
  return y;
}

double path_lipschitz_bound(const PathRule& p, double horizon, int samples) {
  if (samples < 2) throw std::invalid_argument("path_lipschitz_bound: samples < 2");
  double bound = 0.0;
  Vec prev = evaluate(p, 0.0);
  double t_prev = 0.0;
  for (int i = 1; i < samples; ++i) {
    const double t = horizon * i / (samples - 1);
    const Vec cur = evaluate(p, t);
    const double dt = t - t_prev;
    if (dt > 0) {
      bound = std::max(bound, (cur - prev).cwiseAbs().maxCoeff() / dt);
    }
    prev = cur;
    t_prev = t;
  }
  return bound;
}

double residual(const ParametricGE& ge, double t, const Vec& x) {
  if (!(t >= 0.0 && t <= ge.horizon)) {
    throw std::invalid_argument("residual: t outside [0, T]");
  }
  Vec tv(ge.f.parameter_space.dim);
  tv.setZero();
  tv[0] = t;
  const Vec rhs = evaluate(ge.p, t) - evaluate(ge.f, tv, x);
  return dist_to_image(ge.F, x, rhs);
}

namespace {

// Deterministic candidate coordinates for one axis: level-grid values plus
// breakpoints, clipped to [lo, hi], sorted and deduplicated.
std::vector<double> axis_candidates(double lo, double hi, int steps,
                                    const std::vector<double>& extra) {
  std::vector<double> coords;
  coords.reserve(static_cast<size_t>(steps) + extra.size());
  for (int i = 0; i < steps; ++i) {
    coords.push_back(steps == 1 ? lo : lo + i * (hi - lo) / (steps - 1));
  }
  for (double v : extra) {
    if (v >= lo && v <= hi) coords.push_back(v);
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  return coords;
}

}  // namespace

Vec solve_step(const ParametricGE& ge, double t, const Vec& x_warm,
               const SolveOptions& opt) {
  if (!(opt.trust_radius > 0)) {
    throw std::invalid_argument("solve_step: trust_radius must be > 0");
  }
  const double warm_residual = residual(ge, t, x_warm);
  if (std::isinf(warm_residual)) {
    throw std::invalid_argument("solve_step: warm start has empty image");
  }

  const Space domain = ge.F.domain_space();
  const int d = domain.dim;
  const Ball trust{domain, x_warm, opt.trust_radius, false};
  const std::vector<std::vector<double>> bps = breakpoints(ge.F);

  Vec best = x_warm;
  double best_res = warm_residual;
  Vec center = x_warm;
  double radius = opt.trust_radius;

  for (int depth = 0; depth < opt.max_depth && best_res > opt.tol; ++depth) {
    std::vector<std::vector<double>> axes(d);
    long long total = 1;
    for (int i = 0; i < d; ++i) {
      axes[i] = axis_candidates(center[i] - radius, center[i] + radius,
                                opt.level_steps, bps[i]);
      total *= static_cast<long long>(axes[i].size());
    }
    for (long long k = 0; k < total; ++k) {
      Vec x(d);
      long long rem = k;
      for (int i = d - 1; i >= 0; --i) {
        const long long n = static_cast<long long>(axes[i].size());
        x[i] = axes[i][static_cast<size_t>(rem % n)];
        rem /= n;
      }
      if (!trust.contains(x) || !in_domain(ge.F, x)) continue;
      const double res = residual(ge, t, x);
      if (res < best_res) {
        best_res = res;
        best = x;
      }
    }
    center = best;
    radius /= 10.0;
  }

  if (best_res > opt.tol) {
    const bool on_boundary =
        distance(domain, best, x_warm) >= opt.trust_radius * (1.0 - 1e-9);
    throw StallError(on_boundary
                         ? "solve_step: trust region exhausted (best residual " +
                               std::to_string(best_res) + ")"
                         : "solve_step: tolerance unreachable at max depth "
                           "(best residual " +
                               std::to_string(best_res) + ")",
                     best, best_res);
  }

  if (opt.warm_start_kappa) {
    const double kappa = *opt.warm_start_kappa;
    const double lhs = distance(domain, best, x_warm);
    const double rhs = kappa * warm_residual + kappa * opt.tol;
    if (!(lhs <= rhs)) {
      throw std::runtime_error(
          "solve_step: warm-start bound violated: step " + std::to_string(lhs) +
          " > kappa*(residual + tol) = " + std::to_string(rhs));
    }
  }
  return best;
}

Trajectory follow(const ParametricGE& ge, const Vec& x0,
                  const SolveOptions& opt) {
  if (ge.t_steps < 1) throw std::invalid_argument("follow: t_steps must be >= 1");
  if (!(ge.horizon >= 0)) throw std::invalid_argument("follow: negative horizon");

  const double res0 = residual(ge, 0.0, x0);
  if (!(res0 <= opt.tol)) {
    throw std::invalid_argument("follow: initial point infeasible (residual " +
                                std::to_string(res0) + ")");
  }

  Trajectory traj;
  traj.nodes.push_back(TrajectoryNode{0.0, x0, res0, 0.0});
  if (ge.horizon == 0.0) return traj;  // degenerate single-node path

  const Grid t_grid = Grid::over_box({{0.0, ge.horizon}}, {ge.t_steps + 1});
  for (int i = 1; i <= ge.t_steps; ++i) {
    const double t = t_grid.coordinate(0, i);
    const Vec& warm = traj.nodes.back().x;
    try {
      Vec x = solve_step(ge, t, warm, opt);
      const double res = residual(ge, t, x);
      const double step = distance(ge.F.domain_space(), x, warm);
      traj.nodes.push_back(TrajectoryNode{t, std::move(x), res, step});
    } catch (const StallError&) {
      traj.status = Trajectory::Status::Stalled;
      traj.stall_index = i;
      break;
    }
  }
  return traj;
}

TrajectoryCertificate certify_trajectory(const ParametricGE& ge,
                                         const Trajectory& trajectory,
                                         const TrajectoryCertOptions& opt) {
  if (trajectory.status != Trajectory::Status::Complete) {
    throw std::invalid_argument("certify_trajectory: trajectory is not complete");
  }
  if (trajectory.nodes.empty()) {
    throw std::invalid_argument("certify_trajectory: empty trajectory");
  }

  // Theorem-5 reduction: the packed parameter is (t, p(t)) with the product
  // sup-metric, and the family map subtracts the offset.
  ParametricFamily family{pack_offset(ge.f), ge.F};
  const int m = ge.f.range.dim;

  CompactSample sample;
  sample.parameter_space = family.f.parameter_space;
  sample.domain_space = ge.F.domain_space();
  sample.cover_radius_floor = opt.cover_radius_floor;
  for (const TrajectoryNode& node : trajectory.nodes) {
    Vec tau(1 + m);
    tau[0] = node.t;
    tau.tail(m) = evaluate(ge.p, node.t);
    sample.points.emplace_back(std::move(tau), node.x);
  }

  const Vec ybar = Vec::Zero(m);
  SweepOptions sweep;
  sweep.threads = opt.uniformize.threads;
  sweep.center_tol = opt.center_tol;

  std::vector<StrongSubregAroundCert> base;
  base.reserve(sample.points.size());
  const double range_step =
      opt.base_range_step > 0 ? opt.base_range_step : opt.base_grid_step;
  for (size_t i = 0; i < sample.points.size(); ++i) {
    const auto& [tau, x] = sample.points[i];
    const SetValuedMap G = family_map(family, tau);
    AroundGrids grids{
        Grid::centered_with_step(x, opt.window_a, opt.base_grid_step),
        range_step, steps_for_radius(opt.r0, opt.base_grid_step)};
    const ModulusEstimate est = empirical_strong_around(
        G, x, ybar, opt.window_a, opt.window_b, opt.r0, grids, sweep);
    if (std::isinf(est.value)) {
      throw std::runtime_error(
          "certify_trajectory: around-modulus estimate at node " +
          std::to_string(i) + " is infinite");
    }
    base.push_back(around_cert_from_estimate(x, ybar, opt.window_a,
                                             opt.window_b, opt.r0, est,
                                             opt.pad, opt.kappa_floor));
  }

  TrajectoryCertificate out;
  out.cert = uniformize_around(family, sample, base, opt.uniformize);
  ValidateOptions vopt = opt.validate;
  vopt.center_tol = std::max(vopt.center_tol, opt.center_tol);
  out.validation = validate_uniform(out.cert, family, sample, vopt);
  out.sample = std::move(sample);
  return out;
}

WarmStartCheck check_warm_start_bound(const ParametricGE& ge,
                                      const Trajectory& trajectory,
                                      double kappa, double tol) {
  WarmStartCheck check;
  double worst_margin = kInf;
  for (size_t i = 1; i < trajectory.nodes.size(); ++i) {
    const TrajectoryNode& prev = trajectory.nodes[i - 1];
    const TrajectoryNode& cur = trajectory.nodes[i];
    const double lhs = distance(ge.F.domain_space(), cur.x, prev.x);
    const double rhs = kappa * residual(ge, cur.t, prev.x) + kappa * tol;
    if (rhs - lhs < worst_margin) {
      worst_margin = rhs - lhs;
      check.worst_index = static_cast<int>(i);
      check.worst_lhs = lhs;
      check.worst_rhs = rhs;
    }
    if (!(lhs <= rhs)) check.ok = false;
  }
  return check;
}

}  // namespace subreg
