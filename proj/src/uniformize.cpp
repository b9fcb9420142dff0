#include "subreg/uniformize.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace subreg {

namespace {

void check_base_center(const Vec& xbar, const Vec& cert_xbar,
                       const Vec& cert_ybar, const char* what) {
  if (cert_xbar.size() != xbar.size() || cert_xbar != xbar) {
    throw std::invalid_argument(std::string(what) +
                                ": base certificate is not centered at xbar");
  }
  if (!(cert_ybar.cwiseAbs().maxCoeff() == 0.0)) {
    throw std::invalid_argument(std::string(what) +
                                ": base certificate must be centered at y = 0");
  }
}

// Largest radius alpha0 / 2^k, k <= halvings, accepted by `try_radius`.
double halving_ladder(double cap, double floor, int halvings,
                      const std::function<bool(double)>& try_radius,
                      const char* what) {
  double candidate = cap;
  for (int k = 0; k <= halvings; ++k, candidate /= 2.0) {
    if (candidate < floor) break;
    if (try_radius(candidate)) return candidate;
  }
  throw std::runtime_error(std::string(what) +
                           ": search failed down to the radius floor");
}

double continuity_shift(const ParametricFamily& family, const Vec& t,
                        const Vec& xbar, double radius, int steps) {
  const Grid param = Grid::centered(t, radius, steps);
  const Ball window{family.f.parameter_space, t, radius, false};
  double worst = 0.0;
  const long long n = param.size();
  for (long long i = 0; i < n; ++i) {
    const Vec s = param.point(i);
    if (!window.contains(s)) continue;
    worst = std::max(worst, norm(family.f.range,
                                 parameter_difference(family.f, s, t, xbar)));
  }
  return worst;
}

std::vector<int> greedy_cover(const CompactSample& sample,
                              const std::function<double(int)>& cover_radius) {
  const int n = static_cast<int>(sample.points.size());
  std::vector<bool> covered(n, false);
  std::vector<int> selected;
  for (int i = 0; i < n; ++i) {
    if (covered[i]) continue;
    selected.push_back(i);
    const double r = cover_radius(i);
    const auto& [ti, xi] = sample.points[i];
    for (int j = 0; j < n; ++j) {
      if (covered[j]) continue;
      const auto& [tj, xj] = sample.points[j];
      if (distance(sample.parameter_space, tj, ti) < r &&
          distance(sample.domain_space, xj, xi) < r) {
        covered[j] = true;
      }
    }
  }
  return selected;
}

}  // namespace

SetValuedMap family_map(const ParametricFamily& family, const Vec& t) {
  return sum(freeze(family.f, t), family.F);
}

LocalUniformRecord local_uniform_record(const ParametricFamily& family,
                                        const Vec& t, const Vec& xbar,
                                        const StrongSubregAroundCert& base,
                                        const UniformizeOptions& opt,
                                        double radius_floor) {
  check_base_center(xbar, base.xbar, base.ybar, "local_uniform_record");

  LocalUniformRecord rec;
  rec.t = t;
  rec.xbar = xbar;
  rec.kappa_base = base.kappa;
  rec.a_base = base.a;
  rec.b_base = base.b;
  rec.mu = 1.0 / (2.0 * base.kappa);
  rec.kappa_prime = 3.0 * base.kappa;
  rec.beta = base.b / 4.0;

  // alpha < b/(2 mu) = kappa*b strictly; the cap keeps a 2^-20 margin.
  const double strict_cap = base.kappa * base.b * (1.0 - std::ldexp(1.0, -20));
  const double cap = std::min(base.a / 2.0, strict_cap);
  SweepOptions sweep;
  sweep.threads = opt.threads;

  rec.alpha = halving_ladder(
      cap, radius_floor, opt.ladder_halvings,
      [&](double alpha) {
        // The proof needs the quotient bound for x, u in B[xbar, 2*alpha]
        // and s in B[t, alpha]; sweeping both balls at 2*alpha is sound.
        const double swept = 2.0 * alpha;
        EquiGrids grids{Grid::centered(xbar, swept, opt.equi_space_steps),
                        Grid::centered(t, swept, opt.equi_param_steps)};
        return equi_continuity_modulus(family.f, t, xbar, swept, grids, sweep)
                   .value <= rec.mu;
      },
      "local_uniform_record: equi-continuity");

  rec.r_prime = halving_ladder(
      rec.alpha / 2.0, radius_floor, opt.ladder_halvings,
      [&](double r) {
        return continuity_shift(family, t, xbar, r, opt.continuity_steps) <=
               rec.beta;
      },
      "local_uniform_record: continuity");
  return rec;
}

UniformCert greedy_subcover(const CompactSample& sample,
                            const std::vector<LocalUniformRecord>& records) {
  if (sample.points.empty()) {
    throw std::invalid_argument("greedy_subcover: empty sample");
  }
  if (records.size() != sample.points.size()) {
    throw std::invalid_argument(
        "greedy_subcover: every sample point needs a record");
  }
  UniformCert cert;
  cert.records = records;
  cert.subcover = greedy_cover(
      sample, [&](int i) { return records[static_cast<size_t>(i)].r_prime; });

  bool first = true;
  for (const int i : cert.subcover) {
    const LocalUniformRecord& rec = records[static_cast<size_t>(i)];
    if (first) {
      cert.kappa = rec.kappa_prime;
      cert.a = rec.alpha;
      cert.b = rec.beta;
      first = false;
    } else {
      cert.kappa = std::max(cert.kappa, rec.kappa_prime);
      cert.a = std::min(cert.a, rec.alpha);
      cert.b = std::min(cert.b, rec.beta);
    }
  }
  return cert;
}

UniformCert uniformize_around(const ParametricFamily& family,
                              const CompactSample& sample,
                              const std::vector<StrongSubregAroundCert>& base,
                              const UniformizeOptions& opt) {
  if (base.size() != sample.points.size()) {
    throw std::invalid_argument(
        "uniformize_around: one base certificate per sample point required");
  }
  std::vector<LocalUniformRecord> records;
  records.reserve(sample.points.size());
  for (size_t i = 0; i < sample.points.size(); ++i) {
    records.push_back(local_uniform_record(family, sample.points[i].first,
                                           sample.points[i].second, base[i],
                                           opt, sample.cover_radius_floor));
  }
  return greedy_subcover(sample, records);
}

UniformValidationReport validate_uniform(const UniformCert& cert,
                                         const ParametricFamily& family,
                                         const CompactSample& sample,
                                         const ValidateOptions& opt) {
  UniformValidationReport report;
  report.bound = cert.kappa * opt.safety;
  const double r0 = opt.around_r0 > 0 ? opt.around_r0 : cert.a / 4.0;
  const Vec ybar = Vec::Zero(family.F.range_space().dim);

  SweepOptions sweep;
  sweep.threads = opt.threads;
  sweep.center_tol = opt.center_tol;

  for (size_t i = 0; i < sample.points.size(); ++i) {
    const auto& [t, xbar] = sample.points[i];
    const SetValuedMap G = family_map(family, t);
    AroundGrids grids;
    grids.outer = Grid::centered_with_step(xbar, cert.a, opt.grid_step);
    grids.range_step = opt.range_step > 0 ? opt.range_step : opt.grid_step;
    grids.inner_steps = opt.inner_steps > 0
                            ? opt.inner_steps
                            : steps_for_radius(r0, opt.grid_step);
    const ModulusEstimate est = empirical_strong_around(
        G, xbar, ybar, cert.a, cert.b, r0, grids, sweep);
    report.per_point_ratio.push_back(est.value);
    if (!(est.value <= report.bound)) {
      report.violations.push_back(UniformViolation{
          static_cast<int>(i), est.value, report.bound, est.witness});
    }
  }
  return report;
}

UniformAtCert uniformize_at(const ParametricFamily& family,
                            const CompactSample& sample,
                            const std::vector<StrongSubregAtCert>& base,
                            const UniformizeOptions& opt) {
  if (base.size() != sample.points.size() || sample.points.empty()) {
    throw std::invalid_argument(
        "uniformize_at: one base certificate per sample point required");
  }
  SweepOptions sweep;
  sweep.threads = opt.threads;

  std::vector<AtUniformRecord> records;
  records.reserve(sample.points.size());
  for (size_t i = 0; i < sample.points.size(); ++i) {
    const auto& [t, xbar] = sample.points[i];
    check_base_center(xbar, base[i].xbar, base[i].ybar, "uniformize_at");

    AtUniformRecord rec;
    rec.t = t;
    rec.xbar = xbar;
    rec.kappa_base = base[i].kappa;
    rec.alpha_base = base[i].alpha;
    rec.mu = 1.0 / (2.0 * base[i].kappa);
    rec.kappa_prime = 3.0 * base[i].kappa;

    // Proposition 1 needs the selection bound on B[xbar, c] with c <= alpha;
    // the equi-continuity quotient bounds the calmness constant of
    // g_s = f(s,.) - f(t,.) there.
    rec.c = halving_ladder(
        base[i].alpha, sample.cover_radius_floor, opt.ladder_halvings,
        [&](double c) {
          EquiGrids grids{Grid::centered(xbar, c, opt.equi_space_steps),
                          Grid::centered(t, c, opt.equi_param_steps)};
          return equi_continuity_modulus(family.f, t, xbar, c, grids, sweep)
                     .value <= rec.mu;
        },
        "uniformize_at: equi-continuity");

    // Keep the reference-output shift small enough that solutions of nearby
    // parameters stay well inside B[xbar, c].
    const double shift_bound = rec.c / (4.0 * rec.kappa_prime);
    rec.r_prime = halving_ladder(
        rec.c / 2.0, sample.cover_radius_floor, opt.ladder_halvings,
        [&](double r) {
          return continuity_shift(family, t, xbar, r, opt.continuity_steps) <=
                 shift_bound;
        },
        "uniformize_at: continuity");
    records.push_back(std::move(rec));
  }

  UniformAtCert cert;
  cert.records = records;
  cert.subcover = greedy_cover(
      sample, [&](int i) { return records[static_cast<size_t>(i)].r_prime; });
  bool first = true;
  for (const int i : cert.subcover) {
    const AtUniformRecord& rec = records[static_cast<size_t>(i)];
    if (first) {
      cert.kappa = rec.kappa_prime;
      cert.c = rec.c;
      first = false;
    } else {
      cert.kappa = std::max(cert.kappa, rec.kappa_prime);
      cert.c = std::min(cert.c, rec.c);
    }
  }
  return cert;
}

UniformValidationReport validate_uniform_at(const UniformAtCert& cert,
                                            const ParametricFamily& family,
                                            const CompactSample& sample,
                                            const ValidateOptions& opt) {
  UniformValidationReport report;
  report.bound = cert.kappa * opt.safety;
  const Vec ybar = Vec::Zero(family.F.range_space().dim);

  SweepOptions sweep;
  sweep.threads = opt.threads;
  sweep.center_tol = opt.center_tol;

  for (size_t i = 0; i < sample.points.size(); ++i) {
    const auto& [t, xbar] = sample.points[i];
    const SetValuedMap G = family_map(family, t);
    const Grid grid = Grid::centered_with_step(xbar, cert.c, opt.grid_step);
    const ModulusEstimate est =
        empirical_strong_at(G, xbar, ybar, cert.c, grid, sweep);
    report.per_point_ratio.push_back(est.value);
    if (!(est.value <= report.bound)) {
      report.violations.push_back(UniformViolation{
          static_cast<int>(i), est.value, report.bound, est.witness});
    }
  }
  return report;
}

}  // namespace subreg
