#include "subreg/certificates.hpp"

#include "subreg/parallel.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace subreg {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void check_shared_center(const Vec& a, const Vec& b, const char* what) {
  if (a.size() != b.size() || a != b) {
    throw std::invalid_argument(std::string(what) +
                                ": certificates must share the center xbar");
  }
}

}  // namespace

double propagated_constant(double kappa, double mu, double eta) {
  if (!(kappa > 0)) throw std::invalid_argument("propagation: kappa must be > 0");
  if (!(mu >= 0)) throw std::invalid_argument("propagation: mu must be >= 0");
  if (!(eta > 0)) throw std::invalid_argument("propagation: slack eta must be > 0");
  if (!(kappa * mu < 1.0)) {
    throw std::domain_error("propagation: kappa*mu >= 1, hypothesis fails");
  }
  return kappa / (1.0 - kappa * mu) * (1.0 + eta);
}

StrongSubregAtCert propagate_calm_perturbation(const StrongSubregAtCert& cert,
                                               const CalmnessCert& calm,
                                               double eta) {
  check_shared_center(cert.xbar, calm.xbar, "propagate_calm_perturbation");
  StrongSubregAtCert out;
  out.kappa = propagated_constant(cert.kappa, calm.mu, eta);
  out.xbar = cert.xbar;
  out.ybar = cert.ybar + calm.value_at_center;
  out.alpha = std::min(cert.alpha, calm.radius);
  out.eta = eta;
  out.provenance = cert.provenance;
  out.provenance.push_back("propagate_calm_perturbation: kappa=" +
                           fmt(cert.kappa) + " mu=" + fmt(calm.mu) +
                           " eta=" + fmt(eta) + " -> kappa'=" + fmt(out.kappa));
  return out;
}

StrongSubregAtCert propagate_setvalued_perturbation(
    const StrongSubregAtCert& cert, const IsolatedSelectionCert& sel,
    double eta) {
  check_shared_center(cert.xbar, sel.xbar, "propagate_setvalued_perturbation");
  if (!(sel.beta > 0 && sel.beta <= cert.alpha)) {
    throw std::domain_error(
        "propagate_setvalued_perturbation: beta must lie in (0, alpha]");
  }
  StrongSubregAtCert out;
  out.kappa = propagated_constant(cert.kappa, sel.mu, eta);
  out.xbar = cert.xbar;
  out.ybar = cert.ybar + sel.zbar;
  out.alpha = sel.beta;
  out.eta = eta;
  out.provenance = cert.provenance;
  out.provenance.push_back("propagate_setvalued_perturbation: kappa=" +
                           fmt(cert.kappa) + " mu=" + fmt(sel.mu) +
                           " beta=" + fmt(sel.beta) + " eta=" + fmt(eta) +
                           " -> kappa'=" + fmt(out.kappa));
  return out;
}

StrongSubregAroundCert propagate_around_perturbation(
    const StrongSubregAroundCert& cert, const CalmnessCert& lip, double eta) {
  check_shared_center(cert.xbar, lip.xbar, "propagate_around_perturbation");
  const double kappa_out = propagated_constant(cert.kappa, lip.mu, eta);

  double alpha = std::min(cert.a / 2.0, lip.radius);
  while (2.0 * alpha > cert.a) alpha = std::nextafter(alpha, 0.0);

  const double mu_alpha = lip.mu * alpha;
  double beta = (cert.b - mu_alpha) / 2.0;
  while (std::isfinite(beta) && beta > 0 && 2.0 * beta + mu_alpha > cert.b) {
    beta = std::nextafter(beta, 0.0);
  }
  if (!(beta > 0)) {
    throw std::domain_error(
        "propagate_around_perturbation: infeasible window arithmetic, "
        "(b - mu*alpha)/2 <= 0");
  }
  if (!(lip.value_bound <= beta)) {
    throw std::domain_error(
        "propagate_around_perturbation: ||g(xbar)|| bound exceeds beta");
  }

  StrongSubregAroundCert out;
  out.xbar = cert.xbar;
  out.ybar = cert.ybar;
  out.kappa = kappa_out;
  out.a = alpha;
  out.b = beta;
  out.r0 = std::min(cert.r0, alpha);
  out.eta = eta;
  out.provenance = cert.provenance;
  out.provenance.push_back("propagate_around_perturbation: kappa=" +
                           fmt(cert.kappa) + " mu=" + fmt(lip.mu) +
                           " eta=" + fmt(eta) + " -> kappa'=" + fmt(out.kappa) +
                           " alpha=" + fmt(alpha) + " beta=" + fmt(beta));
  return out;
}

namespace {

ValidationReport report_from_estimate(const ModulusEstimate& est, double bound,
                                      double replayed) {
  ValidationReport rep;
  rep.holds = est.value <= bound;
  rep.worst_ratio = est.value;
  rep.bound = bound;
  rep.replayed = replayed;
  rep.witness = est.witness;
  rep.sample_count = est.sample_count;
  rep.grid_step = est.grid_step;
  return rep;
}

SweepOptions sweep_options(const ValidateOptions& opt) {
  SweepOptions s;
  s.threads = opt.threads;
  s.center_tol = opt.center_tol;
  return s;
}

}  // namespace

ValidationReport validate(const StrongSubregAtCert& cert, const SetValuedMap& F,
                          const ValidateOptions& opt) {
  const Grid grid = Grid::centered_with_step(cert.xbar, cert.alpha, opt.grid_step);
  const ModulusEstimate est = empirical_strong_at(F, cert.xbar, cert.ybar,
                                                  cert.alpha, grid,
                                                  sweep_options(opt));
  return report_from_estimate(est, cert.kappa * opt.safety,
                              replay_strong_at(F, cert.xbar, cert.ybar, est));
}

ValidationReport validate(const StrongSubregAroundCert& cert,
                          const SetValuedMap& F, const ValidateOptions& opt) {
  AroundGrids grids;
  grids.outer = Grid::centered_with_step(cert.xbar, cert.a, opt.grid_step);
  grids.range_step = opt.range_step > 0 ? opt.range_step : opt.grid_step;
  grids.inner_steps = opt.inner_steps > 0
                          ? opt.inner_steps
                          : steps_for_radius(cert.r0, opt.grid_step);
  SweepOptions sweep = sweep_options(opt);
  // The window center is an anchor, not necessarily a graph point: a
  // perturbed certificate keeps (xbar, ybar) while the graph moves by up to
  // ||g(xbar)|| <= b. Anywhere inside the y-window is acceptable.
  sweep.center_tol = std::max(opt.center_tol, cert.b);
  const ModulusEstimate est = empirical_strong_around(
      F, cert.xbar, cert.ybar, cert.a, cert.b, cert.r0, grids, sweep);
  return report_from_estimate(est, cert.kappa * opt.safety,
                              replay_strong_around(F, cert.ybar, cert.b, est));
}

ValidationReport validate(const CalmnessCert& cert, const SingleValuedMap& g,
                          const ValidateOptions& opt) {
  const Grid grid = Grid::centered_with_step(cert.xbar, cert.radius, opt.grid_step);
  const ModulusEstimate est =
      empirical_calmness(g, cert.xbar, cert.radius, grid, sweep_options(opt));
  ValidationReport rep = report_from_estimate(
      est, cert.mu * opt.safety, replay_calmness(g, cert.xbar, est));
  const double center_norm = norm(g.range, evaluate(g, cert.xbar));
  if (!(center_norm <= cert.value_bound)) rep.holds = false;
  return rep;
}

ValidationReport validate(const IsolatedSelectionCert& cert,
                          const SetValuedMap& G, const ValidateOptions& opt) {
  const Space domain = G.domain_space();
  const Space range = G.range_space();
  const Grid grid = Grid::centered_with_step(cert.xbar, cert.beta, opt.grid_step);
  const Ball window{domain, cert.xbar, cert.beta, false};

  const SweepBest best = sweep_max(
      grid.size(), opt.threads, [&](long long i) -> std::optional<double> {
        const Vec x = grid.point(i);
        if (!window.contains(x) || !in_domain(G, x)) return std::nullopt;
        const double den = distance(domain, x, cert.xbar);
        if (den == 0.0) return std::nullopt;
        return evaluate(G, x).max_distance_to(cert.zbar, range) / den;
      });

  ValidationReport rep;
  rep.worst_ratio = best.index < 0 ? 0.0 : best.value;
  rep.bound = cert.mu * opt.safety;
  rep.sample_count = best.contributing;
  rep.grid_step = grid.max_step();
  if (best.index >= 0) {
    rep.witness.entries.emplace_back("x", grid.point(best.index));
    const Vec x = grid.point(best.index);
    rep.replayed = evaluate(G, x).max_distance_to(cert.zbar, range) /
                   distance(domain, x, cert.xbar);
  }
  // The selection pins the center image to the singleton {zbar}.
  const ImageSet at_center = evaluate(G, cert.xbar);
  const bool center_ok = !at_center.is_empty() && at_center.holds_points() &&
                         at_center.point_list().size() == 1 &&
                         distance(range, at_center.point_list()[0], cert.zbar) <=
                             opt.center_tol;
  rep.holds = center_ok && rep.worst_ratio <= rep.bound;
  return rep;
}

StrongSubregAtCert at_cert_from_estimate(const Vec& xbar, const Vec& ybar,
                                         double alpha,
                                         const ModulusEstimate& est,
                                         double pad, double kappa_floor) {
  const double kappa = std::max(est.value * pad, kappa_floor);
  if (!(kappa > 0) || std::isinf(kappa)) {
    throw std::invalid_argument(
        "at_cert_from_estimate: estimate must be finite and positive");
  }
  StrongSubregAtCert cert;
  cert.xbar = xbar;
  cert.ybar = ybar;
  cert.kappa = kappa;
  cert.alpha = alpha;
  cert.provenance.push_back("empirical_strong_at: value=" + fmt(est.value) +
                            " grid_step=" + fmt(est.grid_step) +
                            " pad=" + fmt(pad));
  return cert;
}

StrongSubregAroundCert around_cert_from_estimate(const Vec& xbar,
                                                 const Vec& ybar, double a,
                                                 double b, double r0,
                                                 const ModulusEstimate& est,
                                                 double pad,
                                                 double kappa_floor) {
  const double kappa = std::max(est.value * pad, kappa_floor);
  if (!(kappa > 0) || std::isinf(kappa)) {
    throw std::invalid_argument(
        "around_cert_from_estimate: estimate must be finite and positive");
  }
  StrongSubregAroundCert cert;
  cert.xbar = xbar;
  cert.ybar = ybar;
  cert.kappa = kappa;
  cert.a = a;
  cert.b = b;
  cert.r0 = r0;
  cert.provenance.push_back("empirical_strong_around: value=" + fmt(est.value) +
                            " grid_step=" + fmt(est.grid_step) +
                            " pad=" + fmt(pad));
  return cert;
}

CalmnessCert calmness_cert_from_estimate(const SingleValuedMap& g,
                                         const Vec& xbar, double radius,
                                         const ModulusEstimate& est,
                                         double pad) {
  if (std::isinf(est.value)) {
    throw std::invalid_argument("calmness_cert_from_estimate: estimate is +inf");
  }
  CalmnessCert cert;
  cert.xbar = xbar;
  cert.value_at_center = evaluate(g, xbar);
  cert.mu = est.value * pad;
  cert.radius = radius;
  cert.value_bound = norm(g.range, cert.value_at_center);
  return cert;
}

}  // namespace subreg
