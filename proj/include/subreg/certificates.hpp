#pragma once

#include "subreg/moduli.hpp"

#include <string>
#include <vector>

namespace subreg {

/// Claim: ||x - xbar|| <= kappa * dist(ybar, F(x)) for all x in B[xbar, alpha].
struct StrongSubregAtCert {
  Vec xbar;
  Vec ybar;
  double kappa = 1.0;
  double alpha = 1.0;
  double eta = 0.0;  // slack used by the producing rule; 0 for root certificates
  std::vector<std::string> provenance;  // append-only chain of rule applications
};

/// Claim: for every graph point (x, y) with x in B[xbar, a], y in B[ybar, b]
/// and every u in B[x, r0]: ||u - x|| <= kappa * dist(y, F(u) ∩ B[ybar, b]).
/// r0 is the verification radius standing in for the existential
/// neighborhood; the theorems do not bound it constructively.
struct StrongSubregAroundCert {
  Vec xbar;
  Vec ybar;
  double kappa = 1.0;
  double a = 1.0;
  double b = 1.0;
  double r0 = 0.25;
  double eta = 0.0;
  std::vector<std::string> provenance;
};

/// Claim: ||g(x) - g(xbar)|| <= mu * ||x - xbar|| on B[xbar, radius], and
/// ||g(xbar)|| <= value_bound when g is used as a perturbation.
struct CalmnessCert {
  Vec xbar;
  Vec value_at_center;  // g(xbar)
  double mu = 0.0;
  double radius = 1.0;
  double value_bound = 0.0;
};

/// Claim: G(xbar) = {zbar} and G(x) ⊂ {zbar} + mu*||x - xbar||*B on
/// B[xbar, beta].
struct IsolatedSelectionCert {
  Vec xbar;
  Vec zbar;
  double mu = 0.0;
  double beta = 1.0;
};

/// kappa / (1 - kappa*mu) * (1 + eta). Throws std::domain_error when
/// kappa*mu >= 1 (the perturbation hypothesis fails).
double propagated_constant(double kappa, double mu, double eta);

/// Calm single-valued perturbation of a strong-at certificate: new center
/// (xbar, ybar + g(xbar)), constant kappa/(1-kappa*mu)*(1+eta), radius
/// min(alpha, calm.radius).
StrongSubregAtCert propagate_calm_perturbation(const StrongSubregAtCert& cert,
                                               const CalmnessCert& calm,
                                               double eta);

/// Set-valued perturbation with an isolated selection: new center
/// (xbar, ybar + zbar), same constant formula, radius sel.beta, which must
/// lie in (0, alpha].
StrongSubregAtCert propagate_setvalued_perturbation(
    const StrongSubregAtCert& cert, const IsolatedSelectionCert& sel,
    double eta);

/// Lipschitz perturbation of an around-certificate. Picks alpha maximal
/// (min(a/2, lip.radius)) and then beta maximal ((b - mu*alpha)/2); the
/// output satisfies 2*alpha <= a and 2*beta + mu*alpha <= b exactly.
StrongSubregAroundCert propagate_around_perturbation(
    const StrongSubregAroundCert& cert, const CalmnessCert& lip, double eta);

struct ValidationReport {
  bool holds = false;
  double worst_ratio = 0.0;
  double bound = 0.0;    // certificate constant * safety factor
  double replayed = 0.0; // witness re-evaluation
  Witness witness;
  long long sample_count = 0;
  double grid_step = 0.0;
};

struct ValidateOptions {
  double safety = 1.1;       // discretization safety factor
  double grid_step = 1e-3;   // domain sweep spacing
  double range_step = -1.0;  // < 0: same as grid_step
  int inner_steps = 0;       // around-sweeps; 0 derives from r0/grid_step
  double around_r0 = -1.0;   // uniform around-sweeps; < 0: a/4
  double center_tol = 1e-9;
  int threads = 1;
};

/// Empirical soundness check of a certificate against the moduli oracles:
/// holds iff the matching empirical modulus <= constant * safety.
ValidationReport validate(const StrongSubregAtCert& cert, const SetValuedMap& F,
                          const ValidateOptions& opt = {});
ValidationReport validate(const StrongSubregAroundCert& cert,
                          const SetValuedMap& F, const ValidateOptions& opt = {});
ValidationReport validate(const CalmnessCert& cert, const SingleValuedMap& g,
                          const ValidateOptions& opt = {});
ValidationReport validate(const IsolatedSelectionCert& cert,
                          const SetValuedMap& G, const ValidateOptions& opt = {});

/// Certificate constructors from brute-force estimates; the constant is the
/// estimate value times a headroom factor. kappa_floor > 0 admits windows
/// where the property holds vacuously (every constraint point has an empty
/// restricted image, so the sweep reports 0).
StrongSubregAtCert at_cert_from_estimate(const Vec& xbar, const Vec& ybar,
                                         double alpha,
                                         const ModulusEstimate& est,
                                         double pad = 1.1,
                                         double kappa_floor = 0.0);
StrongSubregAroundCert around_cert_from_estimate(const Vec& xbar,
                                                 const Vec& ybar, double a,
                                                 double b, double r0,
                                                 const ModulusEstimate& est,
                                                 double pad = 1.1,
                                                 double kappa_floor = 0.0);
CalmnessCert calmness_cert_from_estimate(const SingleValuedMap& g,
                                         const Vec& xbar, double radius,
                                         const ModulusEstimate& est,
                                         double pad = 1.1);

}  // namespace subreg
