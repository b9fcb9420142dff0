#pragma once

#include "subreg/certificates.hpp"

#include <vector>

namespace subreg {

/// The parametric family G_t(x) = f(t, x) + F(x).
struct ParametricFamily {
  ParametricSingleValuedMap f;
  SetValuedMap F;
};

/// G_t as a set-valued map with the parameter frozen.
SetValuedMap family_map(const ParametricFamily& family, const Vec& t);

/// Finite sample of a compact set Omega ⊂ P × X.
struct CompactSample {
  Space parameter_space{1, NormKind::Sup};
  Space domain_space{1, NormKind::Sup};
  std::vector<std::pair<Vec, Vec>> points;  // (t, xbar)
  double cover_radius_floor = 1e-9;
};

/// Per-point outcome of the uniformization step: proof constants
/// mu = 1/(2 kappa), kappa' = 3 kappa, beta = b/4, a search radius alpha and
/// an open cover radius r' in (0, alpha/2].
struct LocalUniformRecord {
  Vec t;
  Vec xbar;
  double kappa_base = 1.0;
  double a_base = 1.0;
  double b_base = 1.0;
  double mu = 0.5;
  double kappa_prime = 3.0;
  double alpha = 0.5;
  double beta = 0.25;
  double r_prime = 0.25;
};

/// One constant and one window pair valid at every sample point, aggregated
/// over a finite subcover: kappa = max kappa'_i, a = min alpha_i,
/// b = min beta_i.
struct UniformCert {
  double kappa = 1.0;
  double a = 1.0;
  double b = 1.0;
  std::vector<int> subcover;  // selected record indices, ascending
  std::vector<LocalUniformRecord> records;
};

struct UniformizeOptions {
  int ladder_halvings = 20;
  int equi_space_steps = 21;  // per axis, x/u sweep
  int equi_param_steps = 11;  // per axis, s sweep
  int continuity_steps = 11;  // per axis, r' sampling
  int threads = 1;
};

/// One point of Theorem 3's proof: from a validated around-certificate of
/// G_t at (xbar, 0) with constants (kappa, a, b), fix mu = 1/(2 kappa),
/// kappa' = 3 kappa, beta = b/4; find alpha in (0, kappa*b) capped at a/2 by
/// a 20-step halving ladder on the equi-continuity oracle (swept on the
/// doubled spatial window the proof requires), and r' in (0, alpha/2]
/// maximal with ||f(s, xbar) - f(t, xbar)|| <= beta on the sampled ball.
LocalUniformRecord local_uniform_record(const ParametricFamily& family,
                                        const Vec& t, const Vec& xbar,
                                        const StrongSubregAroundCert& base,
                                        const UniformizeOptions& opt = {},
                                        double radius_floor = 1e-9);

/// Greedy finite subcover in ascending sample order; every sample point lies
/// in a selected record's open product ball B(t_i, r'_i) x B(x_i, r'_i).
UniformCert greedy_subcover(const CompactSample& sample,
                            const std::vector<LocalUniformRecord>& records);

/// Records for every sample point, then the subcover aggregation.
UniformCert uniformize_around(const ParametricFamily& family,
                              const CompactSample& sample,
                              const std::vector<StrongSubregAroundCert>& base,
                              const UniformizeOptions& opt = {});

struct UniformViolation {
  int sample_index = -1;
  double ratio = 0.0;
  double bound = 0.0;
  Witness witness;
};

struct UniformValidationReport {
  std::vector<UniformViolation> violations;
  std::vector<double> per_point_ratio;
  double bound = 0.0;
  bool ok() const { return violations.empty(); }
};

/// Runs the around-oracle at every sample point with the uniform constants.
UniformValidationReport validate_uniform(const UniformCert& cert,
                                         const ParametricFamily& family,
                                         const CompactSample& sample,
                                         const ValidateOptions& opt = {});

/// "At" mode (Theorem 4): the same pipeline with the Proposition-1 step in
/// place of the window arithmetic; produces a single (kappa, c).
struct AtUniformRecord {
  Vec t;
  Vec xbar;
  double kappa_base = 1.0;
  double alpha_base = 1.0;
  double mu = 0.5;
  double kappa_prime = 3.0;
  double c = 1.0;        // Prop-1 neighborhood radius, in (0, alpha_base]
  double r_prime = 0.5;  // open cover radius, <= c/2
};

struct UniformAtCert {
  double kappa = 1.0;
  double c = 1.0;
  std::vector<int> subcover;
  std::vector<AtUniformRecord> records;
};

UniformAtCert uniformize_at(const ParametricFamily& family,
                            const CompactSample& sample,
                            const std::vector<StrongSubregAtCert>& base,
                            const UniformizeOptions& opt = {});

UniformValidationReport validate_uniform_at(const UniformAtCert& cert,
                                            const ParametricFamily& family,
                                            const CompactSample& sample,
                                            const ValidateOptions& opt = {});

}  // namespace subreg
