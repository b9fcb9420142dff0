#include "subreg/commands.hpp"

#include "subreg/io.hpp"
#include "subreg/map_io.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace subreg {

namespace {

std::string out_path(const RunContext& ctx, const std::string& name) {
  std::filesystem::create_directories(ctx.out_dir);
  return (std::filesystem::path(ctx.out_dir) / name).string();
}

void write_json(const RunContext& ctx, const std::string& name, const Json& j) {
  write_text_file(out_path(ctx, name), j.dump(2) + "\n");
}

SweepOptions sweep_options(const RunContext& ctx) {
  SweepOptions opt;
  opt.threads = ctx.threads;
  return opt;
}

ValidateOptions validate_options(const Json& config, const RunContext& ctx) {
  ValidateOptions opt;
  opt.threads = ctx.threads;
  if (config.contains("validate")) {
    const Json& v = config["validate"];
    reject_unknown_keys(v,
                        {"grid_step", "safety", "range_step", "inner_steps",
                         "r0", "center_tol"},
                        "validate block");
    opt.grid_step = config_number(v, "grid_step", opt.grid_step);
    opt.safety = config_number(v, "safety", opt.safety);
    opt.range_step = config_number(v, "range_step", opt.range_step);
    opt.inner_steps = config_int(v, "inner_steps", opt.inner_steps);
    opt.around_r0 = config_number(v, "r0", opt.around_r0);
    opt.center_tol = config_number(v, "center_tol", opt.center_tol);
  }
  return opt;
}

UniformizeOptions uniformize_options(const Json& config, const RunContext& ctx) {
  UniformizeOptions opt;
  opt.threads = ctx.threads;
  if (config.contains("ladders")) {
    const Json& l = config["ladders"];
    reject_unknown_keys(l,
                        {"halvings", "equi_space_steps", "equi_param_steps",
                         "continuity_steps"},
                        "ladders block");
    opt.ladder_halvings = config_int(l, "halvings", opt.ladder_halvings);
    opt.equi_space_steps = config_int(l, "equi_space_steps", opt.equi_space_steps);
    opt.equi_param_steps = config_int(l, "equi_param_steps", opt.equi_param_steps);
    opt.continuity_steps = config_int(l, "continuity_steps", opt.continuity_steps);
  }
  return opt;
}

double slack_eta(const Json& config, const RunContext& ctx) {
  if (ctx.eta_override) return *ctx.eta_override;
  return config_number(config, "eta", 0.05);
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

const Json& require_key(const Json& config, const char* key, const char* what) {
  if (!config.contains(key)) {
    throw std::invalid_argument(std::string(what) + ": missing required key '" +
                                key + "'");
  }
  return config[key];
}

Vec require_vec(const Json& config, const char* key, const char* what) {
  if (!config.contains(key)) {
    throw std::invalid_argument(std::string(what) + ": missing '" + key + "'");
  }
  return vec_from_json(config[key], key);
}

}  // namespace

int cmd_estimate(const Json& config, const RunContext& ctx) {
  reject_unknown_keys(config,
                      {"operation", "map", "g", "f", "center_x", "center_y",
                       "radius", "grid_step", "window_a", "window_b", "r0",
                       "range_step", "radii", "mode", "steps", "inverse_span",
                       "membership_tol", "region", "region_steps", "t", "alpha",
                       "output"},
                      "estimate config");
  if (!config.contains("operation")) {
    throw std::invalid_argument("estimate config: missing 'operation'");
  }
  const std::string op = config["operation"].get<std::string>();
  const std::string output =
      config.contains("output") ? config["output"].get<std::string>()
                                : std::string("estimate.json");
  SweepOptions sweep = sweep_options(ctx);
  sweep.membership_tol = config_number(config, "membership_tol", -1.0);

  Json result;
  result["operation"] = op;

  if (op == "strong_at" || op == "subreg_at") {
    const SetValuedMap F = parse_set_valued(require_key(config, "map", "estimate config"));
    const Vec xbar = require_vec(config, "center_x", "estimate");
    const Vec ybar = require_vec(config, "center_y", "estimate");
    const double radius = require_number(config, "radius", "estimate");
    const double step = require_number(config, "grid_step", "estimate");
    const Grid grid = Grid::centered_with_step(xbar, radius, step);
    ModulusEstimate est;
    if (op == "strong_at") {
      est = empirical_strong_at(F, xbar, ybar, radius, grid, sweep);
    } else {
      const double span = config_number(config, "inverse_span", 2.0 * radius);
      const Grid inverse = Grid::centered_with_step(xbar, span, step);
      est = empirical_subreg_at(F, xbar, ybar, radius, grid, inverse, sweep);
    }
    result["estimate"] = to_json(est);
  } else if (op == "strong_around") {
    const SetValuedMap F = parse_set_valued(require_key(config, "map", "estimate config"));
    const Vec xbar = require_vec(config, "center_x", "estimate");
    const Vec ybar = require_vec(config, "center_y", "estimate");
    const double a = require_number(config, "window_a", "estimate");
    const double b = require_number(config, "window_b", "estimate");
    const double step = require_number(config, "grid_step", "estimate");
    AroundGrids grids;
    grids.outer = Grid::centered_with_step(xbar, a, step);
    grids.range_step = config_number(config, "range_step", step);
    if (config.contains("r0")) {
      const double r0 = number_from_json(config["r0"], "r0");
      grids.inner_steps = steps_for_radius(r0, step);
      result["estimate"] = to_json(
          empirical_strong_around(F, xbar, ybar, a, b, r0, grids, sweep));
    } else {
      // Default verification-radius ladder, reported side by side.
      Json ladder = Json::array();
      for (const double r0 : {a / 4.0, a / 8.0, a / 16.0}) {
        grids.inner_steps = steps_for_radius(r0, step);
        Json entry;
        entry["r0"] = json_number(r0);
        entry["estimate"] = to_json(
            empirical_strong_around(F, xbar, ybar, a, b, r0, grids, sweep));
        ladder.push_back(std::move(entry));
      }
      result["r0_ladder"] = std::move(ladder);
    }
  } else if (op == "calmness") {
    const SingleValuedMap g = parse_single_valued(require_key(config, "g", "estimate config"));
    const Vec xbar = require_vec(config, "center_x", "estimate");
    const double radius = require_number(config, "radius", "estimate");
    const double step = require_number(config, "grid_step", "estimate");
    const Grid grid = Grid::centered_with_step(xbar, radius, step);
    result["estimate"] =
        to_json(empirical_calmness(g, xbar, radius, grid, sweep));
  } else if (op == "lipschitz") {
    const SingleValuedMap g = parse_single_valued(require_key(config, "g", "estimate config"));
    if (!config.contains("region")) {
      throw std::invalid_argument("estimate config: lipschitz needs 'region'");
    }
    const double step = require_number(config, "grid_step", "estimate");
    std::vector<std::pair<double, double>> box;
    std::vector<int> steps;
    for (const Json& side : config["region"]) {
      if (!side.is_array() || side.size() != 2) {
        throw std::invalid_argument("estimate config: malformed region side");
      }
      const double lo = number_from_json(side[0], "region");
      const double hi = number_from_json(side[1], "region");
      box.emplace_back(lo, hi);
      steps.push_back(
          std::max(2, static_cast<int>(std::llround((hi - lo) / step)) + 1));
    }
    result["estimate"] = to_json(
        empirical_lipschitz(g, Grid::over_box(box, steps), sweep));
  } else if (op == "equi_continuity") {
    const ParametricSingleValuedMap f = parse_parametric(require_key(config, "f", "config"));
    const Vec t = require_vec(config, "t", "estimate");
    const Vec xbar = require_vec(config, "center_x", "estimate");
    const double alpha = require_number(config, "alpha", "estimate");
    const double step = require_number(config, "grid_step", "estimate");
    EquiGrids grids{Grid::centered_with_step(xbar, alpha, step),
                    Grid::centered_with_step(t, alpha, step)};
    result["estimate"] =
        to_json(equi_continuity_modulus(f, t, xbar, alpha, grids, sweep));
  } else if (op == "divergence") {
    const SetValuedMap F = parse_set_valued(require_key(config, "map", "estimate config"));
    const Vec xbar = require_vec(config, "center_x", "estimate");
    const Vec ybar = require_vec(config, "center_y", "estimate");
    if (!config.contains("radii")) {
      throw std::invalid_argument("estimate config: divergence needs 'radii'");
    }
    std::vector<double> radii;
    for (const Json& r : config["radii"]) radii.push_back(number_from_json(r, "radii"));
    const std::string mode_name =
        config.contains("mode") ? config["mode"].get<std::string>()
                                : std::string("strong_at");
    const DivergenceMode mode = mode_name == "subreg_at"
                                    ? DivergenceMode::SubregAt
                                    : DivergenceMode::StrongAt;
    const int steps = config_int(config, "steps", 201);
    const auto profile =
        divergence_profile(F, xbar, ybar, radii, mode, steps, sweep);
    Json arr = Json::array();
    for (const ModulusEstimate& est : profile) arr.push_back(to_json(est));
    result["profile"] = std::move(arr);
    write_text_file(out_path(ctx, "divergence.csv"), divergence_csv(profile));
  } else {
    throw std::invalid_argument("estimate config: unknown operation '" + op + "'");
  }

  write_json(ctx, output, result);
  return 0;
}

// ---------------------------------------------------------------------------
// certify
// ---------------------------------------------------------------------------

namespace {

struct BaseBlock {
  SetValuedMap F;
  bool around = false;
  StrongSubregAtCert at;
  StrongSubregAroundCert around_cert;
  Json estimate_json;  // present when the constant was estimated
};

BaseBlock build_base(const Json& base, const RunContext& ctx) {
  reject_unknown_keys(base,
                      {"kind", "map", "center_x", "center_y", "alpha", "a", "b",
                       "r0", "kappa", "estimate"},
                      "certify base block");
  BaseBlock out;
  out.F = parse_set_valued(require_key(base, "map", "certify base"));
  const Vec xbar = require_vec(base, "center_x", "certify base");
  const Vec ybar = require_vec(base, "center_y", "certify base");
  const std::string kind =
      base.contains("kind") ? base["kind"].get<std::string>()
                            : std::string("strong_at");

  double est_step = 1e-3;
  double est_pad = 1.1;
  double est_range_step = -1.0;
  if (base.contains("estimate")) {
    const Json& e = base["estimate"];
    reject_unknown_keys(e, {"grid_step", "pad", "range_step"},
                        "certify base estimate block");
    est_step = config_number(e, "grid_step", est_step);
    est_pad = config_number(e, "pad", est_pad);
    est_range_step = config_number(e, "range_step", est_range_step);
  }
  SweepOptions sweep;
  sweep.threads = ctx.threads;

  if (kind == "strong_at") {
    out.around = false;
    const double alpha = require_number(base, "alpha", "certify base");
    if (base.contains("kappa")) {
      out.at.xbar = xbar;
      out.at.ybar = ybar;
      out.at.kappa = number_from_json(base["kappa"], "kappa");
      out.at.alpha = alpha;
      out.at.provenance.push_back("declared: kappa=" + format_full(out.at.kappa));
    } else {
      const Grid grid = Grid::centered_with_step(xbar, alpha, est_step);
      const ModulusEstimate est =
          empirical_strong_at(out.F, xbar, ybar, alpha, grid, sweep);
      out.estimate_json = to_json(est);
      out.at = at_cert_from_estimate(xbar, ybar, alpha, est, est_pad);
    }
  } else if (kind == "strong_around") {
    out.around = true;
    const double a = require_number(base, "a", "certify base");
    const double b = require_number(base, "b", "certify base");
    const double r0 = config_number(base, "r0", a / 4.0);
    if (base.contains("kappa")) {
      out.around_cert.xbar = xbar;
      out.around_cert.ybar = ybar;
      out.around_cert.kappa = number_from_json(base["kappa"], "kappa");
      out.around_cert.a = a;
      out.around_cert.b = b;
      out.around_cert.r0 = r0;
      out.around_cert.provenance.push_back(
          "declared: kappa=" + format_full(out.around_cert.kappa));
    } else {
      AroundGrids grids{Grid::centered_with_step(xbar, a, est_step),
                        est_range_step > 0 ? est_range_step : est_step,
                        steps_for_radius(r0, est_step)};
      const ModulusEstimate est =
          empirical_strong_around(out.F, xbar, ybar, a, b, r0, grids, sweep);
      out.estimate_json = to_json(est);
      out.around_cert =
          around_cert_from_estimate(xbar, ybar, a, b, r0, est, est_pad);
    }
  } else {
    throw std::invalid_argument("certify base: unknown kind '" + kind + "'");
  }
  return out;
}

CalmnessCert build_calmness(const Json& block, const SingleValuedMap& g,
                            const Vec& xbar, const RunContext& ctx) {
  const double radius = require_number(block, "radius", "certify perturbation");
  CalmnessCert calm;
  if (block.contains("mu")) {
    calm.xbar = xbar;
    calm.value_at_center = evaluate(g, xbar);
    calm.mu = number_from_json(block["mu"], "mu");
    calm.radius = radius;
    calm.value_bound = norm(g.range, calm.value_at_center);
  } else {
    const double step = config_number(block, "grid_step", 1e-3);
    const double pad = config_number(block, "pad", 1.1);
    SweepOptions sweep;
    sweep.threads = ctx.threads;
    const Grid grid = Grid::centered_with_step(xbar, radius, step);
    const ModulusEstimate est =
        empirical_calmness(g, xbar, radius, grid, sweep);
    calm = calmness_cert_from_estimate(g, xbar, radius, est, pad);
  }
  return calm;
}

}  // namespace

int cmd_certify(const Json& config, const RunContext& ctx) {
  reject_unknown_keys(config, {"base", "perturbation", "eta", "validate"},
                      "certify config");
  if (!config.contains("base")) {
    throw std::invalid_argument("certify config: missing 'base'");
  }
  const double eta = slack_eta(config, ctx);
  const ValidateOptions vopt = validate_options(config, ctx);

  BaseBlock base = build_base(config["base"], ctx);
  Json report;
  if (!base.estimate_json.is_null()) report["base_estimate"] = base.estimate_json;

  bool all_hold = true;
  if (base.around) {
    const ValidationReport v = validate(base.around_cert, base.F, vopt);
    report["base_certificate"] = to_json(base.around_cert);
    report["base_validation"] = to_json(v);
    all_hold = all_hold && v.holds;
  } else {
    const ValidationReport v = validate(base.at, base.F, vopt);
    report["base_certificate"] = to_json(base.at);
    report["base_validation"] = to_json(v);
    all_hold = all_hold && v.holds;
  }

  if (config.contains("perturbation")) {
    const Json& pert = config["perturbation"];
    reject_unknown_keys(pert,
                        {"rule", "g", "G", "mu", "radius", "beta", "grid_step",
                         "pad"},
                        "certify perturbation");
    const std::string rule = require_key(pert, "rule", "certify perturbation").get<std::string>();
    const Vec xbar = base.around ? base.around_cert.xbar : base.at.xbar;

    if (rule == "calm") {
      if (base.around) {
        throw std::invalid_argument("certify: rule 'calm' needs a strong_at base");
      }
      const SingleValuedMap g = parse_single_valued(require_key(pert, "g", "certify perturbation"));
      const CalmnessCert calm = build_calmness(pert, g, xbar, ctx);
      const StrongSubregAtCert out = propagate_calm_perturbation(base.at, calm, eta);
      const SetValuedMap perturbed = sum(g, base.F);
      const ValidationReport v = validate(out, perturbed, vopt);
      report["calmness_certificate"] = to_json(calm);
      report["propagated_certificate"] = to_json(out);
      report["propagated_validation"] = to_json(v);
      all_hold = all_hold && v.holds;
    } else if (rule == "setvalued") {
      if (base.around) {
        throw std::invalid_argument(
            "certify: rule 'setvalued' needs a strong_at base");
      }
      const SingleValuedMap G = parse_single_valued(require_key(pert, "G", "certify perturbation"));
      const double beta = require_number(pert, "beta", "certify perturbation");
      IsolatedSelectionCert sel;
      sel.xbar = xbar;
      sel.zbar = evaluate(G, xbar);
      sel.beta = beta;
      if (pert.contains("mu")) {
        sel.mu = number_from_json(pert["mu"], "mu");
      } else {
        const double step = config_number(pert, "grid_step", 1e-3);
        const double pad = config_number(pert, "pad", 1.1);
        SweepOptions sweep;
        sweep.threads = ctx.threads;
        const Grid grid = Grid::centered_with_step(xbar, beta, step);
        sel.mu = empirical_calmness(G, xbar, beta, grid, sweep).value * pad;
      }
      const StrongSubregAtCert out =
          propagate_setvalued_perturbation(base.at, sel, eta);
      const SetValuedMap perturbed = sum(G, base.F);
      const ValidationReport v = validate(out, perturbed, vopt);
      report["selection_certificate"] = to_json(sel);
      report["propagated_certificate"] = to_json(out);
      report["propagated_validation"] = to_json(v);
      all_hold = all_hold && v.holds;
    } else if (rule == "around_lipschitz") {
      if (!base.around) {
        throw std::invalid_argument(
            "certify: rule 'around_lipschitz' needs a strong_around base");
      }
      const SingleValuedMap g = parse_single_valued(require_key(pert, "g", "certify perturbation"));
      const double radius = require_number(pert, "radius", "certify perturbation");
      CalmnessCert lip;
      lip.xbar = xbar;
      lip.value_at_center = evaluate(g, xbar);
      lip.radius = radius;
      lip.value_bound = norm(g.range, lip.value_at_center);
      if (pert.contains("mu")) {
        lip.mu = number_from_json(pert["mu"], "mu");
      } else {
        const double step = config_number(pert, "grid_step", 1e-3);
        const double pad = config_number(pert, "pad", 1.1);
        SweepOptions sweep;
        sweep.threads = ctx.threads;
        const Grid grid = Grid::centered_with_step(xbar, radius, step);
        lip.mu = empirical_lipschitz(g, grid, sweep).value * pad;
      }
      const StrongSubregAroundCert out =
          propagate_around_perturbation(base.around_cert, lip, eta);
      const SetValuedMap perturbed = sum(g, base.F);
      const ValidationReport v = validate(out, perturbed, vopt);
      report["lipschitz_certificate"] = to_json(lip);
      report["propagated_certificate"] = to_json(out);
      report["propagated_validation"] = to_json(v);
      all_hold = all_hold && v.holds;
    } else {
      throw std::invalid_argument("certify: unknown perturbation rule '" + rule +
                                  "'");
    }
  }

  report["all_hold"] = all_hold;
  write_json(ctx, "certificate.json", report);
  return all_hold ? 0 : 1;
}

// ---------------------------------------------------------------------------
// uniformize
// ---------------------------------------------------------------------------

namespace {

CompactSample parse_omega(const Json& config, const ParametricFamily& family) {
  if (!config.contains("omega")) {
    throw std::invalid_argument("uniformize config: missing 'omega'");
  }
  const Json& omega = config["omega"];
  reject_unknown_keys(omega, {"points", "t_grid", "x", "cover_radius_floor"},
                      "omega block");
  CompactSample sample;
  sample.parameter_space = family.f.parameter_space;
  sample.domain_space = family.F.domain_space();
  sample.cover_radius_floor = config_number(omega, "cover_radius_floor", 1e-9);

  if (omega.contains("points")) {
    for (const Json& p : omega["points"]) {
      reject_unknown_keys(p, {"t", "x"}, "omega point");
      sample.points.emplace_back(vec_from_json(require_key(p, "t", "omega point"), "omega t"),
                                 vec_from_json(require_key(p, "x", "omega point"), "omega x"));
    }
  } else if (omega.contains("t_grid")) {
    const Json& tg = omega["t_grid"];
    reject_unknown_keys(tg, {"lo", "hi", "steps"}, "omega t_grid");
    const double lo = require_number(tg, "lo", "omega t_grid");
    const double hi = require_number(tg, "hi", "omega t_grid");
    const int steps = config_int(tg, "steps", 11);
    const Vec x = vec_from_json(require_key(omega, "x", "omega block"), "omega x");
    const Grid grid = Grid::over_box({{lo, hi}}, {steps});
    for (long long i = 0; i < grid.size(); ++i) {
      sample.points.emplace_back(grid.point(i), x);
    }
  } else {
    throw std::invalid_argument("omega block: needs 'points' or 't_grid'");
  }
  if (sample.points.empty()) {
    throw std::invalid_argument("omega block: empty sample");
  }
  return sample;
}

}  // namespace

int cmd_uniformize(const Json& config, const RunContext& ctx) {
  reject_unknown_keys(config,
                      {"mode", "f", "F", "omega", "windows", "base_estimate",
                       "ladders", "validate"},
                      "uniformize config");
  ParametricFamily family{parse_parametric(require_key(config, "f", "config")),
                          parse_set_valued(require_key(config, "F", "config"))};
  const CompactSample sample = parse_omega(config, family);
  const std::string mode =
      config.contains("mode") ? config["mode"].get<std::string>()
                              : std::string("around");

  double est_step = 1e-3;
  double est_range_step = -1.0;
  double est_pad = 1.1;
  double kappa_floor = 1.0;
  double center_tol = 1e-9;
  if (config.contains("base_estimate")) {
    const Json& e = config["base_estimate"];
    reject_unknown_keys(e,
                        {"grid_step", "range_step", "pad", "kappa_floor",
                         "center_tol"},
                        "base_estimate block");
    est_step = config_number(e, "grid_step", est_step);
    est_range_step = config_number(e, "range_step", est_range_step);
    est_pad = config_number(e, "pad", est_pad);
    kappa_floor = config_number(e, "kappa_floor", kappa_floor);
    center_tol = config_number(e, "center_tol", center_tol);
  }
  SweepOptions sweep;
  sweep.threads = ctx.threads;
  sweep.center_tol = center_tol;

  const UniformizeOptions uopt = uniformize_options(config, ctx);
  ValidateOptions vopt = validate_options(config, ctx);
  vopt.center_tol = std::max(vopt.center_tol, center_tol);

  Json report;
  bool ok = false;
  if (mode == "around") {
    const Json& w = require_key(config, "windows", "uniformize config");
    reject_unknown_keys(w, {"a", "b", "r0"}, "windows block");
    const double a = require_number(w, "a", "windows");
    const double b = require_number(w, "b", "windows");
    const double r0 = config_number(w, "r0", a / 4.0);

    std::vector<StrongSubregAroundCert> base;
    Json base_estimates = Json::array();
    const Vec ybar = Vec::Zero(family.F.range_space().dim);
    for (const auto& [t, xbar] : sample.points) {
      const SetValuedMap G = family_map(family, t);
      AroundGrids grids{Grid::centered_with_step(xbar, a, est_step),
                        est_range_step > 0 ? est_range_step : est_step,
                        steps_for_radius(r0, est_step)};
      const ModulusEstimate est =
          empirical_strong_around(G, xbar, ybar, a, b, r0, grids, sweep);
      base_estimates.push_back(to_json(est));
      base.push_back(around_cert_from_estimate(xbar, ybar, a, b, r0, est,
                                               est_pad, kappa_floor));
    }
    const UniformCert cert = uniformize_around(family, sample, base, uopt);
    const UniformValidationReport validation =
        validate_uniform(cert, family, sample, vopt);
    ok = validation.ok();
    report["base_estimates"] = std::move(base_estimates);
    report["uniform_certificate"] = to_json(cert);
    report["validation"] = to_json(validation);
    write_text_file(out_path(ctx, "records.csv"), records_csv(cert));
  } else if (mode == "at") {
    const Json& w = require_key(config, "windows", "uniformize config");
    reject_unknown_keys(w, {"alpha"}, "windows block (at mode)");
    const double alpha = require_number(w, "alpha", "windows");

    std::vector<StrongSubregAtCert> base;
    Json base_estimates = Json::array();
    const Vec ybar = Vec::Zero(family.F.range_space().dim);
    for (const auto& [t, xbar] : sample.points) {
      const SetValuedMap G = family_map(family, t);
      const Grid grid = Grid::centered_with_step(xbar, alpha, est_step);
      const ModulusEstimate est =
          empirical_strong_at(G, xbar, ybar, alpha, grid, sweep);
      base_estimates.push_back(to_json(est));
      base.push_back(
          at_cert_from_estimate(xbar, ybar, alpha, est, est_pad, kappa_floor));
    }
    const UniformAtCert cert = uniformize_at(family, sample, base, uopt);
    const UniformValidationReport validation =
        validate_uniform_at(cert, family, sample, vopt);
    ok = validation.ok();
    report["base_estimates"] = std::move(base_estimates);
    report["uniform_certificate"] = to_json(cert);
    report["validation"] = to_json(validation);
  } else {
    throw std::invalid_argument("uniformize config: unknown mode '" + mode + "'");
  }

  report["ok"] = ok;
  write_json(ctx, "uniform_report.json", report);
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// follow
// ---------------------------------------------------------------------------

namespace {

PathRule parse_path(const Json& spec) {
  const std::string type = require_key(spec, "type", "path spec").get<std::string>();
  PathRule p;
  if (type == "polynomial") {
    reject_unknown_keys(spec, {"type", "coeffs"}, "path spec");
    p.kind = PathRule::Kind::Polynomial;
    for (const Json& row : require_key(spec, "coeffs", "path spec")) {
      std::vector<double> coeffs;
      for (const Json& c : row) coeffs.push_back(number_from_json(c, "coeffs"));
      p.coeffs.push_back(std::move(coeffs));
    }
    if (p.coeffs.empty()) throw std::invalid_argument("path spec: empty coeffs");
  } else if (type == "trig") {
    reject_unknown_keys(spec, {"type", "amplitude", "frequency", "phase",
                               "offset"},
                        "path spec");
    p.kind = PathRule::Kind::Trig;
    for (const Json& v : require_key(spec, "amplitude", "path spec")) {
      p.amplitude.push_back(number_from_json(v, "amplitude"));
    }
    const size_t d = p.amplitude.size();
    if (d == 0) throw std::invalid_argument("path spec: empty amplitude");
    auto fill = [&](const char* key, std::vector<double>& out, double fallback) {
      if (spec.contains(key)) {
        for (const Json& v : spec[key]) out.push_back(number_from_json(v, key));
        if (out.size() != d) {
          throw std::invalid_argument(std::string("path spec: '") + key +
                                      "' length mismatch");
        }
      } else {
        out.assign(d, fallback);
      }
    };
    fill("frequency", p.frequency, 1.0);
    fill("phase", p.phase, 0.0);
    fill("offset", p.offset, 0.0);
  } else {
    throw std::invalid_argument("path spec: unknown type '" + type + "'");
  }
  return p;
}

}  // namespace

int cmd_follow(const Json& config, const RunContext& ctx) {
  reject_unknown_keys(config,
                      {"f", "F", "p", "horizon", "t_steps", "x0",
                       "trust_radius", "warm_start_kappa", "tol", "solver",
                       "certify"},
                      "follow config");
  ParametricGE ge;
  ge.f = parse_parametric(require_key(config, "f", "config"));
  ge.F = parse_set_valued(require_key(config, "F", "config"));
  ge.p = parse_path(require_key(config, "p", "follow config"));
  ge.horizon = require_number(config, "horizon", "follow config");
  ge.t_steps = config_int(config, "t_steps", 100);

  const Vec x0 = require_vec(config, "x0", "follow config");
  SolveOptions sopt;
  if (config.contains("warm_start_kappa")) {
    sopt.warm_start_kappa =
        number_from_json(config["warm_start_kappa"], "warm_start_kappa");
  }
  if (config.contains("trust_radius")) {
    sopt.trust_radius = number_from_json(config["trust_radius"], "trust_radius");
  } else if (sopt.warm_start_kappa) {
    // the subregularity bound predicts the solution drift scale per step
    const double dt = ge.horizon / ge.t_steps;
    sopt.trust_radius =
        2.0 * *sopt.warm_start_kappa * path_lipschitz_bound(ge.p, ge.horizon) * dt;
  } else {
    throw std::invalid_argument(
        "follow config: 'trust_radius' is required unless a certificate "
        "constant 'warm_start_kappa' sets the default");
  }
  sopt.tol = ctx.tol_override ? *ctx.tol_override
                              : config_number(config, "tol", 1e-8);
  if (config.contains("solver")) {
    const Json& s = config["solver"];
    reject_unknown_keys(s, {"level_steps", "max_depth"}, "solver block");
    sopt.level_steps = config_int(s, "level_steps", sopt.level_steps);
    sopt.max_depth = config_int(s, "max_depth", sopt.max_depth);
  }

  const Trajectory traj = follow(ge, x0, sopt);
  write_text_file(out_path(ctx, "trajectory.csv"), trajectory_csv(traj));

  Json report;
  report["trajectory"] = to_json(traj);
  bool ok = traj.status == Trajectory::Status::Complete;

  if (ok && config.contains("certify")) {
    const Json& c = config["certify"];
    reject_unknown_keys(c,
                        {"a", "b", "r0", "grid_step", "range_step", "pad",
                         "kappa_floor", "center_tol", "validate", "ladders"},
                        "follow certify block");
    TrajectoryCertOptions copt;
    copt.window_a = config_number(c, "a", copt.window_a);
    copt.window_b = config_number(c, "b", copt.window_b);
    copt.r0 = config_number(c, "r0", copt.r0);
    copt.base_grid_step = config_number(c, "grid_step", copt.base_grid_step);
    copt.base_range_step = config_number(c, "range_step", copt.base_range_step);
    copt.pad = config_number(c, "pad", copt.pad);
    copt.kappa_floor = config_number(c, "kappa_floor", copt.kappa_floor);
    copt.center_tol = std::max(config_number(c, "center_tol", copt.center_tol),
                               10.0 * sopt.tol);
    copt.validate = validate_options(c, ctx);
    copt.validate.center_tol = std::max(copt.validate.center_tol, copt.center_tol);
    copt.uniformize = uniformize_options(c, ctx);

    const TrajectoryCertificate cert = certify_trajectory(ge, traj, copt);
    const WarmStartCheck warm =
        check_warm_start_bound(ge, traj, cert.cert.kappa, sopt.tol);
    report["uniform_certificate"] = to_json(cert.cert);
    report["validation"] = to_json(cert.validation);
    Json warm_json;
    warm_json["ok"] = warm.ok;
    warm_json["worst_index"] = warm.worst_index;
    warm_json["worst_step"] = json_number(warm.worst_lhs);
    warm_json["worst_bound"] = json_number(warm.worst_rhs);
    report["warm_start"] = std::move(warm_json);
    write_text_file(out_path(ctx, "records.csv"), records_csv(cert.cert));
    ok = ok && cert.validation.ok() && warm.ok;
  }

  report["ok"] = ok;
  write_json(ctx, "follow_report.json", report);
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// counterexample
// ---------------------------------------------------------------------------

int cmd_counterexample(const Json& config, const RunContext& ctx) {
  reject_unknown_keys(config, {"radii", "steps"}, "counterexample config");
  std::vector<double> radii = {1e-1, 1e-2, 1e-3};
  if (config.contains("radii")) {
    radii.clear();
    for (const Json& r : config["radii"]) {
      radii.push_back(number_from_json(r, "radii"));
    }
  }
  const int steps = config_int(config, "steps", 201);
  const SweepOptions sweep = sweep_options(ctx);

  const SetValuedMap F = lift(paper_f_map());
  const SingleValuedMap g = paper_g_map();
  const SetValuedMap H = lift(paper_h_map());
  Vec zero1 = Vec::Zero(1);

  Json report;

  // paper_f: metrically subregular at (0, 0); the ratio stays ~1.
  bool f_ok = true;
  double f_kappa = 0.0;
  Json f_rows = Json::array();
  for (const double r : radii) {
    const Grid grid = Grid::centered(zero1, r, steps);
    const Grid inverse = Grid::centered(zero1, 2 * r, 2 * steps - 1);
    const ModulusEstimate est =
        empirical_subreg_at(F, zero1, zero1, r, grid, inverse, sweep);
    f_ok = f_ok && est.value >= 0.99 && est.value <= 1.01;
    f_kappa = std::max(f_kappa, est.value);
    Json row;
    row["radius"] = json_number(r);
    row["estimate"] = to_json(est);
    f_rows.push_back(std::move(row));
  }
  report["f_subregularity"] = std::move(f_rows);
  if (f_ok) {
    Json cert;
    cert["kind"] = "subregular_at";
    cert["xbar"] = json_vec(zero1);
    cert["ybar"] = json_vec(zero1);
    cert["kappa"] = json_number(f_kappa * 1.1);
    cert["radius"] = json_number(radii.front());
    report["f_certificate"] = std::move(cert);
  }

  // paper_g: calm at 0 with the empirical modulus ~radius (slope |x|).
  bool g_ok = true;
  Json g_rows = Json::array();
  for (const double r : radii) {
    const Grid grid = Grid::centered(zero1, r, steps);
    const ModulusEstimate est = empirical_calmness(g, zero1, r, grid, sweep);
    g_ok = g_ok && est.value >= 0.99 * r && est.value <= 1.01 * r;
    Json row;
    row["radius"] = json_number(r);
    row["estimate"] = to_json(est);
    g_rows.push_back(std::move(row));
  }
  report["g_calmness"] = std::move(g_rows);

  // paper_h = f + g: the strong-subregularity ratio diverges like 1/|x|.
  const auto profile = divergence_profile(H, zero1, zero1, radii,
                                          DivergenceMode::StrongAt, steps, sweep);
  bool h_ok = true;
  Json growth = Json::array();
  for (size_t i = 0; i + 1 < profile.size(); ++i) {
    const double required = 0.9 * (radii[i] / radii[i + 1]);
    const double factor = profile[i + 1].value / profile[i].value;
    h_ok = h_ok && factor >= required;
    Json row;
    row["factor"] = json_number(factor);
    row["required"] = json_number(required);
    growth.push_back(std::move(row));
  }
  Json h_rows = Json::array();
  for (const ModulusEstimate& est : profile) h_rows.push_back(to_json(est));
  report["h_divergence"] = std::move(h_rows);
  report["h_growth"] = std::move(growth);
  write_text_file(out_path(ctx, "divergence.csv"), divergence_csv(profile));

  report["confirmed"] = Json{{"f_subregular", f_ok},
                             {"g_calm", g_ok},
                             {"h_divergent", h_ok}};
  const bool all = f_ok && g_ok && h_ok;
  report["ok"] = all;
  write_json(ctx, "counterexample.json", report);
  return all ? 0 : 1;
}

}  // namespace subreg
