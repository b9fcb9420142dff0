#include "subreg/map_io.hpp"

#include <stdexcept>
#include <string>

namespace subreg {

namespace {

Json box_to_json(const Box& box) {
  Json arr = Json::array();
  for (const Interval& side : box.sides) {
    arr.push_back(Json::array({json_number(side.lo), json_number(side.hi)}));
  }
  return arr;
}

Box box_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) {
    throw std::invalid_argument(std::string(what) +
                                ": expected an array of [lo, hi] pairs");
  }
  Box box;
  for (const Json& side : j) {
    if (!side.is_array() || side.size() != 2) {
      throw std::invalid_argument(std::string(what) + ": malformed box side");
    }
    box.sides.push_back(Interval{number_from_json(side[0], what),
                                 number_from_json(side[1], what)});
  }
  return box;
}

std::string require_type(const Json& spec, const char* what) {
  if (!spec.is_object() || !spec.contains("type") || !spec["type"].is_string()) {
    throw std::invalid_argument(std::string(what) +
                                ": map spec needs a 'type' string");
  }
  return spec["type"].get<std::string>();
}

Space read_space(const Json& spec, int default_dim) {
  Space s;
  s.dim = spec.contains("dim") ? spec["dim"].get<int>() : default_dim;
  if (s.dim < 1) throw std::invalid_argument("map spec: dim must be >= 1");
  if (spec.contains("norm")) {
    s.norm = norm_from_string(spec["norm"].get<std::string>());
  }
  return s;
}

void apply_domain(SingleValuedMap& g, const Json& spec) {
  if (!spec.contains("domain")) return;
  Box box = box_from_json(spec["domain"], "single-valued map domain");
  if (box.dim() != g.domain.dim) {
    throw std::invalid_argument("map spec: domain box dimension mismatch");
  }
  g.domain_box = std::move(box);
}

bool is_single_valued_type(const std::string& type) {
  return type == "identity" || type == "zero" || type == "scale" ||
         type == "constant" || type == "cubic" || type == "linear_sin" ||
         type == "paper_f" || type == "paper_g" || type == "paper_h" ||
         type == "frozen";
}

}  // namespace

SingleValuedMap parse_single_valued(const Json& spec) {
  const std::string type = require_type(spec, "single-valued map");

  if (type == "frozen") {
    reject_unknown_keys(spec, {"type", "f", "t"}, "frozen map spec");
    if (!spec.contains("f") || !spec.contains("t")) {
      throw std::invalid_argument("frozen map spec: needs 'f' and 't'");
    }
    return freeze(parse_parametric(spec["f"]),
                  vec_from_json(spec["t"], "frozen map parameter"));
  }

  SingleValuedMap g;
  if (type == "identity") {
    reject_unknown_keys(spec, {"type", "dim", "norm", "domain"}, "identity spec");
    g = identity_map(read_space(spec, 1));
  } else if (type == "zero") {
    reject_unknown_keys(spec, {"type", "dim", "norm", "domain"}, "zero spec");
    g = zero_map(read_space(spec, 1));
  } else if (type == "scale") {
    reject_unknown_keys(spec, {"type", "factor", "dim", "norm", "domain"},
                        "scale spec");
    if (!spec.contains("factor")) {
      throw std::invalid_argument("scale spec: needs 'factor'");
    }
    g = scale_map(read_space(spec, 1), number_from_json(spec["factor"], "factor"));
  } else if (type == "constant") {
    reject_unknown_keys(spec, {"type", "value", "dim", "norm", "domain"},
                        "constant spec");
    if (!spec.contains("value")) {
      throw std::invalid_argument("constant spec: needs 'value'");
    }
    Vec value = vec_from_json(spec["value"], "constant value");
    const Space space = read_space(spec, static_cast<int>(value.size()));
    g = constant_map(space, std::move(value));
  } else if (type == "cubic") {
    reject_unknown_keys(spec, {"type", "dim", "norm", "domain"}, "cubic spec");
    g = SingleValuedMap{read_space(spec, 1), read_space(spec, 1), RuleCubic{}, {}};
  } else if (type == "linear_sin") {
    reject_unknown_keys(spec, {"type", "linear", "sin_coeff", "dim", "norm",
                               "domain"},
                        "linear_sin spec");
    const double a = spec.contains("linear")
                         ? number_from_json(spec["linear"], "linear")
                         : 1.0;
    const double c = spec.contains("sin_coeff")
                         ? number_from_json(spec["sin_coeff"], "sin_coeff")
                         : 0.0;
    g = linear_sin_map(read_space(spec, 1), a, c);
  } else if (type == "paper_f" || type == "paper_g" || type == "paper_h") {
    reject_unknown_keys(spec, {"type", "dim", "norm", "domain"}, "paper map spec");
    const Space space = read_space(spec, 1);
    SingleValuedRule rule;
    if (type == "paper_f") rule = RulePaperF{};
    if (type == "paper_g") rule = RulePaperG{};
    if (type == "paper_h") rule = RulePaperH{};
    g = SingleValuedMap{space, space, rule, {}};
  } else {
    throw std::invalid_argument("unknown single-valued map type '" + type + "'");
  }
  apply_domain(g, spec);
  return g;
}

Json serialize_map(const SingleValuedMap& g) {
  Json j;
  if (const auto* frozen = std::get_if<RuleFrozenParametric>(&g.rule)) {
    j["type"] = "frozen";
    j["f"] = serialize_map(*frozen->map);
    j["t"] = json_vec(frozen->t);
    return j;
  }
  if (std::holds_alternative<RuleIdentity>(g.rule)) j["type"] = "identity";
  if (std::holds_alternative<RuleZero>(g.rule)) j["type"] = "zero";
  if (const auto* s = std::get_if<RuleScale>(&g.rule)) {
    j["type"] = "scale";
    j["factor"] = json_number(s->factor);
  }
  if (const auto* c = std::get_if<RuleConstant>(&g.rule)) {
    j["type"] = "constant";
    j["value"] = json_vec(c->value);
  }
  if (std::holds_alternative<RuleCubic>(g.rule)) j["type"] = "cubic";
  if (const auto* ls = std::get_if<RuleLinearSin>(&g.rule)) {
    j["type"] = "linear_sin";
    j["linear"] = json_number(ls->linear);
    j["sin_coeff"] = json_number(ls->sin_coeff);
  }
  if (std::holds_alternative<RulePaperF>(g.rule)) j["type"] = "paper_f";
  if (std::holds_alternative<RulePaperG>(g.rule)) j["type"] = "paper_g";
  if (std::holds_alternative<RulePaperH>(g.rule)) j["type"] = "paper_h";
  j["dim"] = g.domain.dim;
  j["norm"] = norm_to_string(g.domain.norm);
  if (g.domain_box) j["domain"] = box_to_json(*g.domain_box);
  return j;
}

ParametricSingleValuedMap parse_parametric(const Json& spec) {
  const std::string type = require_type(spec, "parametric map");
  if (type != "parametric") {
    throw std::invalid_argument("parametric map spec: type must be 'parametric'");
  }
  reject_unknown_keys(spec,
                      {"type", "base", "coupling", "coefficient",
                       "parameter_dim", "parameter_norm", "packed_offset"},
                      "parametric spec");
  if (!spec.contains("base")) {
    throw std::invalid_argument("parametric spec: needs 'base'");
  }

  ParametricSingleValuedMap f;
  f.base = parse_single_valued(spec["base"]);
  f.domain = f.base.domain;
  f.range = f.base.range;

  std::string coupling = "none";
  if (spec.contains("coupling")) coupling = spec["coupling"].get<std::string>();
  if (coupling == "none") f.coupling = CouplingKind::None;
  else if (coupling == "additive_t") f.coupling = CouplingKind::AdditiveT;
  else if (coupling == "scale_x") f.coupling = CouplingKind::ScaleX;
  else if (coupling == "sin_x") f.coupling = CouplingKind::SinX;
  else throw std::invalid_argument("parametric spec: unknown coupling '" + coupling + "'");

  f.coupling_coeff = spec.contains("coefficient")
                         ? number_from_json(spec["coefficient"], "coefficient")
                         : 0.0;
  f.parameter_space.dim =
      spec.contains("parameter_dim") ? spec["parameter_dim"].get<int>() : 1;
  if (f.parameter_space.dim < 1) {
    throw std::invalid_argument("parametric spec: parameter_dim must be >= 1");
  }
  if (spec.contains("parameter_norm")) {
    f.parameter_space.norm =
        norm_from_string(spec["parameter_norm"].get<std::string>());
  }
  f.packed_offset =
      spec.contains("packed_offset") && spec["packed_offset"].get<bool>();
  if (f.packed_offset && f.parameter_space.dim <= f.range.dim) {
    throw std::invalid_argument(
        "parametric spec: packed parameter_dim must exceed the range dimension");
  }
  return f;
}

Json serialize_map(const ParametricSingleValuedMap& f) {
  Json j;
  j["type"] = "parametric";
  j["base"] = serialize_map(f.base);
  switch (f.coupling) {
    case CouplingKind::None: j["coupling"] = "none"; break;
    case CouplingKind::AdditiveT: j["coupling"] = "additive_t"; break;
    case CouplingKind::ScaleX: j["coupling"] = "scale_x"; break;
    case CouplingKind::SinX: j["coupling"] = "sin_x"; break;
  }
  j["coefficient"] = json_number(f.coupling_coeff);
  j["parameter_dim"] = f.parameter_space.dim;
  j["parameter_norm"] = norm_to_string(f.parameter_space.norm);
  j["packed_offset"] = f.packed_offset;
  return j;
}

SetValuedMap parse_set_valued(const Json& spec) {
  const std::string type = require_type(spec, "set-valued map");

  if (is_single_valued_type(type)) {
    return lift(parse_single_valued(spec));  // catalog sugar
  }

  SetValuedMap F;
  if (type == "lift") {
    reject_unknown_keys(spec, {"type", "g", "domain"}, "lift spec");
    if (!spec.contains("g")) throw std::invalid_argument("lift spec: needs 'g'");
    F = lift(parse_single_valued(spec["g"]));
  } else if (type == "normal_cone_box") {
    reject_unknown_keys(spec, {"type", "box", "domain"}, "normal_cone_box spec");
    if (!spec.contains("box")) {
      throw std::invalid_argument("normal_cone_box spec: needs 'box'");
    }
    F = normal_cone_box(box_from_json(spec["box"], "normal_cone_box"));
  } else if (type == "graph_sample") {
    reject_unknown_keys(spec, {"type", "pairs", "domain"}, "graph_sample spec");
    if (!spec.contains("pairs") || !spec["pairs"].is_array()) {
      throw std::invalid_argument("graph_sample spec: needs 'pairs' array");
    }
    std::vector<std::pair<Vec, Vec>> pairs;
    for (const Json& pair : spec["pairs"]) {
      if (!pair.is_array() || pair.size() != 2) {
        throw std::invalid_argument("graph_sample spec: malformed pair");
      }
      pairs.emplace_back(vec_from_json(pair[0], "graph_sample x"),
                         vec_from_json(pair[1], "graph_sample y"));
    }
    F = graph_sample(std::move(pairs));
  } else if (type == "sum") {
    reject_unknown_keys(spec, {"type", "g", "F", "domain"}, "sum spec");
    if (!spec.contains("g") || !spec.contains("F")) {
      throw std::invalid_argument("sum spec: needs 'g' and 'F'");
    }
    F = sum(parse_single_valued(spec["g"]), parse_set_valued(spec["F"]));
  } else if (type == "scale_range") {
    reject_unknown_keys(spec, {"type", "factor", "F", "domain"},
                        "scale_range spec");
    if (!spec.contains("factor") || !spec.contains("F")) {
      throw std::invalid_argument("scale_range spec: needs 'factor' and 'F'");
    }
    F = scale_range(number_from_json(spec["factor"], "factor"),
                    parse_set_valued(spec["F"]));
  } else if (type == "restrict") {
    reject_unknown_keys(spec, {"type", "F", "center", "radius", "domain"},
                        "restrict spec");
    if (!spec.contains("F") || !spec.contains("center") ||
        !spec.contains("radius")) {
      throw std::invalid_argument(
          "restrict spec: needs 'F', 'center' and 'radius'");
    }
    F = restrict_range(parse_set_valued(spec["F"]),
                       vec_from_json(spec["center"], "restrict center"),
                       number_from_json(spec["radius"], "restrict radius"));
  } else {
    throw std::invalid_argument("unknown set-valued map type '" + type + "'");
  }

  if (spec.contains("domain")) {
    F = F.with_domain_box(box_from_json(spec["domain"], "set-valued domain"));
  }
  return F;
}

Json serialize_map(const SetValuedMap& F) {
  Json j;
  const auto& body = F.node().body;
  if (const auto* n = std::get_if<detail::LiftNode>(&body)) {
    j["type"] = "lift";
    j["g"] = serialize_map(n->g);
  } else if (const auto* n = std::get_if<detail::NormalConeNode>(&body)) {
    j["type"] = "normal_cone_box";
    j["box"] = box_to_json(n->box);
  } else if (const auto* n = std::get_if<detail::GraphSampleNode>(&body)) {
    j["type"] = "graph_sample";
    Json pairs = Json::array();
    for (const auto& [x, y] : n->pairs) {
      pairs.push_back(Json::array({json_vec(x), json_vec(y)}));
    }
    j["pairs"] = std::move(pairs);
  } else if (const auto* n = std::get_if<detail::SumNode>(&body)) {
    j["type"] = "sum";
    j["g"] = serialize_map(n->g);
    j["F"] = serialize_map(n->inner);
  } else if (const auto* n = std::get_if<detail::ScaleRangeNode>(&body)) {
    j["type"] = "scale_range";
    j["factor"] = json_number(n->factor);
    j["F"] = serialize_map(n->inner);
  } else if (const auto* n = std::get_if<detail::RestrictNode>(&body)) {
    j["type"] = "restrict";
    j["F"] = serialize_map(n->inner);
    j["center"] = json_vec(n->center);
    j["radius"] = json_number(n->radius);
  }
  if (F.domain_box()) j["domain"] = box_to_json(*F.domain_box());
  return j;
}

}  // namespace subreg
