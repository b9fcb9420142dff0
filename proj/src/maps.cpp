#include "subreg/maps.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace subreg {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double scalar_rule(const SingleValuedRule& rule, double v);

}  // namespace

bool Box::contains(const Vec& x) const {
  if (x.size() != dim()) {
    throw std::invalid_argument("Box::contains: dimension mismatch");
  }
  for (int i = 0; i < dim(); ++i) {
    if (x[i] < sides[i].lo || x[i] > sides[i].hi) return false;
  }
  return true;
}

Box Box::unbounded(int dim) {
  Box b;
  b.sides.assign(dim, Interval{-kInf, kInf});
  return b;
}

// ---------------------------------------------------------------------------
// Single-valued maps
// ---------------------------------------------------------------------------

Vec evaluate(const SingleValuedMap& g, const Vec& x) {
  if (x.size() != g.domain.dim) {
    throw std::invalid_argument("SingleValuedMap: dimension mismatch");
  }
  if (g.domain_box && !g.domain_box->contains(x)) {
    throw std::domain_error("SingleValuedMap: query outside declared domain");
  }
  if (const auto* frozen = std::get_if<RuleFrozenParametric>(&g.rule)) {
    return evaluate(*frozen->map, frozen->t, x);
  }
  if (const auto* c = std::get_if<RuleConstant>(&g.rule)) {
    return c->value;
  }
  Vec y(g.range.dim);
  for (int i = 0; i < g.range.dim; ++i) y[i] = scalar_rule(g.rule, x[i]);
  return y;
}

namespace {

double scalar_rule(const SingleValuedRule& rule, double v) {
  if (std::holds_alternative<RuleIdentity>(rule)) return v;
  if (std::holds_alternative<RuleZero>(rule)) return 0.0;
  if (const auto* s = std::get_if<RuleScale>(&rule)) return s->factor * v;
  if (std::holds_alternative<RuleCubic>(rule)) return v * v * v;
  if (const auto* ls = std::get_if<RuleLinearSin>(&rule)) {
    return ls->linear * v + ls->sin_coeff * std::sin(v);
  }
  if (std::holds_alternative<RulePaperF>(rule)) return v <= 0.0 ? 0.0 : v;
  if (std::holds_alternative<RulePaperG>(rule)) {
    return v <= 0.0 ? v * v : -(v * v);
  }
  if (std::holds_alternative<RulePaperH>(rule)) {
    return v <= 0.0 ? v * v : v - v * v;
  }
  throw std::invalid_argument("scalar_rule: non-componentwise rule");
}

SingleValuedMap catalog(Space space, SingleValuedRule rule) {
  SingleValuedMap g;
  g.domain = space;
  g.range = space;
  g.rule = std::move(rule);
  return g;
}

}  // namespace

bool in_domain(const SingleValuedMap& g, const Vec& x) {
  if (x.size() != g.domain.dim) return false;
  return !g.domain_box || g.domain_box->contains(x);
}

SingleValuedMap identity_map(Space space) { return catalog(space, RuleIdentity{}); }
SingleValuedMap zero_map(Space space) { return catalog(space, RuleZero{}); }
SingleValuedMap scale_map(Space space, double factor) {
  return catalog(space, RuleScale{factor});
}
SingleValuedMap constant_map(Space space, Vec value) {
  require(value.size() == space.dim, "constant_map: dimension mismatch");
  return catalog(space, RuleConstant{std::move(value)});
}
SingleValuedMap linear_sin_map(Space space, double linear, double sin_coeff) {
  return catalog(space, RuleLinearSin{linear, sin_coeff});
}
SingleValuedMap paper_f_map() { return catalog(Space{1, NormKind::Sup}, RulePaperF{}); }
SingleValuedMap paper_g_map() { return catalog(Space{1, NormKind::Sup}, RulePaperG{}); }
SingleValuedMap paper_h_map() { return catalog(Space{1, NormKind::Sup}, RulePaperH{}); }

// ---------------------------------------------------------------------------
// Parametric maps
// ---------------------------------------------------------------------------

namespace {

void add_coupling(const ParametricSingleValuedMap& f, const Vec& t_base,
                  const Vec& x, Vec& out) {
  switch (f.coupling) {
    case CouplingKind::None:
      return;
    case CouplingKind::AdditiveT:
      out.array() += t_base[0];
      return;
    case CouplingKind::ScaleX: {
      const double w = f.coupling_coeff * t_base[0];
      out += w * x;
      return;
    }
    case CouplingKind::SinX: {
      const double w = f.coupling_coeff * t_base[0];
      for (Eigen::Index i = 0; i < out.size(); ++i) out[i] += w * std::sin(x[i]);
      return;
    }
  }
}

Vec coupling_difference(const ParametricSingleValuedMap& f, const Vec& s_base,
                        const Vec& t_base, const Vec& x) {
  Vec d = Vec::Zero(f.range.dim);
  switch (f.coupling) {
    case CouplingKind::None:
      return d;
    case CouplingKind::AdditiveT:
      d.array() += s_base[0] - t_base[0];
      return d;
    case CouplingKind::ScaleX: {
      const double w = f.coupling_coeff * (s_base[0] - t_base[0]);
      d = w * x;
      return d;
    }
    case CouplingKind::SinX: {
      const double w = f.coupling_coeff * (s_base[0] - t_base[0]);
      for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = w * std::sin(x[i]);
      return d;
    }
  }
  return d;
}

int packed_base_dim(const ParametricSingleValuedMap& f) {
  return f.packed_offset ? f.parameter_space.dim - f.range.dim
                         : f.parameter_space.dim;
}

}  // namespace

Vec evaluate(const ParametricSingleValuedMap& f, const Vec& t, const Vec& x) {
  if (t.size() != f.parameter_space.dim) {
    throw std::invalid_argument("ParametricSingleValuedMap: parameter dimension");
  }
  const int k = packed_base_dim(f);
  Vec out = evaluate(f.base, x);
  if (f.coupling != CouplingKind::None) {
    add_coupling(f, t.head(k), x, out);
  }
  if (f.packed_offset) out -= t.tail(f.range.dim);
  return out;
}

Vec parameter_difference(const ParametricSingleValuedMap& f, const Vec& s,
                         const Vec& t, const Vec& x) {
  if (s.size() != f.parameter_space.dim || t.size() != f.parameter_space.dim) {
    throw std::invalid_argument("parameter_difference: parameter dimension");
  }
  const int k = packed_base_dim(f);
  Vec d = coupling_difference(f, s.head(k), t.head(k), x);
  if (f.packed_offset) {
    d -= (s.tail(f.range.dim) - t.tail(f.range.dim)).eval();
  }
  return d;
}

SingleValuedMap freeze(const ParametricSingleValuedMap& f, const Vec& t) {
  if (t.size() != f.parameter_space.dim) {
    throw std::invalid_argument("freeze: parameter dimension");
  }
  SingleValuedMap g;
  g.domain = f.domain;
  g.range = f.range;
  g.rule = RuleFrozenParametric{
      std::make_shared<const ParametricSingleValuedMap>(f), t};
  g.domain_box = f.base.domain_box;
  return g;
}

ParametricSingleValuedMap pack_offset(const ParametricSingleValuedMap& f) {
  require(!f.packed_offset, "pack_offset: already packed");
  ParametricSingleValuedMap packed = f;
  packed.parameter_space =
      Space{f.parameter_space.dim + f.range.dim, NormKind::Sup};
  packed.packed_offset = true;
  return packed;
}

ParametricSingleValuedMap parametric_map(Space parameter_space,
                                         SingleValuedMap base,
                                         CouplingKind coupling,
                                         double coupling_coeff) {
  ParametricSingleValuedMap f;
  f.parameter_space = parameter_space;
  f.domain = base.domain;
  f.range = base.range;
  f.base = std::move(base);
  f.coupling = coupling;
  f.coupling_coeff = coupling_coeff;
  return f;
}

// ---------------------------------------------------------------------------
// Set-valued maps
// ---------------------------------------------------------------------------

SetValuedMap::SetValuedMap(std::shared_ptr<const detail::MapNode> node,
                           std::optional<Box> domain_box)
    : node_(std::move(node)), domain_box_(std::move(domain_box)) {}

namespace {

using detail::GraphSampleNode;
using detail::LiftNode;
using detail::MapNode;
using detail::NormalConeNode;
using detail::RestrictNode;
using detail::ScaleRangeNode;
using detail::SumNode;

SetValuedMap wrap(MapNode node) {
  return SetValuedMap(std::make_shared<const MapNode>(std::move(node)),
                      std::nullopt);
}

}  // namespace

Space SetValuedMap::domain_space() const {
  const auto& b = node().body;
  if (const auto* n = std::get_if<LiftNode>(&b)) return n->g.domain;
  if (const auto* n = std::get_if<NormalConeNode>(&b)) return n->space;
  if (const auto* n = std::get_if<GraphSampleNode>(&b)) return n->domain;
  if (const auto* n = std::get_if<SumNode>(&b)) return n->inner.domain_space();
  if (const auto* n = std::get_if<ScaleRangeNode>(&b)) return n->inner.domain_space();
  return std::get<RestrictNode>(b).inner.domain_space();
}

Space SetValuedMap::range_space() const {
  const auto& b = node().body;
  if (const auto* n = std::get_if<LiftNode>(&b)) return n->g.range;
  if (const auto* n = std::get_if<NormalConeNode>(&b)) return n->space;
  if (const auto* n = std::get_if<GraphSampleNode>(&b)) return n->range;
  if (const auto* n = std::get_if<SumNode>(&b)) return n->inner.range_space();
  if (const auto* n = std::get_if<ScaleRangeNode>(&b)) return n->inner.range_space();
  return std::get<RestrictNode>(b).inner.range_space();
}

SetValuedMap SetValuedMap::with_domain_box(Box box) const {
  require(box.dim() == domain_space().dim,
          "with_domain_box: dimension mismatch");
  SetValuedMap copy = *this;
  copy.domain_box_ = std::move(box);
  return copy;
}

SetValuedMap lift(SingleValuedMap g) { return wrap(MapNode{LiftNode{std::move(g)}}); }

SetValuedMap normal_cone_box(Box box) {
  require(box.dim() >= 1, "normal_cone_box: empty box");
  for (const Interval& side : box.sides) {
    require(std::isfinite(side.lo) && std::isfinite(side.hi) && side.lo < side.hi,
            "normal_cone_box: sides must be finite with nonempty interior");
  }
  const Space space{box.dim(), NormKind::Sup};
  return wrap(MapNode{NormalConeNode{std::move(box), space}});
}

SetValuedMap graph_sample(std::vector<std::pair<Vec, Vec>> pairs) {
  require(!pairs.empty(), "graph_sample: need at least one pair");
  const Space dom{static_cast<int>(pairs[0].first.size()), NormKind::Sup};
  const Space ran{static_cast<int>(pairs[0].second.size()), NormKind::Sup};
  for (const auto& [x, y] : pairs) {
    require(x.size() == dom.dim && y.size() == ran.dim,
            "graph_sample: inconsistent dimensions");
  }
  return wrap(MapNode{GraphSampleNode{std::move(pairs), dom, ran}});
}

SetValuedMap sum(SingleValuedMap g, SetValuedMap F) {
  require(g.domain == F.domain_space() && g.range == F.range_space(),
          "sum: space mismatch between g and F");
  return wrap(MapNode{SumNode{std::move(g), std::move(F)}});
}

SetValuedMap scale_range(double factor, SetValuedMap F) {
  require(factor > 0, "scale_range: factor must be > 0");
  return wrap(MapNode{ScaleRangeNode{factor, std::move(F)}});
}

SetValuedMap restrict_range(SetValuedMap F, Vec center, double radius) {
  require(center.size() == F.range_space().dim,
          "restrict_range: dimension mismatch");
  require(radius >= 0, "restrict_range: negative radius");
  return wrap(MapNode{RestrictNode{std::move(F), std::move(center), radius}});
}

namespace {

void check_query(const SetValuedMap& F, const Vec& x) {
  if (x.size() != F.domain_space().dim) {
    throw std::invalid_argument("SetValuedMap: domain dimension mismatch");
  }
  if (F.domain_box() && !F.domain_box()->contains(x)) {
    throw std::domain_error("SetValuedMap: query outside declared domain");
  }
}

// Per-coordinate normal-cone interval of a box side at coordinate v.
// Returns false when v lies outside the side (empty cone).
bool cone_side(const Interval& side, double v, Interval& out) {
  if (v < side.lo || v > side.hi) return false;
  const bool at_lo = v == side.lo;
  const bool at_hi = v == side.hi;
  if (at_lo && at_hi) {
    out = {-kInf, kInf};  // unreachable: sides have nonempty interior
  } else if (at_lo) {
    out = {-kInf, 0.0};
  } else if (at_hi) {
    out = {0.0, kInf};
  } else {
    out = {0.0, 0.0};
  }
  return true;
}

double combine_residuals(const Space& range, const Vec& residuals) {
  return norm(range, residuals);
}

struct BallConstraint {
  Vec center;
  double radius;
};

// Core distance recursion. Sum nodes shift the query and every window
// center; ScaleRange divides them; Restrict appends a window. Leaves then
// evaluate exactly, so restricted distances are pointwise >= unrestricted
// ones with no rounding asymmetry.
double dist_impl(const SetValuedMap& F, const Vec& x, const Vec& y,
                 std::vector<BallConstraint> windows) {
  check_query(F, x);
  const Space range = F.range_space();
  const auto& body = F.node().body;

  if (const auto* n = std::get_if<LiftNode>(&body)) {
    const Vec v = evaluate(n->g, x);
    for (const BallConstraint& w : windows) {
      if (distance(range, v, w.center) > w.radius) return kInf;
    }
    return distance(range, y, v);
  }

  if (const auto* n = std::get_if<NormalConeNode>(&body)) {
    const int d = n->box.dim();
    if (!windows.empty() && d > 1 && range.norm != NormKind::Sup) {
      throw std::invalid_argument(
          "dist_to_restricted_image: interval-structured images need a "
          "sup-norm window or dimension 1");
    }
    Vec residuals(d);
    for (int i = 0; i < d; ++i) {
      Interval cone;
      if (!cone_side(n->box.sides[i], x[i], cone)) return kInf;
      for (const BallConstraint& w : windows) {
        cone.lo = std::max(cone.lo, w.center[i] - w.radius);
        cone.hi = std::min(cone.hi, w.center[i] + w.radius);
        if (!(cone.lo <= cone.hi)) return kInf;
      }
      residuals[i] = interval_distance(y[i], cone);
    }
    return combine_residuals(range, residuals);
  }

  if (const auto* n = std::get_if<GraphSampleNode>(&body)) {
    double best = kInf;
    for (const auto& [gx, gy] : n->pairs) {
      if (gx != x) continue;
      bool inside = true;
      for (const BallConstraint& w : windows) {
        if (distance(range, gy, w.center) > w.radius) {
          inside = false;
          break;
        }
      }
      if (inside) best = std::min(best, distance(range, y, gy));
    }
    return best;
  }

  if (const auto* n = std::get_if<SumNode>(&body)) {
    const Vec shift = evaluate(n->g, x);
    for (BallConstraint& w : windows) w.center -= shift;
    return dist_impl(n->inner, x, y - shift, std::move(windows));
  }

  if (const auto* n = std::get_if<ScaleRangeNode>(&body)) {
    const double c = n->factor;
    for (BallConstraint& w : windows) {
      w.center /= c;
      w.radius /= c;
    }
    const double inner = dist_impl(n->inner, x, y / c, std::move(windows));
    return c * inner;
  }

  const auto& r = std::get<RestrictNode>(body);
  windows.push_back(BallConstraint{r.center, r.radius});
  return dist_impl(r.inner, x, y, std::move(windows));
}

}  // namespace

bool in_domain(const SetValuedMap& F, const Vec& x) {
  if (x.size() != F.domain_space().dim) return false;
  if (F.domain_box() && !F.domain_box()->contains(x)) return false;
  const auto& body = F.node().body;
  if (const auto* n = std::get_if<LiftNode>(&body)) return in_domain(n->g, x);
  if (const auto* n = std::get_if<SumNode>(&body)) {
    return in_domain(n->g, x) && in_domain(n->inner, x);
  }
  if (const auto* n = std::get_if<ScaleRangeNode>(&body)) {
    return in_domain(n->inner, x);
  }
  if (const auto* n = std::get_if<RestrictNode>(&body)) {
    return in_domain(n->inner, x);
  }
  return true;
}

ImageSet evaluate(const SetValuedMap& F, const Vec& x) {
  check_query(F, x);
  const auto& body = F.node().body;

  if (const auto* n = std::get_if<LiftNode>(&body)) {
    return ImageSet::point(evaluate(n->g, x));
  }

  if (const auto* n = std::get_if<NormalConeNode>(&body)) {
    const int d = n->box.dim();
    std::vector<Interval> cones(d);
    bool all_singletons = true;
    for (int i = 0; i < d; ++i) {
      if (!cone_side(n->box.sides[i], x[i], cones[i])) return ImageSet::empty();
      all_singletons = all_singletons && cones[i].lo == cones[i].hi;
    }
    if (d == 1) return ImageSet::intervals({cones[0]});
    if (all_singletons) {
      Vec y(d);
      for (int i = 0; i < d; ++i) y[i] = cones[i].lo;
      return ImageSet::point(std::move(y));
    }
    // A face cone in dimension > 1 is a product with a ray; that exceeds the
    // ImageSet representation, though distance queries handle it exactly.
    throw std::invalid_argument(
        "evaluate: normal-cone face image not representable beyond 1-D");
  }

  if (const auto* n = std::get_if<GraphSampleNode>(&body)) {
    std::vector<Vec> ys;
    for (const auto& [gx, gy] : n->pairs) {
      if (gx == x) ys.push_back(gy);
    }
    return ImageSet::points(std::move(ys));
  }

  if (const auto* n = std::get_if<SumNode>(&body)) {
    return evaluate(n->inner, x).translated(evaluate(n->g, x));
  }

  if (const auto* n = std::get_if<ScaleRangeNode>(&body)) {
    return evaluate(n->inner, x).scaled(n->factor);
  }

  const auto& r = std::get<RestrictNode>(body);
  return evaluate(r.inner, x).intersect_ball(r.center, r.radius,
                                             r.inner.range_space());
}

double dist_to_image(const SetValuedMap& F, const Vec& x, const Vec& y) {
  if (y.size() != F.range_space().dim) {
    throw std::invalid_argument("dist_to_image: range dimension mismatch");
  }
  return dist_impl(F, x, y, {});
}

double dist_to_restricted_image(const SetValuedMap& F, const Vec& x,
                                const Vec& y, const Vec& ball_center,
                                double ball_radius) {
  if (y.size() != F.range_space().dim ||
      ball_center.size() != F.range_space().dim) {
    throw std::invalid_argument(
        "dist_to_restricted_image: range dimension mismatch");
  }
  return dist_impl(F, x, y, {BallConstraint{ball_center, ball_radius}});
}

double inverse_dist(const SetValuedMap& F, const Vec& y, const Vec& x,
                    const Grid& search_grid, double membership_tol) {
  const double tol =
      membership_tol >= 0 ? membership_tol : 0.5 * search_grid.max_step();
  const Space domain = F.domain_space();
  double best = kInf;
  const long long n = search_grid.size();
  for (long long i = 0; i < n; ++i) {
    const Vec u = search_grid.point(i);
    if (!in_domain(F, u)) continue;
    if (dist_to_image(F, u, y) <= tol) {
      best = std::min(best, distance(domain, u, x));
    }
  }
  return best;
}

std::vector<GraphPoint> sample_graph(const SetValuedMap& F,
                                     const Grid& domain_grid,
                                     const Vec& x_center, double a,
                                     const Vec& y_center, double b,
                                     double range_step) {
  const Space domain = F.domain_space();
  const Space range = F.range_space();
  const Ball x_window{domain, x_center, a, false};
  std::vector<GraphPoint> out;
  const long long n = domain_grid.size();
  for (long long i = 0; i < n; ++i) {
    Vec x = domain_grid.point(i);
    if (!x_window.contains(x) || !in_domain(F, x)) continue;
    const ImageSet image = evaluate(F, x);
    if (image.is_empty()) continue;
    for (Vec& y : image.enumerate(y_center, b, range_step, range)) {
      out.push_back(GraphPoint{x, std::move(y)});
    }
  }
  return out;
}

std::vector<std::vector<double>> breakpoints(const SetValuedMap& F) {
  const int d = F.domain_space().dim;
  std::vector<std::set<double>> collected(d);

  const auto& body = F.node().body;
  if (const auto* n = std::get_if<NormalConeNode>(&body)) {
    for (int i = 0; i < d; ++i) {
      collected[i].insert(n->box.sides[i].lo);
      collected[i].insert(n->box.sides[i].hi);
    }
  } else if (const auto* n = std::get_if<GraphSampleNode>(&body)) {
    for (const auto& [gx, gy] : n->pairs) {
      for (int i = 0; i < d; ++i) collected[i].insert(gx[i]);
    }
  } else if (const auto* n = std::get_if<SumNode>(&body)) {
    auto inner = breakpoints(n->inner);
    for (int i = 0; i < d; ++i) collected[i].insert(inner[i].begin(), inner[i].end());
  } else if (const auto* n = std::get_if<ScaleRangeNode>(&body)) {
    auto inner = breakpoints(n->inner);
    for (int i = 0; i < d; ++i) collected[i].insert(inner[i].begin(), inner[i].end());
  } else if (const auto* n = std::get_if<RestrictNode>(&body)) {
    auto inner = breakpoints(n->inner);
    for (int i = 0; i < d; ++i) collected[i].insert(inner[i].begin(), inner[i].end());
  }

  std::vector<std::vector<double>> out(d);
  for (int i = 0; i < d; ++i) out[i].assign(collected[i].begin(), collected[i].end());
  return out;
}

}  // namespace subreg
