#pragma once

#include "subreg/image_set.hpp"
#include "subreg/space.hpp"

#include <memory>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

namespace subreg {

/// Axis-aligned box with finite or infinite sides; used for declared domains
/// and as the constraint set of the normal-cone catalog map.
struct Box {
  std::vector<Interval> sides;

  int dim() const { return static_cast<int>(sides.size()); }
  bool contains(const Vec& x) const;
  static Box unbounded(int dim);
};

class ParametricSingleValuedMap;

// Catalog rules for single-valued maps. All componentwise.
struct RuleIdentity {};
struct RuleZero {};
struct RuleScale {
  double factor = 1.0;
};
struct RuleConstant {
  Vec value;
};
struct RuleCubic {};  // x^3
struct RuleLinearSin {
  double linear = 1.0;     // a in a*x + c*sin(x)
  double sin_coeff = 0.0;  // c
};
struct RulePaperF {};  // 0 for x <= 0, x for x > 0
struct RulePaperG {};  // x^2 for x <= 0, -x^2 for x > 0
struct RulePaperH {};  // x^2 for x <= 0, x - x^2 for x > 0
struct RuleFrozenParametric {
  std::shared_ptr<const ParametricSingleValuedMap> map;
  Vec t;
};

using SingleValuedRule =
    std::variant<RuleIdentity, RuleZero, RuleScale, RuleConstant, RuleCubic,
                 RuleLinearSin, RulePaperF, RulePaperG, RulePaperH,
                 RuleFrozenParametric>;

/// Deterministic single-valued map g: X -> Y given by a catalog rule,
/// total on its declared domain box.
struct SingleValuedMap {
  Space domain{1, NormKind::Sup};
  Space range{1, NormKind::Sup};
  SingleValuedRule rule = RuleIdentity{};
  std::optional<Box> domain_box;  // unbounded when absent
};

Vec evaluate(const SingleValuedMap& g, const Vec& x);
bool in_domain(const SingleValuedMap& g, const Vec& x);

SingleValuedMap identity_map(Space space);
SingleValuedMap zero_map(Space space);
SingleValuedMap scale_map(Space space, double factor);
SingleValuedMap constant_map(Space space, Vec value);
SingleValuedMap linear_sin_map(Space space, double linear, double sin_coeff);
SingleValuedMap paper_f_map();
SingleValuedMap paper_g_map();
SingleValuedMap paper_h_map();

/// How the parameter enters f(t, x) = base(x) + coupling(t, x):
///   None:      f(t,x) = base(x)
///   AdditiveT: f(t,x) = base(x) + t[0] * 1
///   ScaleX:    f(t,x) = base(x) + c * t[0] * x
///   SinX:      f(t,x) = base(x) + c * t[0] * sin(x)
enum class CouplingKind { None, AdditiveT, ScaleX, SinX };

/// Continuous parametric map f: P x X -> Y. When packed_offset is set the
/// parameter is the pair (t, y) in R^{k+m} and the map evaluates
/// f((t,y), x) = base(x) + coupling(t, x) - y; this is the parameter
/// repacking used to certify trajectories.
class ParametricSingleValuedMap {
 public:
  Space parameter_space{1, NormKind::Sup};
  Space domain{1, NormKind::Sup};
  Space range{1, NormKind::Sup};
  SingleValuedMap base;
  CouplingKind coupling = CouplingKind::None;
  double coupling_coeff = 0.0;
  bool packed_offset = false;
};

Vec evaluate(const ParametricSingleValuedMap& f, const Vec& t, const Vec& x);

/// f(s, x) - f(t, x), computed structurally so that parameter-independent
/// parts cancel algebraically rather than by floating-point subtraction.
Vec parameter_difference(const ParametricSingleValuedMap& f, const Vec& s,
                         const Vec& t, const Vec& x);

/// Freeze the parameter: x -> f(t, x) as a SingleValuedMap.
SingleValuedMap freeze(const ParametricSingleValuedMap& f, const Vec& t);

/// Repack the parameter as (t, y) with f'((t,y), x) = f(t, x) - y.
ParametricSingleValuedMap pack_offset(const ParametricSingleValuedMap& f);

ParametricSingleValuedMap parametric_map(Space parameter_space,
                                         SingleValuedMap base,
                                         CouplingKind coupling,
                                         double coupling_coeff);

namespace detail {
struct MapNode;
}

/// Evaluable set-valued mapping F: R^n =| R^m. Immutable after construction;
/// evaluation is pure and safe to run concurrently.
class SetValuedMap {
 public:
  SetValuedMap() = default;
  SetValuedMap(std::shared_ptr<const detail::MapNode> node,
               std::optional<Box> domain_box);

  const detail::MapNode& node() const { return *node_; }
  const std::optional<Box>& domain_box() const { return domain_box_; }
  Space domain_space() const;
  Space range_space() const;
  SetValuedMap with_domain_box(Box box) const;

 private:
  std::shared_ptr<const detail::MapNode> node_;
  std::optional<Box> domain_box_;
};

namespace detail {

struct LiftNode {
  SingleValuedMap g;
};
struct NormalConeNode {
  Box box;  // finite sides, nonempty interior
  Space space;
};
struct GraphSampleNode {
  std::vector<std::pair<Vec, Vec>> pairs;
  Space domain;
  Space range;
};
struct SumNode {
  SingleValuedMap g;
  SetValuedMap inner;
};
struct ScaleRangeNode {
  double factor;  // > 0
  SetValuedMap inner;
};
struct RestrictNode {
  SetValuedMap inner;
  Vec center;
  double radius;
};

struct MapNode {
  std::variant<LiftNode, NormalConeNode, GraphSampleNode, SumNode,
               ScaleRangeNode, RestrictNode>
      body;
};

}  // namespace detail

SetValuedMap lift(SingleValuedMap g);
SetValuedMap normal_cone_box(Box box);
SetValuedMap graph_sample(std::vector<std::pair<Vec, Vec>> pairs);
/// (g + F)(x) = g(x) + F(x). Spaces must match.
SetValuedMap sum(SingleValuedMap g, SetValuedMap F);
SetValuedMap scale_range(double factor, SetValuedMap F);
/// x -> F(x) intersected with the closed range ball B[center, radius].
SetValuedMap restrict_range(SetValuedMap F, Vec center, double radius);

/// Exact image set. Throws std::domain_error outside the declared domain
/// box; an empty image (e.g. a normal cone outside its box) is not an error.
ImageSet evaluate(const SetValuedMap& F, const Vec& x);
bool in_domain(const SetValuedMap& F, const Vec& x);

/// dist(y, F(x)) in the range norm; +inf when F(x) is empty. Sum nodes
/// translate the query, never the image, so the translation identity
/// dist(y, (g+F)(x)) = dist(y - g(x), F(x)) holds bitwise.
double dist_to_image(const SetValuedMap& F, const Vec& x, const Vec& y);

/// dist(y, F(x) intersected with B[ball_center, ball_radius]); +inf when the
/// intersection is empty.
double dist_to_restricted_image(const SetValuedMap& F, const Vec& x,
                                const Vec& y, const Vec& ball_center,
                                double ball_radius);

/// Grid proxy for dist(x, F^{-1}(y)): minimum of ||u - x|| over grid points
/// u with dist(y, F(u)) <= membership_tol; +inf when no point qualifies.
/// membership_tol < 0 selects the default, half the search grid step.
double inverse_dist(const SetValuedMap& F, const Vec& y, const Vec& x,
                    const Grid& search_grid, double membership_tol = -1.0);

struct GraphPoint {
  Vec x;
  Vec y;
};

/// Deterministic graph samples (x, y) with x on the grid inside
/// B[x_center, a] and y in F(x) within B[y_center, b]; continuum image
/// parts are discretized with ~range_step spacing.
std::vector<GraphPoint> sample_graph(const SetValuedMap& F,
                                     const Grid& domain_grid,
                                     const Vec& x_center, double a,
                                     const Vec& y_center, double b,
                                     double range_step);

/// Per-axis coordinates where the map's images change structure (box faces
/// of normal cones, sampled graph abscissae). Local solvers add these to
/// their candidate sets so face solutions are hit exactly.
std::vector<std::vector<double>> breakpoints(const SetValuedMap& F);

}  // namespace subreg
