#pragma once

#include "subreg/space.hpp"

#include <variant>
#include <vector>

namespace subreg {

/// Closed interval; endpoints may be +-inf.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// The value F(x) of a set-valued mapping. Restricted by design to finite
/// point sets and finite unions of closed 1-D intervals (normal cones to
/// boxes decompose coordinatewise), so every distance query is exact.
class ImageSet {
 public:
  static ImageSet empty();
  static ImageSet point(Vec y);
  static ImageSet points(std::vector<Vec> ys);
  /// Normalizes: sorts by lower endpoint and merges overlapping parts.
  static ImageSet intervals(std::vector<Interval> parts);

  bool is_empty() const;
  bool holds_points() const;
  bool holds_intervals() const;
  const std::vector<Vec>& point_list() const;
  const std::vector<Interval>& interval_list() const;

  /// dist(y, F(x)); +inf when the set is empty.
  double distance_to(const Vec& y, const Space& range) const;
  /// sup over the set of ||z - y||; 0 when empty (a vacuous containment),
  /// +inf when an interval part is unbounded.
  double max_distance_to(const Vec& y, const Space& range) const;

  ImageSet translated(const Vec& shift) const;
  /// Range scaling by c > 0.
  ImageSet scaled(double factor) const;
  /// Intersection with the closed ball B[center, radius]. Interval bodies
  /// require a sup-norm window (exact coordinatewise clip) or dimension 1.
  ImageSet intersect_ball(const Vec& center, double radius,
                          const Space& range) const;

  /// Deterministic sample of the set inside B[center, radius]: finite points
  /// are filtered, interval parts are discretized with ~step spacing
  /// (endpoints always included). 1-D interval bodies only.
  std::vector<Vec> enumerate(const Vec& center, double radius, double step,
                             const Space& range) const;

 private:
  struct EmptyBody {};
  struct PointsBody {
    std::vector<Vec> pts;
  };
  struct IntervalsBody {
    std::vector<Interval> parts;  // sorted, pairwise disjoint
  };
  std::variant<EmptyBody, PointsBody, IntervalsBody> body_;
};

/// dist(y, [lo, hi]) on the real line.
double interval_distance(double y, const Interval& iv);

}  // namespace subreg
