#include "subreg/image_set.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subreg {

double interval_distance(double y, const Interval& iv) {
  if (y < iv.lo) return iv.lo - y;
  if (y > iv.hi) return y - iv.hi;
  return 0.0;
}

ImageSet ImageSet::empty() {
  ImageSet s;
  s.body_ = EmptyBody{};
  return s;
}

ImageSet ImageSet::point(Vec y) {
  ImageSet s;
  s.body_ = PointsBody{{std::move(y)}};
  return s;
}

ImageSet ImageSet::points(std::vector<Vec> ys) {
  if (ys.empty()) return empty();
  ImageSet s;
  s.body_ = PointsBody{std::move(ys)};
  return s;
}

ImageSet ImageSet::intervals(std::vector<Interval> parts) {
  for (const Interval& iv : parts) {
    if (!(iv.lo <= iv.hi)) {
      throw std::invalid_argument("ImageSet::intervals: inverted interval");
    }
  }
  if (parts.empty()) return empty();
  std::sort(parts.begin(), parts.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> merged;
  merged.push_back(parts[0]);
  for (size_t i = 1; i < parts.size(); ++i) {
    if (parts[i].lo <= merged.back().hi) {
      merged.back().hi = std::max(merged.back().hi, parts[i].hi);
    } else {
      merged.push_back(parts[i]);
    }
  }
  ImageSet s;
  s.body_ = IntervalsBody{std::move(merged)};
  return s;
}

bool ImageSet::is_empty() const {
  return std::holds_alternative<EmptyBody>(body_);
}

bool ImageSet::holds_points() const {
  return std::holds_alternative<PointsBody>(body_);
}

bool ImageSet::holds_intervals() const {
  return std::holds_alternative<IntervalsBody>(body_);
}

const std::vector<Vec>& ImageSet::point_list() const {
  return std::get<PointsBody>(body_).pts;
}

const std::vector<Interval>& ImageSet::interval_list() const {
  return std::get<IntervalsBody>(body_).parts;
}

double ImageSet::distance_to(const Vec& y, const Space& range) const {
  if (is_empty()) return kInf;
  if (holds_points()) {
    return dist_point_to_finite_set(range, y, point_list());
  }
  if (y.size() != 1 || range.dim != 1) {
    throw std::invalid_argument("ImageSet: interval body is 1-D only");
  }
  double best = kInf;
  for (const Interval& iv : interval_list()) {
    best = std::min(best, interval_distance(y[0], iv));
  }
  return best;
}

double ImageSet::max_distance_to(const Vec& y, const Space& range) const {
  if (is_empty()) return 0.0;
  if (holds_points()) {
    double worst = 0.0;
    for (const Vec& p : point_list()) {
      worst = std::max(worst, distance(range, p, y));
    }
    return worst;
  }
  if (y.size() != 1) {
    throw std::invalid_argument("ImageSet: interval body is 1-D only");
  }
  double worst = 0.0;
  for (const Interval& iv : interval_list()) {
    if (std::isinf(iv.lo) || std::isinf(iv.hi)) return kInf;
    worst = std::max({worst, std::abs(iv.lo - y[0]), std::abs(iv.hi - y[0])});
  }
  return worst;
}

ImageSet ImageSet::translated(const Vec& shift) const {
  if (is_empty()) return *this;
  if (holds_points()) {
    std::vector<Vec> moved;
    moved.reserve(point_list().size());
    for (const Vec& p : point_list()) moved.push_back(p + shift);
    return points(std::move(moved));
  }
  if (shift.size() != 1) {
    throw std::invalid_argument("ImageSet: interval body is 1-D only");
  }
  std::vector<Interval> moved;
  moved.reserve(interval_list().size());
  for (const Interval& iv : interval_list()) {
    moved.push_back({iv.lo + shift[0], iv.hi + shift[0]});
  }
  return intervals(std::move(moved));
}

ImageSet ImageSet::scaled(double factor) const {
  if (!(factor > 0)) {
    throw std::invalid_argument("ImageSet::scaled: factor must be > 0");
  }
  if (is_empty()) return *this;
  if (holds_points()) {
    std::vector<Vec> out;
    out.reserve(point_list().size());
    for (const Vec& p : point_list()) out.push_back(factor * p);
    return points(std::move(out));
  }
  std::vector<Interval> out;
  out.reserve(interval_list().size());
  for (const Interval& iv : interval_list()) {
    out.push_back({factor * iv.lo, factor * iv.hi});
  }
  return intervals(std::move(out));
}

ImageSet ImageSet::intersect_ball(const Vec& center, double radius,
                                  const Space& range) const {
  if (is_empty()) return *this;
  if (holds_points()) {
    Ball ball{range, center, radius, false};
    std::vector<Vec> kept;
    for (const Vec& p : point_list()) {
      if (ball.contains(p)) kept.push_back(p);
    }
    return points(std::move(kept));
  }
  if (range.dim != 1 && range.norm != NormKind::Sup) {
    throw std::invalid_argument(
        "ImageSet::intersect_ball: interval bodies need a sup-norm window or "
        "dimension 1");
  }
  const double lo = center[0] - radius;
  const double hi = center[0] + radius;
  std::vector<Interval> kept;
  for (const Interval& iv : interval_list()) {
    const double clo = std::max(iv.lo, lo);
    const double chi = std::min(iv.hi, hi);
    if (clo <= chi) kept.push_back({clo, chi});
  }
  if (kept.empty()) return empty();
  return intervals(std::move(kept));
}

std::vector<Vec> ImageSet::enumerate(const Vec& center, double radius,
                                     double step, const Space& range) const {
  std::vector<Vec> out;
  if (is_empty()) return out;
  if (holds_points()) {
    Ball ball{range, center, radius, false};
    for (const Vec& p : point_list()) {
      if (ball.contains(p)) out.push_back(p);
    }
    return out;
  }
  if (!(step > 0)) throw std::invalid_argument("ImageSet::enumerate: step <= 0");
  const ImageSet clipped = intersect_ball(center, radius, range);
  if (clipped.is_empty()) return out;
  for (const Interval& iv : clipped.interval_list()) {
    const double len = iv.hi - iv.lo;
    const int n = len == 0.0
                      ? 1
                      : static_cast<int>(std::llround(std::ceil(len / step))) + 1;
    for (int i = 0; i < n; ++i) {
      Vec y(1);
      y[0] = n == 1 ? iv.lo : iv.lo + i * len / (n - 1);
      out.push_back(std::move(y));
    }
  }
  return out;
}

}  // namespace subreg
