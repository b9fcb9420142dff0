#include "subreg/space.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace subreg {

namespace {

void check_dim(const Space& space, const Vec& x, const char* what) {
  if (x.size() != space.dim) {
    throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                std::to_string(space.dim) + ", got " +
                                std::to_string(x.size()));
  }
}

}  // namespace

bool operator==(const Space& a, const Space& b) {
  return a.dim == b.dim && a.norm == b.norm;
}

double norm(const Space& space, const Vec& x) {
  check_dim(space, x, "norm");
  switch (space.norm) {
    case NormKind::Sup:
      return x.size() == 0 ? 0.0 : x.cwiseAbs().maxCoeff();
    case NormKind::Euclidean:
      return x.norm();
    case NormKind::One:
      return x.cwiseAbs().sum();
  }
  return 0.0;
}

double distance(const Space& space, const Vec& a, const Vec& b) {
  check_dim(space, a, "distance");
  check_dim(space, b, "distance");
  return norm(space, a - b);
}

double dist_point_to_finite_set(const Space& space, const Vec& x,
                                const std::vector<Vec>& set) {
  check_dim(space, x, "dist_point_to_finite_set");
  double best = kInf;
  for (const Vec& u : set) {
    best = std::min(best, distance(space, x, u));
  }
  return best;
}

bool Ball::contains(const Vec& x) const {
  const double d = distance(space, x, center);
  return open ? d < radius : d <= radius;
}

long long Grid::size() const {
  long long n = 1;
  for (int s : steps) n *= s;
  return n;
}

double Grid::coordinate(int axis, int index) const {
  const double lo = box[axis].first;
  const double hi = box[axis].second;
  const int s = steps[axis];
  if (s == 1) return lo;
  return lo + index * (hi - lo) / (s - 1);
}

Vec Grid::point(long long linear_index) const {
  const int d = dim();
  Vec x(d);
  for (int axis = d - 1; axis >= 0; --axis) {
    const long long s = steps[axis];
    const long long i = linear_index % s;
    linear_index /= s;
    x[axis] = coordinate(axis, static_cast<int>(i));
  }
  return x;
}

double Grid::max_step() const {
  double h = 0.0;
  for (int axis = 0; axis < dim(); ++axis) {
    if (steps[axis] > 1) {
      h = std::max(h, (box[axis].second - box[axis].first) / (steps[axis] - 1));
    }
  }
  return h;
}

Grid Grid::centered(const Vec& center, double radius, int steps_per_axis) {
  if (radius < 0) throw std::invalid_argument("Grid::centered: negative radius");
  if (steps_per_axis < 1) throw std::invalid_argument("Grid::centered: steps < 1");
  Grid g;
  g.box.reserve(center.size());
  for (Eigen::Index i = 0; i < center.size(); ++i) {
    g.box.emplace_back(center[i] - radius, center[i] + radius);
  }
  g.steps.assign(center.size(), steps_per_axis);
  return g;
}

Grid Grid::centered_with_step(const Vec& center, double radius, double step) {
  return centered(center, radius, steps_for_radius(radius, step));
}

Grid Grid::over_box(std::vector<std::pair<double, double>> box,
                    std::vector<int> steps) {
  if (box.size() != steps.size()) {
    throw std::invalid_argument("Grid::over_box: box/steps size mismatch");
  }
  for (size_t i = 0; i < box.size(); ++i) {
    if (steps[i] < 1) throw std::invalid_argument("Grid::over_box: steps < 1");
    if (!(box[i].first <= box[i].second)) {
      throw std::invalid_argument("Grid::over_box: inverted bounds");
    }
  }
  Grid g;
  g.box = std::move(box);
  g.steps = std::move(steps);
  return g;
}

std::vector<Vec> grid_points(const Grid& grid) {
  std::vector<Vec> pts;
  const long long n = grid.size();
  pts.reserve(static_cast<size_t>(n));
  for (long long i = 0; i < n; ++i) pts.push_back(grid.point(i));
  return pts;
}

int steps_for_radius(double radius, double step) {
  if (!(step > 0)) throw std::invalid_argument("steps_for_radius: step <= 0");
  const long long half = std::max<long long>(1, std::llround(radius / step));
  return static_cast<int>(2 * half + 1);
}

}  // namespace subreg
