#pragma once

#include <Eigen/Core>

#include <limits>
#include <utility>
#include <vector>

namespace subreg {

using Vec = Eigen::VectorXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class NormKind { Sup, Euclidean, One };

/// A finite-dimensional normed space R^n. The norm is fixed at construction
/// and shared by every point compared within one computation.
struct Space {
  int dim = 1;
  NormKind norm = NormKind::Sup;
};

bool operator==(const Space& a, const Space& b);

/// Norm of x in the given space. Throws std::invalid_argument on a
/// dimension mismatch.
double norm(const Space& space, const Vec& x);

/// distance(a, b) = ||a - b|| in the space's norm.
double distance(const Space& space, const Vec& a, const Vec& b);

/// dist(x, S) over a finite point set; +inf when S is empty.
double dist_point_to_finite_set(const Space& space, const Vec& x,
                                const std::vector<Vec>& set);

/// Closed or open norm ball. Membership uses exact comparison after the
/// norm is computed in double precision; tolerance handling belongs to the
/// moduli estimators, not to geometry.
struct Ball {
  Space space;
  Vec center;
  double radius = 0.0;
  bool open = false;

  bool contains(const Vec& x) const;
};

/// Uniform axis-aligned grid. Coordinates are pinned to
///   lower + i * (upper - lower) / (steps - 1)
/// (steps >= 2), or the lower bound when steps == 1, so enumeration is
/// bit-identical across runs and across any parallel partitioning.
struct Grid {
  std::vector<std::pair<double, double>> box;  // per-axis [lo, hi]
  std::vector<int> steps;                      // per-axis point count, >= 1

  int dim() const { return static_cast<int>(box.size()); }
  long long size() const;
  double coordinate(int axis, int index) const;
  /// Lexicographic enumeration: axis 0 is most significant.
  Vec point(long long linear_index) const;
  /// Largest per-axis spacing; 0 for a single-point grid.
  double max_step() const;

  /// Grid over the sup-box [c - r, c + r]^n with the same step count per
  /// axis. An odd step count puts the center on the grid (up to the pinned
  /// construction formula's rounding).
  static Grid centered(const Vec& center, double radius, int steps_per_axis);
  /// Same, with the step count derived from a requested spacing; the
  /// resulting count is odd.
  static Grid centered_with_step(const Vec& center, double radius, double step);
  static Grid over_box(std::vector<std::pair<double, double>> box,
                       std::vector<int> steps);
};

/// Materialized enumeration of grid(). Pure function of the grid.
std::vector<Vec> grid_points(const Grid& grid);

/// Point count so that a centered grid over radius r has spacing ~step.
int steps_for_radius(double radius, double step);

}  // namespace subreg
