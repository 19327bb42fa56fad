#pragma once

#include <Eigen/Core>

#include <cstddef>

namespace sinrperc {

using Index = std::ptrdiff_t;

/// A point of R^d as a column vector.
using Point = Eigen::VectorXd;

/// Point sets are stored column-wise: d rows, one column per point.
using Points = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>;

/// Axis-aligned box [lo, hi].
struct Box {
  Point lo;
  Point hi;

  int dim() const { return static_cast<int>(lo.size()); }
  double volume() const { return (hi - lo).prod(); }

  template <typename Derived>
  bool contains(const Eigen::MatrixBase<Derived>& x) const {
    return (x.array() >= lo.array()).all() && (x.array() <= hi.array()).all();
  }

  /// True when `other` lies inside this box.
  bool encloses(const Box& other) const {
    return (other.lo.array() >= lo.array()).all() && (other.hi.array() <= hi.array()).all();
  }

  Box expanded(double by) const { return {lo.array() - by, hi.array() + by}; }
};

/// The cube Q_side(center) = center + [-side/2, side/2]^d.
Box cube(const Point& center, double side);

/// Observation box Q_L(center), simulated on the buffered box Q_{L+2m}(center).
struct Window {
  Point center;
  double side = 1.0;
  double margin = 0.0;

  Window() = default;
  Window(Point center, double side, double margin);

  /// Origin-centered window in dimension `dim`.
  static Window centered(int dim, double side, double margin = 0.0);

  int dim() const { return static_cast<int>(center.size()); }
  Box observation() const { return cube(center, side); }
  Box buffered() const { return cube(center, side + 2.0 * margin); }
};

/// Euclidean distance between column `i` and `j` of `pts`.
inline double distance(const Points& pts, Index i, Index j) {
  return (pts.col(i) - pts.col(j)).norm();
}

/// sup-norm distance |x - z|_inf.
template <typename A, typename B>
double sup_distance(const Eigen::MatrixBase<A>& x, const Eigen::MatrixBase<B>& z) {
  return (x - z).cwiseAbs().maxCoeff();
}

/// Volume of the unit ball in R^d.
double unit_ball_volume(int dim);

/// Surface area of the unit sphere S^{d-1}.
double unit_sphere_area(int dim);

/// Clips the segment [a, b] to `box`. Returns false when nothing remains.
bool clip_segment(const Box& box, Point& a, Point& b);

/// Distance from x to the segment [a, b].
double point_segment_distance(const Point& x, const Point& a, const Point& b);

}  // namespace sinrperc
