#include "sinrperc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sinrperc {

Box cube(const Point& center, double side) {
  return {center.array() - side / 2.0, center.array() + side / 2.0};
}

Window::Window(Point c, double s, double m) : center(std::move(c)), side(s), margin(m) {
  if (center.size() < 1) throw std::invalid_argument("window: dimension must be >= 1");
  if (!(side > 0.0)) throw std::invalid_argument("window: side must be > 0");
  if (!(margin >= 0.0)) throw std::invalid_argument("window: margin must be >= 0");
}

Window Window::centered(int dim, double side, double margin) {
  if (dim < 1) throw std::invalid_argument("window: dimension must be >= 1");
  return Window(Point::Zero(dim), side, margin);
}

double unit_ball_volume(int dim) {
  const double d = dim;
  return std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

double unit_sphere_area(int dim) { return dim * unit_ball_volume(dim); }

// Liang-Barsky
bool clip_segment(const Box& box, Point& a, Point& b) {
  const Point dir = b - a;
  double t0 = 0.0;
  double t1 = 1.0;
  for (int k = 0; k < box.dim(); ++k) {
    const double p[2] = {-dir[k], dir[k]};
    const double q[2] = {a[k] - box.lo[k], box.hi[k] - a[k]};
    for (int s = 0; s < 2; ++s) {
      if (p[s] == 0.0) {
        if (q[s] < 0.0) return false;
        continue;
      }
      const double t = q[s] / p[s];
      if (p[s] < 0.0) {
        if (t > t1) return false;
        if (t > t0) t0 = t;
      } else {
        if (t < t0) return false;
        if (t < t1) t1 = t;
      }
    }
  }
  const Point start = a + t0 * dir;
  b = a + t1 * dir;
  a = start;
  return true;
}

double point_segment_distance(const Point& x, const Point& a, const Point& b) {
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return (x - a).norm();
  const double t = std::clamp((x - a).dot(ab) / len2, 0.0, 1.0);
  return (x - (a + t * ab)).norm();
}

}  // namespace sinrperc
