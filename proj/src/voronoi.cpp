#include "sinrperc/voronoi.hpp"

#include "sinrperc/spatial_grid.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace sinrperc {

namespace {

using Vec2 = Eigen::Vector2d;

struct Polygon {
  std::vector<Vec2> v;
  // label[k] names the nucleus whose bisector carries edge v[k] -> v[k+1]; -1 is the domain.
  std::vector<Index> label;
};

// Keeps the part of poly with n.x <= c; the new edge is labelled `tag`.
Polygon clip(const Polygon& poly, const Vec2& n, double c, Index tag) {
  Polygon out;
  const std::size_t m = poly.v.size();
  for (std::size_t k = 0; k < m; ++k) {
    const Vec2& p = poly.v[k];
    const Vec2& q = poly.v[(k + 1) % m];
    const double fp = n.dot(p) - c;
    const double fq = n.dot(q) - c;
    if (fp <= 0.0) {
      out.v.push_back(p);
      out.label.push_back(poly.label[k]);
    }
    if ((fp <= 0.0) != (fq <= 0.0)) {
      const double t = fp / (fp - fq);
      out.v.push_back(p + t * (q - p));
      // Entering the kept side continues the old edge; leaving starts the cut.
      out.label.push_back(fp <= 0.0 ? tag : poly.label[k]);
    }
  }
  return out;
}

}  // namespace

VoronoiSkeleton voronoi_skeleton(const Points& nuclei, const Box& domain) {
  if (nuclei.rows() != 2 || domain.dim() != 2)
    throw std::invalid_argument("voronoi: only planar tessellations are supported");
  const Index n = nuclei.cols();
  VoronoiSkeleton out;
  out.touches_domain.assign(n, false);
  out.cell_bounds.resize(n);
  if (n == 0) return out;

  const double spacing = std::sqrt(domain.volume() / static_cast<double>(n));
  SpatialGrid grid(nuclei, domain, spacing);
  const double diag = (domain.hi - domain.lo).norm();

  std::vector<std::pair<double, Index>> cand;
  for (Index i = 0; i < n; ++i) {
    const Vec2 xi = nuclei.col(i);
    Polygon poly;
    poly.v = {Vec2(domain.lo[0], domain.lo[1]), Vec2(domain.hi[0], domain.lo[1]),
              Vec2(domain.hi[0], domain.hi[1]), Vec2(domain.lo[0], domain.hi[1])};
    poly.label = {-1, -1, -1, -1};

    double radius = 3.0 * spacing;
    double done = 0.0;
    while (true) {
      cand.clear();
      grid.for_each_within(nuclei.col(i), radius, [&](Index j) {
        if (j == i) return;
        const double dj = (nuclei.col(j) - nuclei.col(i)).norm();
        if (dj >= done) cand.emplace_back(dj, j);
      });
      std::sort(cand.begin(), cand.end());
      for (const auto& [dj, j] : cand) {
        double reach = 0.0;
        for (const auto& v : poly.v) reach = std::max(reach, (v - xi).norm());
        if (dj > 2.0 * reach) break;
        const Vec2 xj = nuclei.col(j);
        poly = clip(poly, xj - xi, 0.5 * (xj.squaredNorm() - xi.squaredNorm()), j);
      }
      double reach = 0.0;
      for (const auto& v : poly.v) reach = std::max(reach, (v - xi).norm());
      if (2.0 * reach <= radius || radius >= diag) break;
      done = radius;
      radius = std::min(2.0 * reach, diag) + 1e-9;
    }

    Box bounds{Point::Constant(2, INFINITY), Point::Constant(2, -INFINITY)};
    for (const auto& v : poly.v) {
      bounds.lo = bounds.lo.cwiseMin(Point(v));
      bounds.hi = bounds.hi.cwiseMax(Point(v));
    }
    out.cell_bounds[i] = bounds;
    const std::size_t m = poly.v.size();
    for (std::size_t k = 0; k < m; ++k) {
      const Index j = poly.label[k];
      if (j < 0) {
        out.touches_domain[i] = true;
        continue;
      }
      if (j < i) continue;
      Segment s{poly.v[k], poly.v[(k + 1) % m]};
      if (s.length() > 1e-12) out.edges.push_back(std::move(s));
    }
  }
  return out;
}

}  // namespace sinrperc
