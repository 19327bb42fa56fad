#pragma once

#include "sinrperc/geometry.hpp"

#include <vector>

namespace sinrperc {

struct Segment {
  Point a;
  Point b;
  double length() const { return (b - a).norm(); }
};

struct VoronoiSkeleton {
  std::vector<Segment> edges;
  /// Per nucleus: true when its cell was cut by the domain boundary, i.e. the
  /// cell is not certified exact.
  std::vector<bool> touches_domain;
  /// Per nucleus: bounding box of its (clipped) cell.
  std::vector<Box> cell_bounds;
};

/// Edges of the planar Voronoi tessellation of `nuclei` (2 x n), restricted to
/// `domain`. Each cell is obtained by half-plane clipping against nuclei in
/// order of distance until no farther nucleus can cut it.
VoronoiSkeleton voronoi_skeleton(const Points& nuclei, const Box& domain);

}  // namespace sinrperc
