#pragma once

#include "sinrperc/geometry.hpp"

#include <array>
#include <vector>

namespace sinrperc {

/// Uniform cell list over a box for fixed-radius neighbor queries.
class SpatialGrid {
public:
  static constexpr int kMaxDim = 8;

  SpatialGrid(const Points& points, const Box& bounds, double cell_size);

  /// Calls fn(j) for every point j with |x_j - x| < radius.
  template <typename Fn>
  void for_each_within(const Eigen::Ref<const Point>& x, double radius, Fn&& fn) const;

  /// Same as for_each_within around point i, skipping i itself.
  template <typename Fn>
  void for_each_neighbor(Index i, double radius, Fn&& fn) const {
    for_each_within(points_->col(i), radius, [&](Index j) {
      if (j != i) fn(j);
    });
  }

  double cell_size() const { return cell_; }

private:
  long cell_coord(double v, int axis) const;

  const Points* points_;
  Box bounds_;
  double cell_;
  std::vector<long> dims_;
  std::vector<long> strides_;
  std::vector<Index> cell_start_;
  std::vector<Index> order_;
};

template <typename Fn>
void SpatialGrid::for_each_within(const Eigen::Ref<const Point>& x, double radius, Fn&& fn) const {
  const int d = static_cast<int>(dims_.size());
  const double r2 = radius * radius;
  std::array<long, kMaxDim> lo{}, hi{}, cur{};
  for (int k = 0; k < d; ++k) {
    lo[k] = cell_coord(x[k] - radius, k);
    hi[k] = cell_coord(x[k] + radius, k);
    cur[k] = lo[k];
  }
  const Points& pts = *points_;
  while (true) {
    long flat = 0;
    for (int k = 0; k < d; ++k) flat += cur[k] * strides_[k];
    for (Index s = cell_start_[flat]; s < cell_start_[flat + 1]; ++s) {
      const Index j = order_[s];
      if ((pts.col(j) - x).squaredNorm() < r2) fn(j);
    }
    int k = 0;
    while (k < d && cur[k] == hi[k]) {
      cur[k] = lo[k];
      ++k;
    }
    if (k == d) break;
    ++cur[k];
  }
}

}  // namespace sinrperc
