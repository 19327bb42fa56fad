#include "sinrperc/spatial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sinrperc {

SpatialGrid::SpatialGrid(const Points& points, const Box& bounds, double cell_size)
    : points_(&points), bounds_(bounds), cell_(cell_size) {
  if (!(cell_size > 0.0)) throw std::invalid_argument("spatial grid: cell size must be > 0");
  const int d = bounds.dim();
  if (d > kMaxDim) throw std::invalid_argument("spatial grid: dimension above 8 unsupported");
  dims_.resize(d);
  strides_.resize(d);
  long total = 1;
  for (int k = 0; k < d; ++k) {
    const double extent = bounds.hi[k] - bounds.lo[k];
    // Cap the cell count per axis; queries stay correct with larger cells.
    long n = std::max<long>(1, static_cast<long>(std::ceil(extent / cell_)));
    n = std::min<long>(n, 4096);
    dims_[k] = n;
    strides_[k] = total;
    total *= n;
  }
  if (total > (1L << 24)) {
    // Coarsen uniformly so the table fits in memory.
    const double factor = std::pow(static_cast<double>(total) / (1L << 24), 1.0 / d);
    cell_ *= factor;
    total = 1;
    for (int k = 0; k < d; ++k) {
      dims_[k] = std::max<long>(1, static_cast<long>(std::ceil((bounds.hi[k] - bounds.lo[k]) / cell_)));
      strides_[k] = total;
      total *= dims_[k];
    }
  }
  std::vector<long> cell_of(points.cols());
  cell_start_.assign(total + 1, 0);
  for (Index i = 0; i < points.cols(); ++i) {
    long flat = 0;
    for (int k = 0; k < d; ++k) flat += cell_coord(points(k, i), k) * strides_[k];
    cell_of[i] = flat;
    ++cell_start_[flat + 1];
  }
  for (long c = 0; c < total; ++c) cell_start_[c + 1] += cell_start_[c];
  order_.resize(points.cols());
  std::vector<Index> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (Index i = 0; i < points.cols(); ++i) order_[fill[cell_of[i]]++] = i;
}

long SpatialGrid::cell_coord(double v, int axis) const {
  const long c = static_cast<long>(std::floor((v - bounds_.lo[axis]) / cell_));
  return std::clamp<long>(c, 0, dims_[axis] - 1);
}

}  // namespace sinrperc
