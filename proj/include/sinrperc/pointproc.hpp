#pragma once

#include "sinrperc/geometry.hpp"
#include "sinrperc/measure.hpp"
#include "sinrperc/power.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace sinrperc {

enum class NonequidistanceCheck { Unchecked, Verified, Violated };

struct Provenance {
  std::uint64_t seed = 0;
  std::string source;
  std::string power_law;
  bool heavy_tail = false;
  NonequidistanceCheck nonequidistance = NonequidistanceCheck::Unchecked;
};

/// Finite realization of the marked point process on a window's buffered box.
/// `powers` holds one entry per point once `marked` is set.
struct MarkedConfiguration {
  Points points;
  std::vector<double> powers;
  bool marked = false;
  Window window;
  Provenance provenance;

  Index size() const { return points.cols(); }
  int dim() const { return static_cast<int>(points.rows()); }
};

/// Configurations up to this size get the full pairwise-distance check at
/// construction time; larger ones only get the distinct-position check.
inline constexpr Index kNonequidistanceCheckLimit = 500;

/// Validates positions (inside the buffered window, pairwise distinct) and
/// runs the nonequidistance check when the configuration is small enough.
MarkedConfiguration make_configuration(Points points, const Window& window, std::uint64_t seed,
                                       std::string source = "explicit");

/// True when all pairwise distances differ by more than rel_tol (relative).
bool is_nonequidistant(const Points& points, double rel_tol = 1e-12);

MarkedConfiguration sample_ppp(double intensity, const Window& window, std::uint64_t seed);

/// Cox process with directing measure lambda * Lambda on the measure's buffered window.
MarkedConfiguration sample_cox(const DirectingMeasure& measure, double lambda, std::uint64_t seed);

MarkedConfiguration mark_powers(MarkedConfiguration config, const PowerDistribution& mu,
                                std::uint64_t seed);

/// Sets explicit powers; used for hand-built configurations.
MarkedConfiguration with_powers(MarkedConfiguration config, std::vector<double> powers);

/// Indices i with P_i >= threshold.
std::vector<Index> power_survivors(const MarkedConfiguration& config, double threshold);

MarkedConfiguration thin_by_power(const MarkedConfiguration& config, double threshold);

/// Sub-configuration made of the given indices, in order.
MarkedConfiguration subset(const MarkedConfiguration& config, const std::vector<Index>& keep);

/// Count in region / volume of region.
double empirical_intensity(const MarkedConfiguration& config, const Box& region);

}  // namespace sinrperc
