#pragma once

#include "sinrperc/geometry.hpp"
#include "sinrperc/spatial_grid.hpp"
#include "sinrperc/voronoi.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sinrperc {

/// Compactly supported, radially symmetric shot-noise kernel.
struct Kernel {
  enum class Shape { Ball, Bump };
  Shape shape = Shape::Ball;
  double height = 1.0;
  double radius = 1.0;

  /// Kernel value at distance `dist` from its nucleus.
  double operator()(double dist) const;
  double integral(int dim) const;
};

/// Law of the random directing measure Lambda. `normalization` is the factor
/// c such that E[c * raw(Q_1)] = 1.
struct DirectingMeasureSpec {
  enum class Kind { Lebesgue, Modulated, ShotNoise, VoronoiEdge };

  Kind kind = Kind::Lebesgue;
  double lambda_in = 1.0;
  double lambda_out = 1.0;
  double nucleus_intensity = 1.0;
  double ball_radius = 1.0;
  Kernel kernel;
  double normalization = 1.0;

  static DirectingMeasureSpec lebesgue();
  /// lambda_in on a Poisson-Boolean model Xi (nuclei at `nucleus_intensity`,
  /// balls of `ball_radius`), lambda_out off it.
  static DirectingMeasureSpec modulated(double lambda_in, double lambda_out,
                                        double nucleus_intensity, double ball_radius);
  static DirectingMeasureSpec shot_noise(double nucleus_intensity, Kernel kernel);
  static DirectingMeasureSpec voronoi_edge(double nucleus_intensity);

  void validate(int dim) const;

  /// b such that restrictions to sets more than b apart are independent;
  /// empty when no such range is known.
  std::optional<double> dependence_range() const;

  /// Distance beyond a region from which nuclei still shape the payload on it.
  double influence_range() const;

  /// Length scale of the environment (ball radius, kernel radius or cell size).
  double feature_scale(int dim) const;

  std::string name() const;
};

/// One sampled directing measure, exact on the buffered window. Immutable and
/// cheap to copy (payload is shared).
class DirectingMeasure {
public:
  const DirectingMeasureSpec& spec() const { return spec_; }
  const Window& window() const { return window_; }

  bool has_density() const { return spec_.kind != DirectingMeasureSpec::Kind::VoronoiEdge; }

  /// Normalized density at x (density payloads only).
  double density(const Point& x) const;

  /// An upper bound for the normalized density on `cell`.
  double density_upper_bound(const Box& cell) const;

  /// Clipped skeleton segments (edge payload only).
  const std::vector<Segment>& segments() const;

  /// Lambda(buffered window).
  double total_mass() const { return total_mass_; }

  /// Lambda(region); numerical midpoint integration on cells of size at most
  /// integration_step() for density payloads, exact for skeletons.
  double mass(const Box& region) const;

  double integration_step() const { return step_; }

  /// Number of Voronoi cells reaching the buffered window that were cut by the
  /// nucleus sampling box; nonzero means the skeleton may be inexact.
  int boundary_suspect_cells() const { return suspect_; }

  const Points& nuclei() const;

  /// Running sums of segment lengths (edge payload only).
  const std::vector<double>& cumulative_lengths() const;

private:
  friend DirectingMeasure build_directing_measure(const DirectingMeasureSpec&, const Window&,
                                                  std::uint64_t);
  struct Payload;

  DirectingMeasureSpec spec_;
  Window window_;
  std::shared_ptr<const Payload> payload_;
  double total_mass_ = 0.0;
  double step_ = 0.0;
  int suspect_ = 0;
};

DirectingMeasure build_directing_measure(const DirectingMeasureSpec& spec, const Window& window,
                                         std::uint64_t seed);

/// Mean raw mass per unit volume over `replicas` windows of side `side`
/// (default: ten feature scales, at least 20).
double mean_raw_intensity(const DirectingMeasureSpec& spec, int dim, std::uint64_t seed,
                          int replicas = 100, double side = 0.0);

/// Returns `spec` with normalization = 1 / mean_raw_intensity.
DirectingMeasureSpec calibrate_normalization(DirectingMeasureSpec spec, int dim,
                                             std::uint64_t seed, int replicas = 100,
                                             double side = 0.0);

}  // namespace sinrperc
