#pragma once

#include "sinrperc/graph.hpp"
#include "sinrperc/pathloss.hpp"
#include "sinrperc/pointproc.hpp"

#include <limits>
#include <span>
#include <vector>

namespace sinrperc {

struct SinrParams {
  double tau = 1.0;
  double noise = 0.0;
  double gamma = 0.0;

  void validate() const;
};

struct SinrOptions {
  /// Interference is summed over transmitters closer than this radius.
  /// Infinite means every point of the configuration contributes.
  double interference_cutoff = std::numeric_limits<double>::infinity();
};

/// sum over k not in `exclude` of P_k l_a(|X_k - target|).
double interference_at(const MarkedConfiguration& config, const Point& target,
                       std::span<const Index> exclude, const PathLoss& ell, double shift = 0.0);

/// P_i l(|X_i - X_j|) / (N_o + gamma * I(X_i, X_j)). Returns +inf when the
/// denominator vanishes and the numerator does not.
double sinr_value(const MarkedConfiguration& config, Index i, Index j, const SinrParams& params,
                  const PathLoss& ell);

/// A pair of observed vertices whose signals beat the noise in both
/// directions, i.e. an edge of the gamma = 0 graph.
struct SinrLink {
  Index i;
  Index j;
  double signal_ij;        // numerator power of i times l(|X_i - X_j|)
  double signal_ji;
  double interference_j;   // at X_j, excluding i and j
  double interference_i;   // at X_i, excluding i and j

  /// Edge present at interference factor gamma.
  bool present(double tau, double noise, double gamma) const {
    return signal_ij > tau * (noise + gamma * interference_j) &&
           signal_ji > tau * (noise + gamma * interference_i);
  }

  /// Supremum of the gammas at which the link is an edge (+inf if unbounded).
  double critical_gamma(double tau, double noise) const;
};

/// All gamma = 0 links of the SINR graph on `config`.
std::vector<SinrLink> sinr_links(const MarkedConfiguration& config, double tau, double noise,
                                 const PathLoss& ell, const SinrOptions& options = {});

/// Graph with edge {i, j} iff the SINR exceeds tau in both directions.
GraphResult build_sinr_graph(const MarkedConfiguration& config, const SinrParams& params,
                             const PathLoss& ell, const SinrOptions& options = {});

/// Keeps the links present at gamma and labels clusters.
GraphResult graph_from_links(const MarkedConfiguration& config, const std::vector<SinrLink>& links,
                             double tau, double noise, double gamma);

/// Power threshold tau N_o / l(r_o) of the thinned subgraph.
double minus_threshold(const SinrParams& params, const PathLoss& ell, double r_o);

/// Subgraph on the power-thinned vertices whose numerator powers are lowered
/// to the threshold tau N_o / l(r_o); interference keeps the true powers of
/// all points. Vertex k of the result is config vertex source_index[k].
GraphResult build_minus_graph(const MarkedConfiguration& config, const SinrParams& params,
                              const PathLoss& ell, double r_o, const SinrOptions& options = {});

enum class RadiusRule { Min, Sum };

/// Gilbert graph: edge iff |X_i - X_j| < r.
GraphResult build_gilbert_graph(const Points& points, const Window& window, double radius);

/// Random-radii Gilbert graph: edge iff distance < min(r_i, r_j) (Min) or
/// < r_i + r_j (Sum). Zero radii isolate a vertex.
GraphResult build_gilbert_graph(const Points& points, const Window& window,
                                std::span<const double> radii, RadiusRule rule = RadiusRule::Min);

/// Per-point connection radii l^{-1}(tau N_o / P_i).
std::vector<double> connection_radii(const MarkedConfiguration& config, const PathLoss& ell,
                                     double tau, double noise);

}  // namespace sinrperc
