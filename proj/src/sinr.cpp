#include "sinrperc/sinr.hpp"

#include "sinrperc/spatial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sinrperc {

void SinrParams::validate() const {
  if (!(tau > 0.0)) throw std::invalid_argument("sinr: tau must be > 0");
  if (!(noise >= 0.0)) throw std::invalid_argument("sinr: noise must be >= 0");
  if (!(gamma >= 0.0)) throw std::invalid_argument("sinr: gamma must be >= 0");
}

double SinrLink::critical_gamma(double tau, double noise) const {
  const auto one_way = [&](double signal, double interference) {
    if (!(interference > 0.0)) return std::numeric_limits<double>::infinity();
    return (signal / tau - noise) / interference;
  };
  return std::min(one_way(signal_ij, interference_j), one_way(signal_ji, interference_i));
}

double interference_at(const MarkedConfiguration& config, const Point& target,
                       std::span<const Index> exclude, const PathLoss& ell, double shift) {
  if (!config.marked) throw std::logic_error("interference: configuration is not marked");
  for (Index e : exclude)
    if (e < 0 || e >= config.size()) throw std::out_of_range("interference: excluded index out of range");
  double sum = 0.0;
  for (Index k = 0; k < config.size(); ++k) {
    if (std::find(exclude.begin(), exclude.end(), k) != exclude.end()) continue;
    sum += config.powers[k] * ell.shifted(shift, (config.points.col(k) - target).norm());
  }
  return sum;
}

double sinr_value(const MarkedConfiguration& config, Index i, Index j, const SinrParams& params,
                  const PathLoss& ell) {
  params.validate();
  if (i == j) throw std::invalid_argument("sinr: transmitter and receiver coincide");
  if (i < 0 || j < 0 || i >= config.size() || j >= config.size())
    throw std::out_of_range("sinr: index out of range");
  const Index ex[2] = {i, j};
  const double signal = config.powers[i] * ell(distance(config.points, i, j));
  const double denom = params.noise + params.gamma * interference_at(config, config.points.col(j), ex, ell);
  if (denom == 0.0) return signal > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return signal / denom;
}

namespace {

// Total received power at each listed vertex from every other configuration point.
std::vector<double> total_interference(const MarkedConfiguration& config,
                                       const std::vector<Index>& receivers, const PathLoss& ell,
                                       double cutoff) {
  std::vector<double> total(receivers.size(), 0.0);
  if (std::isfinite(cutoff)) {
    const Box bounds = config.window.buffered();
    SpatialGrid grid(config.points, bounds, std::max(cutoff / 2.0, 1e-9 * config.window.side));
    for (std::size_t a = 0; a < receivers.size(); ++a) {
      const Index j = receivers[a];
      double sum = 0.0;
      grid.for_each_neighbor(j, cutoff, [&](Index k) {
        sum += config.powers[k] * ell((config.points.col(k) - config.points.col(j)).norm());
      });
      total[a] = sum;
    }
  } else {
    for (std::size_t a = 0; a < receivers.size(); ++a) {
      const Index j = receivers[a];
      double sum = 0.0;
      for (Index k = 0; k < config.size(); ++k)
        if (k != j) sum += config.powers[k] * ell((config.points.col(k) - config.points.col(j)).norm());
      total[a] = sum;
    }
  }
  return total;
}

// Links among `vertices` (configuration indices) whose numerator powers are
// `numerator[v]`; interference uses the true powers of the whole configuration.
std::vector<SinrLink> links_impl(const MarkedConfiguration& config, const std::vector<Index>& vertices,
                                 const std::vector<double>& numerator, double tau, double noise,
                                 const PathLoss& ell, double cutoff) {
  if (!config.marked) throw std::logic_error("sinr graph: configuration is not marked");
  if (!(tau > 0.0)) throw std::invalid_argument("sinr: tau must be > 0");
  if (!(noise >= 0.0)) throw std::invalid_argument("sinr: noise must be >= 0");
  if (!(cutoff > 0.0)) throw std::invalid_argument("sinr: interference cutoff must be > 0");
  const Box obs = config.window.observation();
  std::vector<Index> recv;
  for (Index v : vertices)
    if (obs.contains(config.points.col(v))) recv.push_back(v);
  const Index m = static_cast<Index>(recv.size());
  std::vector<double> radius(m);
  double max_radius = 0.0;
  for (Index a = 0; a < m; ++a) {
    radius[a] = connection_radius(ell, numerator[recv[a]], tau, noise);
    max_radius = std::max(max_radius, radius[a]);
  }
  const std::vector<double> total = total_interference(config, recv, ell, cutoff);

  std::vector<SinrLink> links;
  const auto consider = [&](Index a, Index b) {
    const Index i = recv[a];
    const Index j = recv[b];
    const double d = distance(config.points, i, j);
    const double lij = ell(d);
    const double s_ij = numerator[i] * lij;
    const double s_ji = numerator[j] * lij;
    if (!(s_ij > tau * noise) || !(s_ji > tau * noise)) return;
    const bool counted = d < cutoff;
    SinrLink link{std::min(i, j), std::max(i, j), 0, 0, 0, 0};
    const double at_j = std::max(0.0, total[b] - (counted ? config.powers[i] * lij : 0.0));
    const double at_i = std::max(0.0, total[a] - (counted ? config.powers[j] * lij : 0.0));
    if (i < j) {
      link.signal_ij = s_ij;
      link.signal_ji = s_ji;
      link.interference_j = at_j;
      link.interference_i = at_i;
    } else {
      link.signal_ij = s_ji;
      link.signal_ji = s_ij;
      link.interference_j = at_i;
      link.interference_i = at_j;
    }
    links.push_back(link);
  };

  if (m < 2 || max_radius <= 0.0) return links;
  if (std::isfinite(max_radius) && max_radius < config.window.side) {
    Points sub(config.dim(), m);
    for (Index a = 0; a < m; ++a) sub.col(a) = config.points.col(recv[a]);
    SpatialGrid grid(sub, obs, max_radius);
    for (Index a = 0; a < m; ++a) {
      if (radius[a] <= 0.0) continue;
      // A link needs d < min(r_a, r_b), so it is found from its lower endpoint.
      grid.for_each_neighbor(a, radius[a] * (1.0 + 1e-12), [&](Index b) {
        if (b > a) consider(a, b);
      });
    }
  } else {
    for (Index a = 0; a < m; ++a)
      for (Index b = a + 1; b < m; ++b) consider(a, b);
  }
  std::sort(links.begin(), links.end(),
            [](const SinrLink& x, const SinrLink& y) { return x.i != y.i ? x.i < y.i : x.j < y.j; });
  return links;
}

}  // namespace

std::vector<SinrLink> sinr_links(const MarkedConfiguration& config, double tau, double noise,
                                 const PathLoss& ell, const SinrOptions& options) {
  std::vector<Index> all(config.size());
  std::iota(all.begin(), all.end(), Index{0});
  return links_impl(config, all, config.powers, tau, noise, ell, options.interference_cutoff);
}

GraphResult graph_from_links(const MarkedConfiguration& config, const std::vector<SinrLink>& links,
                             double tau, double noise, double gamma) {
  GraphResult g = empty_graph(config);
  for (const auto& l : links)
    if (l.present(tau, noise, gamma)) g.edges.push_back({l.i, l.j});
  return label_clusters(std::move(g));
}

GraphResult build_sinr_graph(const MarkedConfiguration& config, const SinrParams& params,
                             const PathLoss& ell, const SinrOptions& options) {
  params.validate();
  const auto links = sinr_links(config, params.tau, params.noise, ell, options);
  return graph_from_links(config, links, params.tau, params.noise, params.gamma);
}

double minus_threshold(const SinrParams& params, const PathLoss& ell, double r_o) {
  if (!(r_o > ell.plateau())) throw std::domain_error("minus graph: r_o must exceed d_o");
  const double at = ell(r_o);
  if (!(at > 0.0)) throw std::domain_error("minus graph: r_o lies outside the support of l");
  return params.tau * params.noise / at;
}

GraphResult build_minus_graph(const MarkedConfiguration& config, const SinrParams& params,
                              const PathLoss& ell, double r_o, const SinrOptions& options) {
  params.validate();
  const double threshold = minus_threshold(params, ell, r_o);
  const std::vector<Index> kept = power_survivors(config, threshold);
  const std::vector<double> numerator(static_cast<std::size_t>(config.size()), threshold);
  const auto links =
      links_impl(config, kept, numerator, params.tau, params.noise, ell, options.interference_cutoff);

  MarkedConfiguration thinned = subset(config, kept);
  GraphResult g = empty_graph(thinned);
  g.source_index = kept;
  std::vector<Index> local(static_cast<std::size_t>(config.size()), -1);
  for (std::size_t k = 0; k < kept.size(); ++k) local[kept[k]] = static_cast<Index>(k);
  for (const auto& l : links)
    if (l.present(params.tau, params.noise, params.gamma)) g.edges.push_back({local[l.i], local[l.j]});
  return label_clusters(std::move(g));
}

GraphResult build_gilbert_graph(const Points& points, const Window& window, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("gilbert: radius must be > 0");
  const std::vector<double> radii(static_cast<std::size_t>(points.cols()), radius);
  return build_gilbert_graph(points, window, radii, RadiusRule::Min);
}

GraphResult build_gilbert_graph(const Points& points, const Window& window,
                                std::span<const double> radii, RadiusRule rule) {
  if (static_cast<Index>(radii.size()) != points.cols())
    throw std::invalid_argument("gilbert: one radius per point required");
  GraphResult g = empty_graph(points, window);
  double max_r = 0.0;
  for (double r : radii) {
    if (!(r >= 0.0)) throw std::invalid_argument("gilbert: radii must be >= 0");
    max_r = std::max(max_r, r);
  }
  if (max_r > 0.0 && points.cols() > 1) {
    const double reach = rule == RadiusRule::Sum ? 2.0 * max_r : max_r;
    std::vector<Index> obs;
    for (Index i = 0; i < points.cols(); ++i)
      if (g.observed[i]) obs.push_back(i);
    Points sub(points.rows(), static_cast<Index>(obs.size()));
    for (std::size_t a = 0; a < obs.size(); ++a) sub.col(static_cast<Index>(a)) = points.col(obs[a]);
    const double cell = std::isfinite(reach) ? std::max(reach, 1e-9 * window.side) : window.side;
    SpatialGrid grid(sub, window.observation(), cell);
    for (Index a = 0; a < sub.cols(); ++a) {
      const Index i = obs[a];
      const double query = rule == RadiusRule::Sum ? radii[i] + max_r : radii[i];
      if (query <= 0.0) continue;
      grid.for_each_neighbor(a, std::isfinite(query) ? query : 2.0 * window.side * points.rows(), [&](Index b) {
        const Index j = obs[b];
        if (j <= i) return;
        const double d = distance(points, i, j);
        const double limit = rule == RadiusRule::Sum ? radii[i] + radii[j] : std::min(radii[i], radii[j]);
        if (d < limit) g.edges.push_back({i, j});
      });
    }
  }
  return label_clusters(std::move(g));
}

std::vector<double> connection_radii(const MarkedConfiguration& config, const PathLoss& ell,
                                     double tau, double noise) {
  if (!config.marked) throw std::logic_error("connection radii: configuration is not marked");
  std::vector<double> r(static_cast<std::size_t>(config.size()));
  for (Index i = 0; i < config.size(); ++i) r[i] = connection_radius(ell, config.powers[i], tau, noise);
  return r;
}

}  // namespace sinrperc
