#include "sinrperc/graph.hpp"

#include <algorithm>
#include <stdexcept>

namespace sinrperc {

Index GraphResult::observed_count() const {
  return std::count(observed.begin(), observed.end(), char{1});
}

GraphResult empty_graph(const Points& points, const Window& window) {
  GraphResult g;
  g.positions = points;
  g.window = window;
  const Box obs = window.observation();
  g.observed.resize(static_cast<std::size_t>(points.cols()));
  g.source_index.resize(static_cast<std::size_t>(points.cols()));
  std::iota(g.source_index.begin(), g.source_index.end(), Index{0});
  for (Index i = 0; i < points.cols(); ++i) g.observed[i] = obs.contains(points.col(i)) ? 1 : 0;
  return g;
}

GraphResult empty_graph(const MarkedConfiguration& config) {
  return empty_graph(config.points, config.window);
}

GraphResult label_clusters(GraphResult graph) {
  for (auto& e : graph.edges) {
    if (e.u == e.v) throw std::invalid_argument("graph: self-loop");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(graph.edges.begin(), graph.edges.end());
  graph.edges.erase(std::unique(graph.edges.begin(), graph.edges.end()), graph.edges.end());
  const Index n = graph.size();
  UnionFind uf(n);
  for (const auto& e : graph.edges) uf.unite(e.u, e.v);
  std::vector<Index> root_label(n, -1);
  graph.labels.assign(n, -1);
  Index next = 0;
  for (Index i = 0; i < n; ++i) {
    const Index r = uf.find(i);
    if (root_label[r] < 0) root_label[r] = next++;
    graph.labels[i] = root_label[r];
  }
  return graph;
}

std::vector<std::vector<Index>> adjacency_lists(const GraphResult& graph) {
  std::vector<std::vector<Index>> adj(graph.size());
  for (const auto& e : graph.edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  return adj;
}

bool crossing_exists(const GraphResult& graph, int axis, double touch) {
  if (graph.size() == 0) return false;
  if (graph.labels.size() != static_cast<std::size_t>(graph.size()))
    throw std::logic_error("crossing_exists: graph is not labelled");
  const Box obs = graph.window.observation();
  std::vector<char> low(graph.size(), 0), high(graph.size(), 0);
  for (Index i = 0; i < graph.size(); ++i) {
    if (!graph.observed[i]) continue;
    const double x = graph.positions(axis, i);
    const Index c = graph.labels[i];
    if (x - obs.lo[axis] < touch) low[c] = 1;
    if (obs.hi[axis] - x < touch) high[c] = 1;
    if (low[c] && high[c]) return true;
  }
  return false;
}

DegreeStats degree_stats(const GraphResult& graph) {
  std::vector<Index> degree(graph.size(), 0);
  for (const auto& e : graph.edges) {
    ++degree[e.u];
    ++degree[e.v];
  }
  DegreeStats out;
  for (Index i = 0; i < graph.size(); ++i) {
    if (!graph.observed[i]) continue;
    const Index deg = degree[i];
    if (deg >= static_cast<Index>(out.histogram.size())) out.histogram.resize(deg + 1, 0);
    ++out.histogram[deg];
    out.max_degree = std::max(out.max_degree, deg);
  }
  return out;
}

std::vector<Index> cluster_sizes(const GraphResult& graph) {
  if (graph.labels.size() != static_cast<std::size_t>(graph.size()))
    throw std::logic_error("cluster_sizes: graph is not labelled");
  std::vector<Index> count(graph.size(), 0);
  for (Index i = 0; i < graph.size(); ++i)
    if (graph.observed[i]) ++count[graph.labels[i]];
  std::vector<Index> sizes;
  for (Index c : count)
    if (c > 0) sizes.push_back(c);
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

std::vector<ComponentTag> classify_degree2_components(const GraphResult& graph) {
  if (graph.labels.size() != static_cast<std::size_t>(graph.size()))
    throw std::logic_error("classify: graph is not labelled");
  if (degree_stats(graph).max_degree > 2)
    throw std::domain_error("classify: a vertex has degree above 2");
  std::vector<Index> verts(graph.size(), 0), edges(graph.size(), 0);
  for (Index i = 0; i < graph.size(); ++i)
    if (graph.observed[i]) ++verts[graph.labels[i]];
  for (const auto& e : graph.edges) ++edges[graph.labels[e.u]];
  std::vector<ComponentTag> tags;
  for (Index c = 0; c < graph.size(); ++c) {
    if (verts[c] == 0) continue;
    // With degrees <= 2, a connected component is a cycle iff |E| = |V|.
    tags.push_back({c, verts[c], edges[c], edges[c] == verts[c] ? ComponentShape::Cycle : ComponentShape::Path});
  }
  return tags;
}

namespace {

std::vector<Index> order_by_signal(const MarkedConfiguration& config, const Point& y, Index skip,
                                   Index k, const PathLoss& ell) {
  if (!config.marked) throw std::logic_error("signal ordering: configuration is not marked");
  struct Key {
    double signal;
    double dist;
    Index idx;
  };
  std::vector<Key> keys;
  keys.reserve(static_cast<std::size_t>(config.size()));
  for (Index i = 0; i < config.size(); ++i) {
    if (i == skip) continue;
    const double r = (config.points.col(i) - y).norm();
    keys.push_back({config.powers[i] * ell(r), r, i});
  }
  if (k < 0 || k > static_cast<Index>(keys.size()))
    throw std::invalid_argument("signal ordering: k exceeds the number of transmitters");
  const auto stronger = [](const Key& a, const Key& b) {
    if (a.signal != b.signal) return a.signal > b.signal;
    return a.dist < b.dist;
  };
  const Index prefix = std::min<Index>(k + 1, static_cast<Index>(keys.size()));
  std::partial_sort(keys.begin(), keys.begin() + prefix, keys.end(), stronger);
  for (Index i = 1; i < prefix; ++i)
    if (keys[i].signal == keys[i - 1].signal && keys[i].dist == keys[i - 1].dist)
      throw std::runtime_error("signal ordering: unresolved tie (nonequidistance violated)");
  std::vector<Index> out(k);
  for (Index i = 0; i < k; ++i) out[i] = keys[i].idx;
  return out;
}

}  // namespace

std::vector<Index> signal_weighted_neighbors(const MarkedConfiguration& config, Index receiver,
                                             Index k, const PathLoss& ell) {
  if (receiver < 0 || receiver >= config.size())
    throw std::out_of_range("signal ordering: receiver index out of range");
  return order_by_signal(config, config.points.col(receiver), receiver, k, ell);
}

std::vector<Index> signal_weighted_neighbors(const MarkedConfiguration& config, const Point& receiver,
                                             Index k, const PathLoss& ell) {
  return order_by_signal(config, receiver, -1, k, ell);
}

}  // namespace sinrperc
