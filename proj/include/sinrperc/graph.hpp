#pragma once

#include "sinrperc/geometry.hpp"
#include "sinrperc/pathloss.hpp"
#include "sinrperc/pointproc.hpp"

#include <numeric>
#include <vector>

namespace sinrperc {

/// Undirected edge with u < v.
struct Edge {
  Index u;
  Index v;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Finite graph on a configuration. Vertices keep the configuration's
/// indices; only vertices inside the observation window carry edges.
struct GraphResult {
  Points positions;
  std::vector<char> observed;
  std::vector<Edge> edges;
  /// Component id per vertex; empty until label_clusters runs.
  std::vector<Index> labels;
  /// Index of each vertex in the configuration it was built from.
  std::vector<Index> source_index;
  Window window;

  Index size() const { return positions.cols(); }
  Index observed_count() const;
};

class UnionFind {
public:
  explicit UnionFind(Index n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  Index find(Index x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns the new root, or -1 when already joined.
  Index unite(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a == b) return -1;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return a;
  }

  Index component_size(Index x) { return size_[find(x)]; }

private:
  std::vector<Index> parent_;
  std::vector<Index> size_;
};

/// Builds an unlabelled graph skeleton for `config` with the observed mask set.
GraphResult empty_graph(const MarkedConfiguration& config);
GraphResult empty_graph(const Points& points, const Window& window);

/// Sorts and deduplicates the edge list, then labels connected components.
/// Labels are numbered in order of their smallest vertex.
GraphResult label_clusters(GraphResult graph);

std::vector<std::vector<Index>> adjacency_lists(const GraphResult& graph);

/// Some cluster has a vertex within `touch` of both faces orthogonal to `axis`.
bool crossing_exists(const GraphResult& graph, int axis, double touch);

struct DegreeStats {
  std::vector<Index> histogram;
  Index max_degree = 0;
};

/// Degree histogram over observed vertices.
DegreeStats degree_stats(const GraphResult& graph);

/// Sizes of observed clusters, largest first.
std::vector<Index> cluster_sizes(const GraphResult& graph);

enum class ComponentShape { Cycle, Path };

struct ComponentTag {
  Index label;
  Index vertices;
  Index edges;
  ComponentShape shape;
};

/// Tags every observed cluster of a max-degree-2 graph. Throws when some
/// degree exceeds 2.
std::vector<ComponentTag> classify_degree2_components(const GraphResult& graph);

/// First k transmitters in decreasing received power P l(|x - y|) at the
/// receiver, ties broken by smaller distance. Throws on a tie that the
/// distance cannot break.
std::vector<Index> signal_weighted_neighbors(const MarkedConfiguration& config, Index receiver,
                                             Index k, const PathLoss& ell);
std::vector<Index> signal_weighted_neighbors(const MarkedConfiguration& config, const Point& receiver,
                                             Index k, const PathLoss& ell);

}  // namespace sinrperc
