#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sinrperc/estimators.hpp"
#include "sinrperc/graph.hpp"
#include "sinrperc/sinr.hpp"
#include "support.hpp"

#include <random>

using namespace sinrperc;

namespace {

GraphResult line_graph(Index n, std::vector<Edge> edges) {
  Points p = Points::Zero(2, n);
  for (Index i = 0; i < n; ++i) p(0, i) = static_cast<double>(i);
  GraphResult g = empty_graph(p, Window::centered(2, 4.0 * n + 4.0));
  g.edges = std::move(edges);
  return label_clusters(std::move(g));
}

}  // namespace

TEST_CASE("cluster labels") {
  const auto edgeless = line_graph(5, {});
  CHECK(cluster_sizes(edgeless) == std::vector<Index>(5, 1));
  const auto path = line_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  CHECK(cluster_sizes(path) == std::vector<Index>{4});
  CHECK(label_clusters(path).labels == path.labels);

  auto bad = line_graph(3, {});
  bad.edges.push_back({1, 1});
  CHECK_THROWS(label_clusters(bad));

  auto dup = line_graph(3, {});
  dup.edges = {{1, 0}, {0, 1}, {0, 1}};
  CHECK(label_clusters(dup).edges.size() == 1);
}

TEST_CASE("cluster labels agree with breadth-first search") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const Index n = std::uniform_int_distribution<Index>(1, 200)(rng);
    std::uniform_int_distribution<Index> pick(0, n - 1);
    std::vector<Edge> edges;
    const Index m = std::uniform_int_distribution<Index>(0, n)(rng);
    for (Index k = 0; k < m; ++k) {
      const Index a = pick(rng), b = pick(rng);
      if (a != b) edges.push_back({std::min(a, b), std::max(a, b)});
    }
    const auto g = line_graph(n, edges);
    CHECK(g.labels == test::bfs_labels(n, g.edges));
  }
}

TEST_CASE("crossing") {
  CHECK_FALSE(crossing_exists(line_graph(0, {}), 0, 1.0));
  // Window side 16 centered at 0: vertices at 0..3 lie in [-8, 8].
  Points p(2, 3);
  p << -7.5, 0.0, 7.5, 0.0, 0.0, 0.0;
  GraphResult g = empty_graph(p, Window::centered(2, 16.0));
  g.edges = {{0, 1}, {1, 2}};
  g = label_clusters(std::move(g));
  CHECK(crossing_exists(g, 0, 1.0));
  CHECK_FALSE(crossing_exists(g, 1, 1.0));
  g.edges = {{0, 1}};
  g = label_clusters(std::move(g));
  CHECK_FALSE(crossing_exists(g, 0, 1.0));
}

TEST_CASE("crossing is monotone under edge addition") {
  for (int s = 0; s < 20; ++s) {
    const auto c = test::mixed_config(1.5, 10.0, 0.0, s);
    auto g = build_gilbert_graph(c.points, c.window, 0.9);
    const bool before = crossing_exists(g, 0, 0.9);
    auto more = build_gilbert_graph(c.points, c.window, 1.2);
    CHECK((!before || crossing_exists(more, 0, 0.9)));
  }
}

TEST_CASE("subcritical gilbert graphs rarely cross") {
  const double lc = 1.436;
  const auto e = gilbert_crossing_probability(2, 1.0, 0.1 * lc, 20.0, {200, 5, 1});
  CHECK(e.value < 0.05);
}

TEST_CASE("degree statistics") {
  CHECK(degree_stats(line_graph(4, {})).max_degree == 0);
  const auto tri = line_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  const auto d = degree_stats(tri);
  CHECK(d.max_degree == 2);
  CHECK(d.histogram == std::vector<Index>{0, 0, 3});
}

TEST_CASE("sinr graph at tau gamma = 1 has degree at most one") {
  const auto ell = PathLoss::power_law(1.0, 4.0, 2);
  for (int s = 0; s < 500; ++s) {
    const auto c = test::mixed_config(3.0, 6.0, 1.0, s);
    CHECK(degree_stats(build_sinr_graph(c, {0.5, 0.1, 2.0}, ell)).max_degree <= 1);
  }
}

TEST_CASE("degree-two components") {
  const auto tri = classify_degree2_components(line_graph(3, {{0, 1}, {1, 2}, {0, 2}}));
  REQUIRE(tri.size() == 1);
  CHECK(tri[0].shape == ComponentShape::Cycle);
  const auto path = classify_degree2_components(line_graph(4, {{0, 1}, {1, 2}, {2, 3}}));
  REQUIRE(path.size() == 1);
  CHECK(path[0].shape == ComponentShape::Path);
  CHECK_THROWS(classify_degree2_components(line_graph(4, {{0, 1}, {0, 2}, {0, 3}})));

  const auto mixed = line_graph(8, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {5, 6}});
  const auto tags = classify_degree2_components(mixed);
  CHECK(tags.size() == cluster_sizes(mixed).size());
  Index cycles = 0;
  for (const auto& t : tags) {
    CHECK((t.shape == ComponentShape::Cycle) == (t.edges == t.vertices));
    cycles += t.shape == ComponentShape::Cycle;
  }
  CHECK(cycles == 1);
}

TEST_CASE("signal weighted neighbours") {
  const auto ell = PathLoss::power_law(1.0, 4.0, 2);
  const auto c = test::hand(test::pts2({{0, 0}, {1, 0}, {3, 0}}), {1, 1, 100});
  const auto order = signal_weighted_neighbors(c, 0, 2, ell);
  CHECK(order == std::vector<Index>{2, 1});

  // Equal received power 1 * l(1) = 16 * l(2) = 1; the closer one wins.
  const auto tie = test::hand(test::pts2({{0, 0}, {1, 0}, {0, 2}}), {1, 1, 16});
  CHECK(signal_weighted_neighbors(tie, 0, 2, ell) == std::vector<Index>{1, 2});

  const auto flat = test::hand(test::pts2({{0, 0}, {1.5, 0}, {0, 2.5}, {-1.2, -1.3}, {3, 3}}), {1, 1, 1, 1, 1});
  CHECK(signal_weighted_neighbors(flat, 0, 4, ell) == std::vector<Index>{1, 3, 2, 4});

  const auto twins = test::hand(test::pts2({{0, 0}, {2, 0}, {-2, 0}}), {1, 1, 1});
  CHECK_THROWS(signal_weighted_neighbors(twins, 0, 2, ell));
}

TEST_CASE("degree-two vertices connect to their two strongest transmitters") {
  const auto ell = PathLoss::power_law(1.0, 4.0, 2);
  const SinrParams p{0.5, 0.01, 1.0};
  Index seen = 0;
  for (int s = 0; s < 200; ++s) {
    const auto c = test::mixed_config(2.0, 6.0, 0.0, 1000 + s);
    const auto g = build_sinr_graph(c, p, ell);
    REQUIRE(degree_stats(g).max_degree <= 2);
    const auto adj = adjacency_lists(g);
    for (Index v = 0; v < g.size(); ++v) {
      if (adj[v].size() != 2) continue;
      ++seen;
      auto top = signal_weighted_neighbors(c, v, 2, ell);
      auto nb = adj[v];
      std::sort(top.begin(), top.end());
      std::sort(nb.begin(), nb.end());
      CHECK(top == nb);
    }
  }
  CHECK(seen > 0);
}
