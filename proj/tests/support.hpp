#pragma once

#include "sinrperc/graph.hpp"
#include "sinrperc/pointproc.hpp"
#include "sinrperc/random.hpp"

#include <cmath>
#include <queue>
#include <random>
#include <set>
#include <vector>

namespace sinrperc::test {

inline Points pts2(std::initializer_list<std::pair<double, double>> xy) {
  Points p(2, static_cast<Index>(xy.size()));
  Index k = 0;
  for (auto [x, y] : xy) p.col(k++) << x, y;
  return p;
}

/// Hand-built configuration on a window wide enough to hold every point.
inline MarkedConfiguration hand(Points p, std::vector<double> powers, double side = 20.0) {
  const Window w = Window::centered(static_cast<int>(p.rows()), side, 0.0);
  return with_powers(make_configuration(std::move(p), w, 0), std::move(powers));
}

/// PPP on Q_L buffered by m with mixed dirac / exponential powers.
inline MarkedConfiguration mixed_config(double lambda, double L, double m, std::uint64_t seed) {
  auto c = sample_ppp(lambda, Window::centered(2, L, m), seed);
  Rng rng = make_rng(derive_seed(seed, "test-marks", 0));
  std::exponential_distribution<double> ex(1.0);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> p(c.size());
  for (auto& x : p) x = coin(rng) ? 1.0 : ex(rng);
  return with_powers(std::move(c), std::move(p));
}

inline std::set<std::pair<Index, Index>> edge_set(const GraphResult& g) {
  std::set<std::pair<Index, Index>> s;
  for (const auto& e : g.edges) s.insert({e.u, e.v});
  return s;
}

/// Component labels by breadth-first search, numbered by smallest vertex.
inline std::vector<Index> bfs_labels(Index n, const std::vector<Edge>& edges) {
  std::vector<std::vector<Index>> adj(n);
  for (const auto& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  std::vector<Index> label(n, -1);
  Index next = 0;
  for (Index s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    std::queue<Index> q;
    q.push(s);
    label[s] = next;
    while (!q.empty()) {
      const Index v = q.front();
      q.pop();
      for (Index w : adj[v])
        if (label[w] < 0) label[w] = next, q.push(w);
    }
    ++next;
  }
  return label;
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& x) {
  MeanSe out;
  const double n = static_cast<double>(x.size());
  for (double v : x) out.mean += v / n;
  double var = 0.0;
  for (double v : x) var += (v - out.mean) * (v - out.mean) / (n - 1.0);
  out.se = std::sqrt(var / n);
  return out;
}

}  // namespace sinrperc::test
