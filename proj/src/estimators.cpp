#include "sinrperc/estimators.hpp"

#include "sinrperc/parallel.hpp"
#include "sinrperc/random.hpp"
#include "sinrperc/spatial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace sinrperc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double typical_power(const PowerDistribution& mu) {
  const double m = mu.mean();
  if (std::isfinite(m)) return m;
  // Pareto median.
  return mu.second() * std::pow(2.0, 1.0 / mu.first());
}

double largest(const std::vector<double>& w) { return *std::max_element(w.begin(), w.end()); }

std::vector<double> sorted_windows(std::vector<double> windows) {
  if (windows.empty()) throw std::invalid_argument("estimators: no window sizes");
  for (double L : windows)
    if (!(L > 0.0)) throw std::invalid_argument("estimators: window sizes must be > 0");
  std::sort(windows.begin(), windows.end());
  return windows;
}

// Per-replica crossing thresholds in gamma at intensity lambda on window L.
std::vector<double> critical_gammas(const ModelConfig& model, double lambda, double L, double margin,
                                    std::uint64_t master, const MonteCarlo& mc) {
  const double touch = model.connection_scale();
  return parallel_map(mc.replicas, mc.workers, [&](Index k) {
    const auto config = simulate_replica(model, lambda, L, margin, replica_seed(master, k));
    return replica_critical_gamma(config, model, touch, margin > 0.0 ? margin : kInf);
  });
}

Index count_above(const std::vector<double>& v, double x) {
  return std::count_if(v.begin(), v.end(), [&](double g) { return g > x; });
}

Index count_at_most(const std::vector<double>& v, double x) {
  return std::count_if(v.begin(), v.end(), [&](double g) { return g <= x; });
}

// gamma-star on one sample of per-replica thresholds.
WindowEstimate gamma_star_from(const std::vector<double>& gc, double L, double tau, bool* unbounded) {
  const double n = static_cast<double>(gc.size());
  const auto frac_no_cross = [&](double g) { return 1.0 - count_above(gc, g) / n; };
  WindowEstimate w;
  w.window = L;
  w.replicas = static_cast<Index>(gc.size());
  w.at_zero = count_above(gc, 0.0) / n;
  if (w.at_zero <= 0.5) return w;
  double hi = 1.0 / tau;
  int grow = 0;
  while (frac_no_cross(hi) < 0.5 && grow < 10) hi *= 2.0, ++grow;
  if (frac_no_cross(hi) < 0.5) {
    if (unbounded) *unbounded = true;
    w.value = w.ci_lo = w.ci_hi = hi;
    return w;
  }
  const double h = 1.959963984540054 * 0.5 / std::sqrt(n);
  const auto b = bisect_up(frac_no_cross, 0.0, hi, 0.5);
  w.value = b.value;
  w.iterations = b.iterations;
  w.ci_lo = bisect_up(frac_no_cross, 0.0, hi, std::max(0.0, 0.5 - h)).value;
  w.ci_hi = frac_no_cross(hi) >= 0.5 + h ? bisect_up(frac_no_cross, 0.0, hi, 0.5 + h).value : hi;
  return w;
}

}  // namespace

void ModelConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("model: dimension must be >= 1");
  if (ell.dim() != dim) throw std::invalid_argument("model: path loss dimension differs from model dimension");
  measure.validate(dim);
  SinrParams{tau, noise, 0.0}.validate();
}

double ModelConfig::connection_scale() const {
  return connection_radius(ell, typical_power(mu), tau, noise);
}

ModelConfig prepare_model(ModelConfig model, std::uint64_t seed) {
  model.validate();
  if (model.measure.kind != DirectingMeasureSpec::Kind::Lebesgue)
    model.measure = calibrate_normalization(model.measure, model.dim, seed);
  return model;
}

Margin sinr_margin(const ModelConfig& model, double lambda, double cap, double tol) {
  Margin out;
  if (model.ell.bounded_support()) {
    out.value = std::max(model.ell.support_sup(), 5.0 * model.connection_scale());
  } else {
    const double mean = model.mu.mean();
    if (!std::isfinite(mean) || model.noise <= 0.0) {
      out.value = cap;
      out.capped = true;
      return out;
    }
    const double scale = lambda * mean * unit_sphere_area(model.dim);
    const double target = tol * model.noise;
    const auto excess = [&](double m) { return scale * model.ell.tail_integral(m) >= target; };
    double hi = std::max(model.ell.plateau(), 1e-3);
    while (excess(hi) && hi <= cap) hi *= 2.0;
    if (excess(hi)) {
      out.value = cap;
      out.capped = true;
      return out;
    }
    double lo = hi / 2.0;
    while (hi - lo > 1e-3 * hi) {
      const double mid = 0.5 * (lo + hi);
      (excess(mid) ? lo : hi) = mid;
    }
    out.value = hi;
  }
  if (out.value > cap) {
    out.value = cap;
    out.capped = true;
  }
  return out;
}

Estimate wilson(Index successes, Index replicas, double z) {
  if (replicas < 1) throw std::invalid_argument("wilson: replicas must be >= 1");
  if (successes < 0 || successes > replicas) throw std::invalid_argument("wilson: successes out of range");
  const double n = static_cast<double>(replicas);
  const double p = successes / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  Estimate e;
  e.value = p;
  e.ci_lo = successes == 0 ? 0.0 : std::max(0.0, center - half);
  e.ci_hi = successes == replicas ? 1.0 : std::min(1.0, center + half);
  e.successes = successes;
  e.replicas = replicas;
  e.se = std::sqrt(p * (1.0 - p) / n);
  return e;
}

std::uint64_t replica_seed(std::uint64_t master, Index k) {
  return derive_seed(master, "replica", static_cast<std::uint64_t>(k));
}

MarkedConfiguration simulate_replica(const ModelConfig& model, double lambda, double L, double margin,
                                     std::uint64_t seed) {
  const Window window = Window::centered(model.dim, L, margin);
  const DirectingMeasure measure = build_directing_measure(model.measure, window, seed);
  return mark_powers(sample_cox(measure, lambda, seed), model.mu, seed);
}

double replica_critical_gamma(const MarkedConfiguration& config, const ModelConfig& model, double touch,
                              double cutoff) {
  const Box obs = config.window.observation();
  const Index n = config.size();
  std::vector<char> low(n, 0), high(n, 0);
  for (Index i = 0; i < n; ++i) {
    const auto x = config.points.col(i);
    if (!obs.contains(x)) continue;
    low[i] = x[0] - obs.lo[0] < touch;
    high[i] = obs.hi[0] - x[0] < touch;
    if (low[i] && high[i]) return kInf;
  }
  auto links = sinr_links(config, model.tau, model.noise, model.ell, {cutoff});
  std::vector<std::pair<double, Index>> order(links.size());
  for (std::size_t k = 0; k < links.size(); ++k)
    order[k] = {links[k].critical_gamma(model.tau, model.noise), static_cast<Index>(k)};
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  UnionFind uf(n);
  for (const auto& [g, k] : order) {
    const Index a = uf.find(links[k].i);
    const Index b = uf.find(links[k].j);
    if (a == b) continue;
    const Index root = uf.unite(a, b);
    low[root] = low[a] || low[b];
    high[root] = high[a] || high[b];
    if (low[root] && high[root]) return g;
  }
  return -kInf;
}

double replica_critical_lambda_gilbert(int dim, double r, double L, double lambda_max, std::uint64_t seed) {
  if (!(r > 0.0)) throw std::invalid_argument("gilbert: radius must be > 0");
  const Window window = Window::centered(dim, L, 0.0);
  const MarkedConfiguration config = sample_ppp(lambda_max, window, seed);
  const Index n = config.size();
  if (n == 0) return kInf;
  Rng rng = make_rng(derive_seed(seed, "labels", 0));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> u(n);
  for (auto& x : u) x = unif(rng);
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return u[a] < u[b]; });

  const Box obs = window.observation();
  SpatialGrid grid(config.points, obs, r);
  UnionFind uf(n);
  std::vector<char> active(n, 0), low(n, 0), high(n, 0);
  for (Index v : order) {
    active[v] = 1;
    low[v] = config.points(0, v) - obs.lo[0] < r;
    high[v] = obs.hi[0] - config.points(0, v) < r;
    bool crossed = low[v] && high[v];
    grid.for_each_neighbor(v, r, [&](Index w) {
      if (!active[w] || crossed) return;
      const Index a = uf.find(v);
      const Index b = uf.find(w);
      if (a == b) return;
      const Index root = uf.unite(a, b);
      low[root] = low[a] || low[b];
      high[root] = high[a] || high[b];
      crossed = low[root] && high[root];
    });
    if (crossed) return lambda_max * u[v];
  }
  return kInf;
}

SweepResult crossing_sweep(const ModelConfig& model, const std::vector<double>& lambdas,
                           const std::vector<double>& gammas, double L, const MonteCarlo& mc) {
  model.validate();
  if (mc.replicas < 1) throw std::invalid_argument("crossing sweep: replicas must be >= 1");
  SweepResult out;
  out.window = L;
  for (double lambda : lambdas) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("crossing sweep: lambda must be >= 0");
    const Margin margin = sinr_margin(model, lambda, L);
    out.margin = std::max(out.margin, margin.value);
    const auto gc = critical_gammas(model, lambda, L, margin.value, mc.seed, mc);
    for (double gamma : gammas) {
      if (!(gamma >= 0.0)) throw std::invalid_argument("crossing sweep: gamma must be >= 0");
      out.points.push_back({lambda, gamma, wilson(count_above(gc, gamma), mc.replicas)});
    }
  }
  return out;
}

Estimate crossing_probability(const ModelConfig& model, double lambda, double gamma, double L,
                              const MonteCarlo& mc) {
  return crossing_sweep(model, {lambda}, {gamma}, L, mc).points.front().crossing;
}

Estimate gilbert_crossing_probability(int dim, double r, double lambda, double L, const MonteCarlo& mc) {
  const auto hits = parallel_map(mc.replicas, mc.workers, [&](Index k) {
    const Window window = Window::centered(dim, L, 0.0);
    const auto config = sample_ppp(lambda, window, replica_seed(derive_seed(mc.seed, "gilbert", 0), k));
    const auto g = build_gilbert_graph(config.points, window, r);
    return static_cast<int>(crossing_exists(g, 0, r));
  });
  return wilson(std::accumulate(hits.begin(), hits.end(), Index{0}), mc.replicas);
}

LambdaCEstimate estimate_lambda_c_gilbert(int dim, double r, const std::vector<double>& windows,
                                          const MonteCarlo& mc) {
  if (dim < 2) throw std::invalid_argument("lambda_c: dimension must be >= 2");
  if (mc.replicas < 1) throw std::invalid_argument("lambda_c: replicas must be >= 1");
  LambdaCEstimate out;
  out.r = r;
  const auto ws = sorted_windows(windows);
  const double n = static_cast<double>(mc.replicas);
  const double h = 1.959963984540054 * 0.5 / std::sqrt(n);
  for (std::size_t w = 0; w < ws.size(); ++w) {
    const double L = ws[w];
    const std::uint64_t master = derive_seed(mc.seed, "lambda-c", w);
    double lambda_max = 10.0 / (unit_ball_volume(dim) * std::pow(r, dim));
    std::vector<double> crit;
    for (int attempt = 0; attempt < 6; ++attempt) {
      crit = parallel_map(mc.replicas, mc.workers, [&](Index k) {
        return replica_critical_lambda_gilbert(dim, r, L, lambda_max, replica_seed(master, k));
      });
      if (count_at_most(crit, lambda_max) / n > 0.5) break;
      lambda_max *= 2.0;
    }
    const auto frac = [&](double lambda) { return count_at_most(crit, lambda) / n; };
    if (!(frac(lambda_max) > 0.5) || !(frac(0.0) < 0.5))
      throw std::runtime_error("lambda_c: crossing probability does not straddle 0.5 on window " +
                               std::to_string(L));
    WindowEstimate e;
    e.window = L;
    e.replicas = mc.replicas;
    const auto b = bisect_up(frac, 0.0, lambda_max, 0.5);
    e.value = b.value;
    e.iterations = b.iterations;
    e.ci_lo = bisect_up(frac, 0.0, lambda_max, std::max(0.0, 0.5 - h)).value;
    e.ci_hi = frac(lambda_max) >= 0.5 + h ? bisect_up(frac, 0.0, lambda_max, 0.5 + h).value : lambda_max;
    out.windows.push_back(e);
  }
  double lo = kInf, hi = -kInf;
  for (const auto& e : out.windows) lo = std::min(lo, e.value), hi = std::max(hi, e.value);
  out.value = out.windows.back().value;
  out.spread = hi - lo;
  return out;
}

GammaStarEstimate estimate_gamma_star(const ModelConfig& model, double lambda,
                                      const std::vector<double>& windows, const MonteCarlo& mc) {
  model.validate();
  if (mc.replicas < 1) throw std::invalid_argument("gamma-star: replicas must be >= 1");
  GammaStarEstimate out;
  out.lambda = lambda;
  const auto ws = sorted_windows(windows);
  std::vector<double> last;
  for (std::size_t w = 0; w < ws.size(); ++w) {
    const double L = ws[w];
    const Margin margin = sinr_margin(model, lambda, L);
    last = critical_gammas(model, lambda, L, margin.value, derive_seed(mc.seed, "gamma-star", w), mc);
    bool unbounded = false;
    out.windows.push_back(gamma_star_from(last, L, model.tau, &unbounded));
    if (w + 1 == ws.size()) out.unbounded = unbounded;
  }
  const WindowEstimate& top = out.windows.back();
  out.subcritical = top.at_zero <= 0.5;
  out.value = top.value;
  double lo = kInf, hi = -kInf;
  for (const auto& e : out.windows) lo = std::min(lo, e.value), hi = std::max(hi, e.value);
  out.spread = hi - lo;
  const double span = out.value > 0.0 ? 2.0 * out.value : 1.0 / model.tau;
  for (int k = 0; k <= 10; ++k) {
    const double g = span * k / 10.0;
    out.profile.push_back({g, count_above(last, g) / static_cast<double>(last.size())});
  }
  return out;
}

Theorem2Report theorem2_experiment(const ModelConfig& model, const std::vector<double>& lambdas,
                                   const std::vector<double>& windows, const MonteCarlo& mc,
                                   std::optional<double> gamma) {
  model.validate();
  if (mc.replicas < 1) throw std::invalid_argument("theorem2: replicas must be >= 1");
  Theorem2Report rep;
  rep.gamma = gamma.value_or(1.0 / (2.0 * model.tau));
  if (rep.gamma < 1.0 / (2.0 * model.tau))
    throw std::invalid_argument("theorem2: gamma must be at least 1/(2 tau)");
  const auto ws = sorted_windows(windows);
  const double touch = model.connection_scale();
  struct One {
    int cross = 0;
    Index max_degree = 0;
    Index largest = 0;
    Index cycles = 0;
    Index paths = 0;
  };
  for (double lambda : lambdas) {
    std::vector<const Theorem2Row*> mine;
    for (double L : ws) {
      const Margin margin = sinr_margin(model, lambda, L);
      const auto runs = parallel_map(mc.replicas, mc.workers, [&](Index k) {
        const auto config = simulate_replica(model, lambda, L, margin.value, replica_seed(mc.seed, k));
        const auto links = sinr_links(config, model.tau, model.noise, model.ell, {margin.value});
        const auto g = graph_from_links(config, links, model.tau, model.noise, rep.gamma);
        One o;
        o.cross = crossing_exists(g, 0, touch);
        o.max_degree = degree_stats(g).max_degree;
        const auto sizes = cluster_sizes(g);
        o.largest = sizes.empty() ? 0 : sizes.front();
        if (o.max_degree <= 2)
          for (const auto& c : classify_degree2_components(g))
            ++(c.shape == ComponentShape::Cycle ? o.cycles : o.paths);
        return o;
      });
      Theorem2Row row;
      row.lambda = lambda;
      row.window = L;
      Index crossings = 0;
      double total = 0.0;
      for (const auto& o : runs) {
        crossings += o.cross;
        row.max_degree = std::max(row.max_degree, o.max_degree);
        if (o.max_degree > 2) ++rep.degree_violations;
        total += static_cast<double>(o.largest);
        row.cycles += o.cycles;
        row.paths += o.paths;
      }
      row.crossing = wilson(crossings, mc.replicas);
      row.mean_largest_cluster = total / mc.replicas;
      rep.rows.push_back(row);
    }
    const auto first = rep.rows.end() - static_cast<std::ptrdiff_t>(ws.size());
    const Theorem2Row& small = *first;
    const Theorem2Row& big = rep.rows.back();
    rep.nonincreasing.push_back(big.crossing.value <=
                                small.crossing.value + 2.0 * std::hypot(small.crossing.se, big.crossing.se));
    bool sub = true;
    for (auto it = first; it + 1 != rep.rows.end(); ++it) {
      const double a = it->mean_largest_cluster;
      const double b = (it + 1)->mean_largest_cluster;
      if (a > 0.0 && b / a >= (it + 1)->window / it->window) sub = false;
    }
    rep.sublinear.push_back(sub);
  }
  return rep;
}

Theorem3Report theorem3_experiment(const ModelConfig& model, const std::vector<double>& factors,
                                   const std::vector<double>& windows, const MonteCarlo& mc,
                                   std::optional<LambdaCEstimate> lambda_c) {
  model.validate();
  if (model.measure.kind != DirectingMeasureSpec::Kind::Lebesgue)
    throw std::invalid_argument("theorem3: requires the Lebesgue measure");
  if (model.mu.kind() != PowerDistribution::Kind::Dirac)
    throw std::invalid_argument("theorem3: requires constant powers");
  if (model.dim < 2) throw std::invalid_argument("theorem3: dimension must be >= 2");
  const double p = model.mu.first();
  if (!(p * model.ell.at_zero() > model.tau * model.noise))
    throw std::invalid_argument("theorem3: l(0) must exceed tau N_o / p");
  Theorem3Report rep;
  rep.r_B = connection_radius(model.ell, p, model.tau, model.noise);
  rep.lambda_c = lambda_c ? *lambda_c : estimate_lambda_c_gilbert(model.dim, rep.r_B, windows, mc);
  const double lc = rep.lambda_c.value;
  const double L = largest(windows);
  for (std::size_t f = 0; f < factors.size(); ++f) {
    Theorem3Row row;
    row.factor = factors[f];
    row.lambda = factors[f] * lc;
    const Margin margin = sinr_margin(model, row.lambda, L);
    const auto gc = critical_gammas(model, row.lambda, L, margin.value, derive_seed(mc.seed, "theorem3", f), mc);
    row.at_zero = wilson(count_above(gc, 0.0), mc.replicas);
    if (row.at_zero.value > 0.5) {
      row.gamma_star = gamma_star_from(gc, L, model.tau, nullptr).value;
      row.gamma = row.gamma_star / 4.0;
      const auto fresh =
          critical_gammas(model, row.lambda, L, margin.value, derive_seed(mc.seed, "theorem3-witness", f), mc);
      row.at_gamma = wilson(count_above(fresh, row.gamma), mc.replicas);
      row.witness = row.gamma > 0.0 && row.at_gamma.value > 0.5;
    }
    rep.rows.push_back(row);
  }
  for (const auto& row : rep.rows) {
    if (row.at_zero.value < 0.5) rep.bracket_lo = std::max(rep.bracket_lo, row.lambda);
    if (row.witness) rep.bracket_hi = std::min(rep.bracket_hi, row.lambda);
  }
  rep.stable = lc > 0.0 && rep.lambda_c.spread <= 0.05 * lc;
  rep.bracket_within = rep.bracket_lo < rep.bracket_hi && rep.bracket_lo >= 0.9 * lc && rep.bracket_hi <= 1.1 * lc;
  return rep;
}

SiteFrequencies site_frequencies(const ModelConfig& model, const MarkedConfiguration& config) {
  SiteFrequencies out;
  const double scale = model.connection_scale();
  out.r = std::max(0.9 * scale, model.ell.plateau() * 1.01);
  out.r_o = out.r * std::pow(1.0 / 0.8, 1.0 / model.dim);
  if (out.r_o > model.ell.support_sup() || !(out.r_o > out.r)) return out;
  RenormParams params;
  params.n = 1;
  params.r = out.r;
  params.r_o = out.r_o;
  const double s = params.block_side(BlockVariant::Six);
  const Box obs = config.window.observation();
  std::vector<double> shifted;
  for (double c = obs.lo[0] + s / 2.0; c + s / 2.0 <= obs.hi[0]; c += s) {
    Point x = Point::Zero(model.dim);
    x[0] = c;
    shifted.push_back(interference_at(config, x, {}, model.ell, 6.0 * s));
  }
  if (shifted.empty()) return out;
  std::nth_element(shifted.begin(), shifted.begin() + shifted.size() / 2, shifted.end());
  params.M = std::max(2.0 * shifted[shifted.size() / 2], 1e-12);
  out.M = params.M;
  const double gp = gamma_prime(params.r, params.r_o, params.M, model.sinr(0.0), model.ell);
  const auto scan =
      nice_site_scan(params, config, gp / 2.0, model.sinr(0.0), model.ell, model.measure, BlockVariant::Six);
  out.sites = static_cast<Index>(scan.sites.size());
  if (out.sites == 0) return out;
  for (const auto& f : scan.sites) {
    out.good += f.good;
    out.tame += f.tame;
    out.nice += f.nice;
  }
  out.good /= out.sites;
  out.tame /= out.sites;
  out.nice /= out.sites;
  out.crossing = scan.crossing;
  return out;
}

Theorem1Report theorem1_experiment(const ModelConfig& model, double lambda_start, double L,
                                   const MonteCarlo& mc, int max_doublings) {
  model.validate();
  if (!(lambda_start > 0.0)) throw std::invalid_argument("theorem1: lambda_start must be > 0");
  Theorem1Report rep;
  rep.window = L;
  const bool bounded = model.ell.bounded_support();
  rep.condition = bounded ? "bounded support" : "unbounded support";
  const auto flag = [&](std::string s) { rep.assumption_flags.push_back(std::move(s)); };
  if (model.dim < 2) flag("dimension below 2");
  if (std::isfinite(model.mu.ess_sup())) flag("bounded powers: P_sup is finite");
  if (model.mu.kind() == PowerDistribution::Kind::Pareto) {
    flag("powers lack exponential moments");
    if (model.mu.first() <= model.dim) flag("pareto shape <= d: power moment assumptions violated");
    if (!std::isfinite(model.mu.mean())) flag("infinite mean power");
  }
  using MK = DirectingMeasureSpec::Kind;
  if (!bounded) {
    if (!model.measure.dependence_range()) flag("measure is not b-dependent");
    if (model.measure.kind == MK::Modulated || model.measure.kind == MK::ShotNoise)
      flag("exponential moments of Lambda(Q_1) not verified");
  } else {
    if (model.measure.kind == MK::ShotNoise) flag("asymptotic essential connectedness not verified");
    if (model.measure.kind == MK::Modulated && (model.measure.lambda_in <= 0.0 || model.measure.lambda_out <= 0.0))
      flag("modulated measure with a vanishing level may be disconnected");
  }

  double lambda = lambda_start;
  std::vector<double> gc;
  Margin margin;
  for (int step = 0; step <= max_doublings; ++step, lambda *= 2.0) {
    margin = sinr_margin(model, lambda, L);
    gc = critical_gammas(model, lambda, L, margin.value, derive_seed(mc.seed, "theorem1", step), mc);
    const Estimate zero = wilson(count_above(gc, 0.0), mc.replicas);
    rep.lambda_search.push_back({lambda, zero});
    if (zero.value > 0.5) break;
  }
  rep.margin = margin.value;
  rep.margin_capped = margin.capped;
  rep.lambda = rep.lambda_search.back().first;
  if (rep.lambda_search.back().second.value > 0.5) {
    const double gs = gamma_star_from(gc, L, model.tau, nullptr).value;
    rep.gamma = gs / 4.0;
    const auto fresh = critical_gammas(model, rep.lambda, L, margin.value, derive_seed(mc.seed, "theorem1-witness", 0), mc);
    rep.at_gamma = wilson(count_above(fresh, rep.gamma), mc.replicas);
    rep.witness = rep.gamma > 0.0 && rep.at_gamma.value > 0.5;
    rep.sites = site_frequencies(model, simulate_replica(model, rep.lambda, L, margin.value, replica_seed(mc.seed, 0)));
  }
  return rep;
}

}  // namespace sinrperc
