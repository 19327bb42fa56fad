#include "sinrperc/pointproc.hpp"

#include "sinrperc/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sinrperc {

bool is_nonequidistant(const Points& points, double rel_tol) {
  const Index n = points.cols();
  std::vector<double> dist;
  dist.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) dist.push_back(distance(points, i, j));
  std::sort(dist.begin(), dist.end());
  for (std::size_t k = 1; k < dist.size(); ++k)
    if (dist[k] - dist[k - 1] <= rel_tol * dist[k]) return false;
  return true;
}

namespace {

void check_distinct(const Points& points) {
  const Index n = points.cols();
  std::vector<Index> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  const auto less = [&](Index a, Index b) {
    for (Index k = 0; k < points.rows(); ++k) {
      if (points(k, a) != points(k, b)) return points(k, a) < points(k, b);
    }
    return false;
  };
  std::sort(idx.begin(), idx.end(), less);
  for (Index k = 1; k < n; ++k)
    if (!less(idx[k - 1], idx[k]))
      throw std::runtime_error("configuration: duplicate positions (nonequidistance violated)");
}

}  // namespace

MarkedConfiguration make_configuration(Points points, const Window& window, std::uint64_t seed,
                                       std::string source) {
  if (points.rows() != window.dim())
    throw std::invalid_argument("configuration: point dimension differs from window dimension");
  const Box buf = window.buffered();
  for (Index i = 0; i < points.cols(); ++i)
    if (!buf.contains(points.col(i)))
      throw std::invalid_argument("configuration: point outside the buffered window");
  check_distinct(points);
  MarkedConfiguration c;
  c.window = window;
  c.provenance.seed = seed;
  c.provenance.source = std::move(source);
  if (points.cols() <= kNonequidistanceCheckLimit)
    c.provenance.nonequidistance = is_nonequidistant(points) ? NonequidistanceCheck::Verified
                                                             : NonequidistanceCheck::Violated;
  c.points = std::move(points);
  return c;
}

MarkedConfiguration sample_ppp(double intensity, const Window& window, std::uint64_t seed) {
  if (!(intensity >= 0.0) || !std::isfinite(intensity))
    throw std::invalid_argument("sample_ppp: intensity must be finite and >= 0");
  Rng rng = make_rng(derive_seed(seed, "ppp"));
  const Box buf = window.buffered();
  long n = 0;
  if (intensity > 0.0) {
    std::poisson_distribution<long> count(intensity * buf.volume());
    n = count(rng);
  }
  Points pts(window.dim(), n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (long i = 0; i < n; ++i)
    for (int k = 0; k < window.dim(); ++k) pts(k, i) = buf.lo[k] + u(rng) * (buf.hi[k] - buf.lo[k]);
  return make_configuration(std::move(pts), window, seed, "ppp");
}

MarkedConfiguration sample_cox(const DirectingMeasure& measure, double lambda, std::uint64_t seed) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("sample_cox: lambda must be finite and >= 0");
  const Window& window = measure.window();
  const int d = window.dim();
  const Box buf = window.buffered();
  Rng rng = make_rng(derive_seed(seed, "cox"));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> coords;

  if (lambda > 0.0 && !measure.has_density()) {
    const auto& segs = measure.segments();
    const auto& cum = measure.cumulative_lengths();
    if (!segs.empty()) {
      std::poisson_distribution<long> count(lambda * measure.total_mass());
      const long n = count(rng);
      coords.reserve(static_cast<std::size_t>(n * d));
      for (long i = 0; i < n; ++i) {
        const double target = u(rng) * cum.back();
        std::size_t s = std::upper_bound(cum.begin(), cum.end(), target) - cum.begin();
        s = std::min(s, segs.size() - 1);
        const double t = u(rng);
        const Point x = segs[s].a + t * (segs[s].b - segs[s].a);
        for (int k = 0; k < d; ++k) coords.push_back(std::clamp(x[k], buf.lo[k], buf.hi[k]));
      }
    }
  } else if (lambda > 0.0) {
    // Thinning of a dominating piecewise-constant Poisson process.
    const double cell = measure.spec().kind == DirectingMeasureSpec::Kind::Lebesgue
                            ? (buf.hi[0] - buf.lo[0])
                            : measure.spec().influence_range();
    std::vector<long> counts(d);
    long total = 1;
    for (int k = 0; k < d; ++k) {
      counts[k] = std::max<long>(1, static_cast<long>(std::ceil((buf.hi[k] - buf.lo[k]) / cell)));
      total *= counts[k];
    }
    Point lo(d), hi(d), x(d);
    for (long flat = 0; flat < total; ++flat) {
      long rem = flat;
      for (int k = 0; k < d; ++k) {
        const long ik = rem % counts[k];
        rem /= counts[k];
        const double h = (buf.hi[k] - buf.lo[k]) / static_cast<double>(counts[k]);
        lo[k] = buf.lo[k] + static_cast<double>(ik) * h;
        hi[k] = ik + 1 == counts[k] ? buf.hi[k] : lo[k] + h;
      }
      const Box box{lo, hi};
      const double bound = measure.density_upper_bound(box);
      if (!(bound > 0.0)) continue;
      std::poisson_distribution<long> count(lambda * bound * box.volume());
      const long n = count(rng);
      for (long i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) x[k] = lo[k] + u(rng) * (hi[k] - lo[k]);
        const double accept = u(rng);
        if (accept * bound < measure.density(x))
          for (int k = 0; k < d; ++k) coords.push_back(x[k]);
      }
    }
  }
  const Index n = static_cast<Index>(coords.size()) / d;
  Points pts = Eigen::Map<Points>(coords.data(), d, n);
  auto config = make_configuration(std::move(pts), window, seed, "cox:" + measure.spec().name());
  return config;
}

MarkedConfiguration mark_powers(MarkedConfiguration config, const PowerDistribution& mu,
                                std::uint64_t seed) {
  if (config.marked) throw std::logic_error("mark_powers: configuration already marked");
  Rng rng = make_rng(derive_seed(seed, "marks"));
  config.powers.resize(static_cast<std::size_t>(config.size()));
  for (auto& p : config.powers) p = mu.sample(rng);
  config.marked = true;
  config.provenance.power_law = mu.describe();
  config.provenance.heavy_tail = mu.heavy_tail();
  return config;
}

MarkedConfiguration with_powers(MarkedConfiguration config, std::vector<double> powers) {
  if (static_cast<Index>(powers.size()) != config.size())
    throw std::invalid_argument("with_powers: one power per point required");
  for (double p : powers)
    if (!(p > 0.0)) throw std::invalid_argument("with_powers: powers must be > 0");
  config.powers = std::move(powers);
  config.marked = true;
  config.provenance.power_law = "explicit";
  return config;
}

std::vector<Index> power_survivors(const MarkedConfiguration& config, double threshold) {
  if (!config.marked) throw std::logic_error("thin_by_power: configuration is not marked");
  std::vector<Index> keep;
  for (Index i = 0; i < config.size(); ++i)
    if (config.powers[i] >= threshold) keep.push_back(i);
  return keep;
}

MarkedConfiguration subset(const MarkedConfiguration& config, const std::vector<Index>& keep) {
  MarkedConfiguration out;
  out.window = config.window;
  out.provenance = config.provenance;
  out.marked = config.marked;
  out.points.resize(config.dim(), static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    out.points.col(static_cast<Index>(k)) = config.points.col(keep[k]);
    if (config.marked) out.powers.push_back(config.powers[keep[k]]);
  }
  return out;
}

MarkedConfiguration thin_by_power(const MarkedConfiguration& config, double threshold) {
  return subset(config, power_survivors(config, threshold));
}

double empirical_intensity(const MarkedConfiguration& config, const Box& region) {
  const double vol = region.volume();
  if (!(vol > 0.0)) throw std::invalid_argument("empirical_intensity: zero-volume region");
  Index count = 0;
  for (Index i = 0; i < config.size(); ++i)
    if (region.contains(config.points.col(i))) ++count;
  return static_cast<double>(count) / vol;
}

}  // namespace sinrperc
