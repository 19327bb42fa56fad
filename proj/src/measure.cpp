#include "sinrperc/measure.hpp"

#include "sinrperc/random.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sinrperc {

double Kernel::operator()(double dist) const {
  if (dist >= radius) return 0.0;
  if (shape == Shape::Ball) return height;
  const double u = dist / radius;
  return height * (1.0 - u * u);
}

double Kernel::integral(int dim) const {
  const double ball = unit_ball_volume(dim) * std::pow(radius, dim);
  if (shape == Shape::Ball) return height * ball;
  return height * ball * 2.0 / (dim + 2.0);
}

DirectingMeasureSpec DirectingMeasureSpec::lebesgue() { return {}; }

DirectingMeasureSpec DirectingMeasureSpec::modulated(double lambda_in, double lambda_out,
                                                     double nucleus_intensity,
                                                     double ball_radius) {
  DirectingMeasureSpec s;
  s.kind = Kind::Modulated;
  s.lambda_in = lambda_in;
  s.lambda_out = lambda_out;
  s.nucleus_intensity = nucleus_intensity;
  s.ball_radius = ball_radius;
  return s;
}

DirectingMeasureSpec DirectingMeasureSpec::shot_noise(double nucleus_intensity, Kernel kernel) {
  DirectingMeasureSpec s;
  s.kind = Kind::ShotNoise;
  s.nucleus_intensity = nucleus_intensity;
  s.kernel = kernel;
  return s;
}

DirectingMeasureSpec DirectingMeasureSpec::voronoi_edge(double nucleus_intensity) {
  DirectingMeasureSpec s;
  s.kind = Kind::VoronoiEdge;
  s.nucleus_intensity = nucleus_intensity;
  return s;
}

void DirectingMeasureSpec::validate(int dim) const {
  if (dim < 1) throw std::invalid_argument("measure: dimension must be >= 1");
  if (!(normalization > 0.0) || !std::isfinite(normalization))
    throw std::invalid_argument("measure: normalization must be > 0");
  switch (kind) {
    case Kind::Lebesgue:
      break;
    case Kind::Modulated:
      if (!(lambda_in >= 0.0) || !(lambda_out >= 0.0))
        throw std::invalid_argument("measure: modulated rates must be >= 0");
      if (lambda_in == 0.0 && lambda_out == 0.0)
        throw std::invalid_argument("measure: modulated rates are both zero");
      if (!(nucleus_intensity >= 0.0))
        throw std::invalid_argument("measure: nucleus intensity must be >= 0");
      if (!(ball_radius > 0.0) || !std::isfinite(ball_radius))
        throw std::invalid_argument("measure: ball radius must be finite and > 0");
      break;
    case Kind::ShotNoise:
      if (!(nucleus_intensity >= 0.0))
        throw std::invalid_argument("measure: nucleus intensity must be >= 0");
      if (!(kernel.radius > 0.0) || !std::isfinite(kernel.radius))
        throw std::invalid_argument("measure: kernel support radius must be finite and > 0");
      if (!(kernel.height > 0.0)) throw std::invalid_argument("measure: kernel height must be > 0");
      break;
    case Kind::VoronoiEdge:
      if (dim != 2) throw std::invalid_argument("measure: voronoi-edge requires dimension 2");
      if (!(nucleus_intensity > 0.0))
        throw std::invalid_argument("measure: voronoi nucleus intensity must be > 0");
      break;
  }
}

std::optional<double> DirectingMeasureSpec::dependence_range() const {
  switch (kind) {
    case Kind::Lebesgue:
      return 0.0;
    case Kind::Modulated:
      return 2.0 * ball_radius;
    case Kind::ShotNoise:
      return 2.0 * kernel.radius;
    case Kind::VoronoiEdge:
      return std::nullopt;
  }
  return std::nullopt;
}

double DirectingMeasureSpec::influence_range() const {
  switch (kind) {
    case Kind::Lebesgue:
      return 0.0;
    case Kind::Modulated:
      return ball_radius;
    case Kind::ShotNoise:
      return kernel.radius;
    case Kind::VoronoiEdge:
      return 6.0 / std::sqrt(nucleus_intensity);
  }
  return 0.0;
}

double DirectingMeasureSpec::feature_scale(int dim) const {
  switch (kind) {
    case Kind::Lebesgue:
      return 1.0;
    case Kind::Modulated:
      return std::max(ball_radius, nucleus_intensity > 0 ? std::pow(nucleus_intensity, -1.0 / dim) : 0.0);
    case Kind::ShotNoise:
      return std::max(kernel.radius, nucleus_intensity > 0 ? std::pow(nucleus_intensity, -1.0 / dim) : 0.0);
    case Kind::VoronoiEdge:
      return 1.0 / std::sqrt(nucleus_intensity);
  }
  return 1.0;
}

std::string DirectingMeasureSpec::name() const {
  switch (kind) {
    case Kind::Lebesgue:
      return "lebesgue";
    case Kind::Modulated:
      return "modulated";
    case Kind::ShotNoise:
      return "shot-noise";
    case Kind::VoronoiEdge:
      return "voronoi-edge";
  }
  return "?";
}

struct DirectingMeasure::Payload {
  Points nuclei;
  std::unique_ptr<SpatialGrid> grid;
  std::vector<Segment> segments;
  std::vector<double> cumulative;
};

namespace {

Points sample_uniform_points(double intensity, const Box& box, Rng& rng) {
  std::poisson_distribution<long> count(intensity * box.volume());
  const long n = intensity > 0.0 ? count(rng) : 0;
  Points pts(box.dim(), n);
  for (long i = 0; i < n; ++i)
    for (int k = 0; k < box.dim(); ++k) {
      std::uniform_real_distribution<double> u(box.lo[k], box.hi[k]);
      pts(k, i) = u(rng);
    }
  return pts;
}

constexpr double kMaxIntegrationCells = 1.0e6;

}  // namespace

double DirectingMeasure::density(const Point& x) const {
  if (!has_density()) throw std::logic_error("measure: skeleton payload has no density");
  const double c = spec_.normalization;
  switch (spec_.kind) {
    case DirectingMeasureSpec::Kind::Lebesgue:
      return c;
    case DirectingMeasureSpec::Kind::Modulated: {
      bool inside = false;
      if (payload_->grid)
        payload_->grid->for_each_within(x, spec_.ball_radius, [&](Index) { inside = true; });
      return c * (inside ? spec_.lambda_in : spec_.lambda_out);
    }
    case DirectingMeasureSpec::Kind::ShotNoise: {
      double sum = 0.0;
      if (payload_->grid)
        payload_->grid->for_each_within(x, spec_.kernel.radius, [&](Index j) {
          sum += spec_.kernel((payload_->nuclei.col(j) - x).norm());
        });
      return c * sum;
    }
    default:
      return 0.0;
  }
}

double DirectingMeasure::density_upper_bound(const Box& cell) const {
  const double c = spec_.normalization;
  const Point mid = 0.5 * (cell.lo + cell.hi);
  const double half_diag = 0.5 * (cell.hi - cell.lo).norm();
  switch (spec_.kind) {
    case DirectingMeasureSpec::Kind::Lebesgue:
      return c;
    case DirectingMeasureSpec::Kind::Modulated: {
      if (spec_.lambda_in == spec_.lambda_out) return c * spec_.lambda_in;
      bool covered = false;
      bool touched = false;
      if (payload_->grid)
        payload_->grid->for_each_within(mid, spec_.ball_radius + half_diag, [&](Index j) {
          touched = true;
          if ((payload_->nuclei.col(j) - mid).norm() + half_diag <= spec_.ball_radius) covered = true;
        });
      if (covered) return c * spec_.lambda_in;
      if (!touched) return c * spec_.lambda_out;
      return c * std::max(spec_.lambda_in, spec_.lambda_out);
    }
    case DirectingMeasureSpec::Kind::ShotNoise: {
      long count = 0;
      if (payload_->grid)
        payload_->grid->for_each_within(mid, spec_.kernel.radius + half_diag, [&](Index) { ++count; });
      return c * spec_.kernel.height * static_cast<double>(count);
    }
    default:
      throw std::logic_error("measure: skeleton payload has no density");
  }
}

const std::vector<Segment>& DirectingMeasure::segments() const { return payload_->segments; }

const std::vector<double>& DirectingMeasure::cumulative_lengths() const {
  return payload_->cumulative;
}

const Points& DirectingMeasure::nuclei() const { return payload_->nuclei; }

double DirectingMeasure::mass(const Box& region) const {
  const Box buf = window_.buffered();
  if (!buf.expanded(1e-9 * (1.0 + window_.side)).encloses(region))
    throw std::invalid_argument("measure: region outside the buffered window");
  const double c = spec_.normalization;
  if (spec_.kind == DirectingMeasureSpec::Kind::Lebesgue) return c * region.volume();
  if (!has_density()) {
    double total = 0.0;
    for (const auto& s : payload_->segments) {
      Point a = s.a;
      Point b = s.b;
      if (clip_segment(region, a, b)) total += (b - a).norm();
    }
    return c * total;
  }
  if (spec_.kind == DirectingMeasureSpec::Kind::Modulated && spec_.lambda_in == spec_.lambda_out)
    return c * spec_.lambda_in * region.volume();
  const int d = region.dim();
  double step = step_;
  const double cells = region.volume() / std::pow(step, d);
  if (cells > kMaxIntegrationCells) step *= std::pow(cells / kMaxIntegrationCells, 1.0 / d);
  std::vector<long> counts(d);
  Point h(d);
  long total_cells = 1;
  for (int k = 0; k < d; ++k) {
    counts[k] = std::max<long>(1, static_cast<long>(std::ceil((region.hi[k] - region.lo[k]) / step)));
    h[k] = (region.hi[k] - region.lo[k]) / static_cast<double>(counts[k]);
    total_cells *= counts[k];
  }
  double sum = 0.0;
  Point x(d);
  for (long flat = 0; flat < total_cells; ++flat) {
    long rem = flat;
    for (int k = 0; k < d; ++k) {
      const long ik = rem % counts[k];
      rem /= counts[k];
      x[k] = region.lo[k] + (static_cast<double>(ik) + 0.5) * h[k];
    }
    sum += density(x);
  }
  return sum * h.prod();
}

DirectingMeasure build_directing_measure(const DirectingMeasureSpec& spec, const Window& window,
                                         std::uint64_t seed) {
  const int d = window.dim();
  spec.validate(d);
  DirectingMeasure out;
  out.spec_ = spec;
  out.window_ = window;
  auto payload = std::make_shared<DirectingMeasure::Payload>();
  Rng rng = make_rng(derive_seed(seed, "measure/nuclei"));
  const Box buf = window.buffered();

  switch (spec.kind) {
    case DirectingMeasureSpec::Kind::Lebesgue:
      out.step_ = 0.0;
      break;
    case DirectingMeasureSpec::Kind::Modulated:
    case DirectingMeasureSpec::Kind::ShotNoise: {
      const double reach = spec.influence_range();
      const Box region = buf.expanded(reach);
      payload->nuclei = sample_uniform_points(spec.nucleus_intensity, region, rng);
      payload->grid = std::make_unique<SpatialGrid>(payload->nuclei, region, reach);
      out.step_ = reach / 8.0;
      break;
    }
    case DirectingMeasureSpec::Kind::VoronoiEdge: {
      const Box region = buf.expanded(spec.influence_range());
      payload->nuclei = sample_uniform_points(spec.nucleus_intensity, region, rng);
      VoronoiSkeleton sk = voronoi_skeleton(payload->nuclei, region);
      for (std::size_t i = 0; i < sk.touches_domain.size(); ++i) {
        if (!sk.touches_domain[i]) continue;
        const Box& cb = sk.cell_bounds[i];
        const bool overlaps = (cb.lo.array() <= buf.hi.array()).all() &&
                              (cb.hi.array() >= buf.lo.array()).all();
        if (overlaps) ++out.suspect_;
      }
      double running = 0.0;
      for (auto& s : sk.edges) {
        if (!clip_segment(buf, s.a, s.b)) continue;
        const double len = s.length();
        if (!(len > 0.0)) continue;
        running += len;
        payload->cumulative.push_back(running);
        payload->segments.push_back(std::move(s));
      }
      break;
    }
  }
  out.payload_ = std::move(payload);
  if (spec.kind == DirectingMeasureSpec::Kind::VoronoiEdge)
    out.total_mass_ = spec.normalization *
                      (out.payload_->cumulative.empty() ? 0.0 : out.payload_->cumulative.back());
  else
    out.total_mass_ = out.mass(buf);
  return out;
}

double mean_raw_intensity(const DirectingMeasureSpec& spec, int dim, std::uint64_t seed,
                          int replicas, double side) {
  if (replicas < 1) throw std::invalid_argument("calibration: replicas must be >= 1");
  DirectingMeasureSpec raw = spec;
  raw.normalization = 1.0;
  if (!(side > 0.0)) side = std::max(20.0, 10.0 * raw.feature_scale(dim));
  const Window w = Window::centered(dim, side, 0.0);
  double sum = 0.0;
  for (int r = 0; r < replicas; ++r) {
    const DirectingMeasure m = build_directing_measure(raw, w, derive_seed(seed, "calibration", r));
    sum += m.total_mass() / w.buffered().volume();
  }
  return sum / replicas;
}

DirectingMeasureSpec calibrate_normalization(DirectingMeasureSpec spec, int dim, std::uint64_t seed,
                                             int replicas, double side) {
  const double mean = mean_raw_intensity(spec, dim, seed, replicas, side);
  if (!(mean > 0.0)) throw std::runtime_error("calibration: directing measure has zero mean mass");
  spec.normalization = 1.0 / mean;
  return spec;
}

}  // namespace sinrperc
