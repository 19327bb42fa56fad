#include "sinrperc/renorm.hpp"

#include "sinrperc/spatial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sinrperc {

void RenormParams::validate(const PathLoss& ell) const {
  if (n < 1) throw std::invalid_argument("renorm: n must be >= 1");
  if (!(r > ell.plateau())) throw std::invalid_argument("renorm: r must exceed d_o");
  if (!(r_o > r)) throw std::invalid_argument("renorm: r_o must exceed r");
  if (r_o > ell.support_sup()) throw std::invalid_argument("renorm: r_o beyond the support of l");
  if (!(M > 0.0)) throw std::invalid_argument("renorm: M must be > 0");
  if (!(lambda >= 0.0)) throw std::invalid_argument("renorm: lambda must be >= 0");
}

CoupledParams coupled_parameters(double rho, double r, const SinrParams& sinr, const PathLoss& ell,
                                 const PowerDistribution& mu, double rho_ratio) {
  if (!(rho > 0.0)) throw std::invalid_argument("coupled parameters: rho must be > 0");
  if (!(rho_ratio > 0.0 && rho_ratio < 1.0))
    throw std::invalid_argument("coupled parameters: rho'/rho must lie in (0, 1)");
  const int d = ell.dim();
  CoupledParams c;
  c.r = r;
  c.r_o = r * std::pow(1.0 / rho_ratio, 1.0 / d);
  c.power_threshold = minus_threshold(sinr, ell, c.r_o);
  c.survival = mu.survival(c.power_threshold);
  if (!(c.survival > 0.0)) throw std::domain_error("coupled parameters: no power survives the threshold");
  c.lambda = rho_ratio * rho * std::pow(r, -d) / c.survival;
  return c;
}

namespace {

Point site_center(const Site& z, double scale) { return scale * z.cast<double>(); }

// Labels of the Gilbert graph g_r on `pts`.
std::vector<Index> gilbert_labels(const Points& pts, double r) {
  UnionFind uf(pts.cols());
  if (pts.cols() > 1) {
    Box bounds{pts.rowwise().minCoeff(), pts.rowwise().maxCoeff()};
    SpatialGrid grid(pts, bounds, r);
    for (Index i = 0; i < pts.cols(); ++i)
      grid.for_each_neighbor(i, r, [&](Index j) {
        if (j > i) uf.unite(i, j);
      });
  }
  std::vector<Index> labels(pts.cols());
  for (Index i = 0; i < pts.cols(); ++i) labels[i] = uf.find(i);
  return labels;
}

std::vector<Index> points_in(const Points& pts, const Box& box) {
  std::vector<Index> idx;
  for (Index i = 0; i < pts.cols(); ++i)
    if (box.contains(pts.col(i))) idx.push_back(i);
  return idx;
}

Points gather(const Points& pts, const std::vector<Index>& idx) {
  Points out(pts.rows(), static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Index>(k)) = pts.col(idx[k]);
  return out;
}

void require_covered(const Window& window, const Box& box, const char* what) {
  if (!window.buffered().expanded(1e-9 * window.side).encloses(box))
    throw std::out_of_range(std::string(what) + ": evaluation block outside the buffered window");
}

bool diameter_at_least(const Points& pts, const std::vector<Index>& members, double target) {
  if (members.empty()) return false;
  if (target <= 0.0) return true;
  Point lo = pts.col(members[0]);
  Point hi = lo;
  for (Index m : members) {
    lo = lo.cwiseMin(pts.col(m));
    hi = hi.cwiseMax(pts.col(m));
  }
  if ((hi - lo).maxCoeff() >= target) return true;
  if ((hi - lo).norm() < target) return false;
  const double t2 = target * target;
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b)
      if ((pts.col(members[a]) - pts.col(members[b])).squaredNorm() >= t2) return true;
  return false;
}

// Points (configuration indices) of the components of g_r restricted to
// Q_n(nz) with diameter at least n/3.
std::vector<Index> big_components(const Site& z, int n, const Points& pts, double r) {
  const std::vector<Index> inside = points_in(pts, cube(site_center(z, n), n));
  const Points sub = gather(pts, inside);
  const std::vector<Index> labels = gilbert_labels(sub, r);
  std::vector<std::vector<Index>> groups(sub.cols());
  for (Index k = 0; k < sub.cols(); ++k) groups[labels[k]].push_back(k);
  std::vector<Index> out;
  for (const auto& g : groups) {
    if (g.empty() || !diameter_at_least(sub, g, n / 3.0)) continue;
    for (Index k : g) out.push_back(inside[k]);
  }
  return out;
}

}  // namespace

GoodSiteResult good_site(const Site& z, const RenormParams& params, const MarkedConfiguration& thinned,
                         const DirectingMeasureSpec& measure) {
  const double s = params.r * params.n;
  const Point center = site_center(z, s);
  require_covered(thinned.window, cube(center, 6.0 * s), "good_site");
  GoodSiteResult res;
  if (const auto b = measure.dependence_range())
    res.stabilization = *b < s / 2.0 ? Tri::True : Tri::False;

  res.nonempty = !points_in(thinned.points, cube(center, s)).empty();

  const std::vector<Index> outer = points_in(thinned.points, cube(center, 6.0 * s));
  const Points sub = gather(thinned.points, outer);
  const std::vector<Index> labels = gilbert_labels(sub, params.r);
  const Box mid = cube(center, 3.0 * s);
  Index common = -1;
  res.connected = true;
  for (Index k = 0; k < sub.cols(); ++k) {
    if (!mid.contains(sub.col(k))) continue;
    if (common < 0) common = labels[k];
    else if (labels[k] != common) {
      res.connected = false;
      break;
    }
  }
  res.good = res.stabilization != Tri::False && res.nonempty && res.connected;
  return res;
}

InterferenceSplit interference_split(const MarkedConfiguration& config, const Point& x,
                                     double inner_side, const PathLoss& ell, double shift) {
  if (!config.marked) throw std::logic_error("interference split: configuration is not marked");
  const Box inner = cube(x, inner_side);
  InterferenceSplit out{0.0, 0.0};
  for (Index k = 0; k < config.size(); ++k) {
    const double v = config.powers[k] * ell.shifted(shift, (config.points.col(k) - x).norm());
    (inner.contains(config.points.col(k)) ? out.inner : out.outer) += v;
  }
  return out;
}

bool tame_site(const Site& z, const RenormParams& params, const MarkedConfiguration& config,
               const PathLoss& ell, BlockVariant variant) {
  const double s = params.block_side(variant);
  const double shift = (variant == BlockVariant::Six ? 6.0 : 7.0) * s;
  const Point center = site_center(z, s);
  require_covered(config.window, cube(center, shift), "tame_site");
  const double total = interference_at(config, center, {}, ell, shift);
  return total <= params.M;
}

double gamma_prime(double r, double r_o, double M, const SinrParams& sinr, const PathLoss& ell) {
  if (!(r > ell.plateau())) throw std::domain_error("gamma': r must exceed d_o");
  if (!(r_o > r)) throw std::domain_error("gamma': r_o must exceed r");
  if (!(M > 0.0)) throw std::domain_error("gamma': M must be > 0");
  const double lr = ell(r);
  const double lro = ell(r_o);
  if (!(lro > 0.0)) throw std::domain_error("gamma': r_o outside the support of l");
  return lro / (sinr.tau * M) * (lr / lro - 1.0);
}

bool boolean_good_site(const Site& z, int n, const MarkedConfiguration& config, double r) {
  if (n < 1) throw std::invalid_argument("boolean_good_site: n must be >= 1");
  if (!(r > 0.0)) throw std::invalid_argument("boolean_good_site: r must be > 0");
  const Point center = site_center(z, n);
  require_covered(config.window, cube(center, 6.0 * n), "boolean_good_site");
  const std::vector<Index> own = big_components(z, n, config.points, r);
  if (own.empty()) return false;

  std::vector<Index> members = own;
  const int d = config.dim();
  Site off = Site::Constant(d, -1);
  while (true) {
    if (!off.isZero()) {
      const auto other = big_components(z + off, n, config.points, r);
      members.insert(members.end(), other.begin(), other.end());
    }
    int k = 0;
    while (k < d && off[k] == 1) off[k++] = -1;
    if (k == d) break;
    ++off[k];
  }

  const std::vector<Index> outer = points_in(config.points, cube(center, 6.0 * n));
  const std::vector<Index> labels = gilbert_labels(gather(config.points, outer), r);
  std::vector<Index> local(static_cast<std::size_t>(config.size()), -1);
  for (std::size_t k = 0; k < outer.size(); ++k) local[outer[k]] = labels[k];
  const Index common = local[members.front()];
  return std::all_of(members.begin(), members.end(), [&](Index m) { return local[m] == common; });
}

Index SiteScan::nice_count() const {
  return std::count_if(sites.begin(), sites.end(), [](const SiteFlags& f) { return f.nice; });
}

SiteScan nice_site_scan(const RenormParams& params, const MarkedConfiguration& config, double gamma,
                        const SinrParams& sinr, const PathLoss& ell, const DirectingMeasureSpec& measure,
                        BlockVariant variant) {
  params.validate(ell);
  sinr.validate();
  if (!config.marked) throw std::logic_error("site scan: configuration is not marked");
  const int d = config.dim();
  const double s = params.block_side(variant);
  const double reach = (variant == BlockVariant::Six ? 6.0 : 7.0) * s;
  const Box obs = config.window.observation();
  const Box buf = config.window.buffered();

  SiteScan scan;
  scan.gamma = gamma;
  scan.gamma_prime = gamma_prime(params.r, params.r_o, params.M, sinr, ell);
  const double threshold = minus_threshold(sinr, ell, params.r_o);
  scan.gamma_guaranteed = scan.gamma_prime * threshold;
  scan.lo.resize(d);
  scan.hi.resize(d);
  for (int k = 0; k < d; ++k) {
    const double from = std::max(obs.lo[k] + s / 2.0, buf.lo[k] + reach / 2.0);
    const double to = std::min(obs.hi[k] - s / 2.0, buf.hi[k] - reach / 2.0);
    scan.lo[k] = static_cast<int>(std::ceil(from / s - 1e-9));
    scan.hi[k] = static_cast<int>(std::floor(to / s + 1e-9));
  }
  if ((scan.hi.array() < scan.lo.array()).any()) return scan;

  const std::vector<Index> kept = power_survivors(config, threshold);
  const MarkedConfiguration thinned = subset(config, kept);

  Site z = scan.lo;
  while (true) {
    SiteFlags f;
    f.z = z;
    if (variant == BlockVariant::Six) {
      const GoodSiteResult g = good_site(z, params, thinned, measure);
      f.good = g.good;
      f.stabilization = g.stabilization;
    } else {
      f.good = boolean_good_site(z, params.n, thinned, params.r);
    }
    f.tame = tame_site(z, params, config, ell, variant);
    f.nice = f.good && f.tame;
    if (f.nice) {
      const std::vector<Index> local = points_in(thinned.points, cube(site_center(z, s), reach));
      for (std::size_t a = 0; a < local.size(); ++a)
        for (std::size_t b = a + 1; b < local.size(); ++b) {
          const Index i = kept[local[a]];
          const Index j = kept[local[b]];
          if (!(distance(config.points, i, j) < params.r)) continue;
          ++scan.edges_checked;
          const SinrParams at{sinr.tau, sinr.noise, gamma};
          if (!(sinr_value(config, i, j, at, ell) > sinr.tau && sinr_value(config, j, i, at, ell) > sinr.tau))
            ++scan.edges_violated;
        }
    }
    scan.sites.push_back(std::move(f));
    int k = 0;
    while (k < d && z[k] == scan.hi[k]) z[k] = scan.lo[k], ++k;
    if (k == d) break;
    ++z[k];
  }

  // Nearest-neighbour site percolation across axis 0.
  const Index count = static_cast<Index>(scan.sites.size());
  std::vector<Index> stride(d);
  Index total = 1;
  for (int k = 0; k < d; ++k) {
    stride[k] = total;
    total *= scan.hi[k] - scan.lo[k] + 1;
  }
  UnionFind uf(count + 2);
  const Index low = count;
  const Index high = count + 1;
  for (Index flat = 0; flat < count; ++flat) {
    const SiteFlags& f = scan.sites[flat];
    if (!f.nice) continue;
    if (f.z[0] == scan.lo[0]) uf.unite(flat, low);
    if (f.z[0] == scan.hi[0]) uf.unite(flat, high);
    for (int k = 0; k < d; ++k)
      if (f.z[k] < scan.hi[k] && scan.sites[flat + stride[k]].nice) uf.unite(flat, flat + stride[k]);
  }
  scan.crossing = uf.find(low) == uf.find(high);
  return scan;
}

}  // namespace sinrperc
