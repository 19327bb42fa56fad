#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sinrperc/measure.hpp"
#include "sinrperc/pointproc.hpp"
#include "sinrperc/voronoi.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>

using namespace sinrperc;
using sinrperc::test::mean_se;

TEST_CASE("window invariants") {
  CHECK_THROWS(Window(Point::Zero(2), 0.0, 1.0));
  CHECK_THROWS(Window(Point::Zero(2), 1.0, -1.0));
  CHECK_THROWS(Window(Point::Zero(0), 1.0, 0.0));
  const Window w = Window::centered(3, 4.0, 1.0);
  CHECK(w.buffered().volume() == doctest::Approx(216.0));
  CHECK(w.observation().volume() == doctest::Approx(64.0));
}

TEST_CASE("lebesgue measure has unit density") {
  const Window w = Window::centered(2, 10.0, 2.0);
  const auto m = build_directing_measure(DirectingMeasureSpec::lebesgue(), w, 1);
  CHECK(m.total_mass() == doctest::Approx(196.0));
  CHECK(m.density(Point::Zero(2)) == 1.0);
  CHECK(m.mass(cube(Point::Zero(2), 3.0)) == doctest::Approx(9.0));
  CHECK_THROWS(m.mass(cube(Point::Zero(2), 30.0)));
}

TEST_CASE("modulated measure with equal levels is flat") {
  const auto spec = calibrate_normalization(DirectingMeasureSpec::modulated(3.0, 3.0, 0.5, 1.0), 2, 4);
  const auto m = build_directing_measure(spec, Window::centered(2, 10.0, 1.0), 9);
  for (double x : {-5.0, -1.3, 0.0, 2.2, 5.9}) CHECK(m.density(Point::Constant(2, x)) == doctest::Approx(1.0));
}

TEST_CASE("shot-noise density is a deterministic function of the nuclei") {
  Kernel k;
  k.shape = Kernel::Shape::Bump;
  k.radius = 1.5;
  const auto spec = DirectingMeasureSpec::shot_noise(0.7, k);
  const auto a = build_directing_measure(spec, Window::centered(2, 8.0, 1.0), 5);
  const auto b = build_directing_measure(spec, Window::centered(2, 8.0, 1.0), 5);
  CHECK(a.nuclei() == b.nuclei());
  for (int i = 0; i < 20; ++i) {
    const Point x = Point::Constant(2, -4.0 + 0.4 * i);
    CHECK(a.density(x) == a.density(x));
    CHECK(a.density(x) == b.density(x));
    CHECK(a.density(x) >= 0.0);
  }
}

TEST_CASE("voronoi edge length per unit area is 2 sqrt(kappa)") {
  for (double kappa : {1.0, 4.0}) {
    std::vector<double> per_area;
    for (int s = 0; s < 100; ++s) {
      const auto m = build_directing_measure(DirectingMeasureSpec::voronoi_edge(kappa), Window::centered(2, 20.0, 0.0), s);
      per_area.push_back(m.total_mass() / 400.0);
      for (const auto& seg : m.segments()) CHECK(seg.length() > 0.0);
    }
    const auto ms = mean_se(per_area);
    CHECK(std::abs(ms.mean - 2.0 * std::sqrt(kappa)) < 3.0 * ms.se + 1e-9);
  }
}

TEST_CASE("voronoi normalization targets unit mass per unit area") {
  const auto spec = calibrate_normalization(DirectingMeasureSpec::voronoi_edge(1.0), 2, 77);
  CHECK(spec.normalization == doctest::Approx(0.5).epsilon(0.02));
  std::vector<double> per_area;
  for (int s = 0; s < 10; ++s) {
    const auto m = build_directing_measure(spec, Window::centered(2, 100.0, 0.0), 1000 + s);
    CHECK(m.boundary_suspect_cells() == 0);
    per_area.push_back(m.total_mass() / 1e4);
  }
  const auto ms = mean_se(per_area);
  CHECK(std::abs(ms.mean - 1.0) < 3.0 * ms.se + 0.01);
}

TEST_CASE("voronoi skeleton of two nuclei is their bisector") {
  const auto sk = voronoi_skeleton(test::pts2({{-1.0, 0.0}, {1.0, 0.0}}), cube(Point::Zero(2), 4.0));
  REQUIRE(sk.edges.size() == 1);
  CHECK(sk.edges[0].length() == doctest::Approx(4.0));
  CHECK(std::abs(sk.edges[0].a[0]) < 1e-12);
}

TEST_CASE("invalid measure specs are rejected") {
  CHECK_THROWS(DirectingMeasureSpec::voronoi_edge(0.0).validate(2));
  CHECK_THROWS(DirectingMeasureSpec::voronoi_edge(1.0).validate(3));
}

TEST_CASE("ppp counts") {
  CHECK(sample_ppp(0.0, Window::centered(2, 10.0), 1).size() == 0);
  CHECK_THROWS(sample_ppp(-1.0, Window::centered(2, 10.0), 1));

  const Window w = Window::centered(2, std::sqrt(50.0), 0.0);
  std::vector<double> counts;
  for (int s = 0; s < 1000; ++s) counts.push_back(static_cast<double>(sample_ppp(2.0, w, s).size()));
  const auto ms = mean_se(counts);
  CHECK(std::abs(ms.mean - 100.0) < 3.0 * std::sqrt(100.0 / 1000.0));
  CHECK(std::abs(ms.se * ms.se * 1000.0 - 100.0) < 15.0);

  const auto a = sample_ppp(2.0, w, 42);
  const auto b = sample_ppp(2.0, w, 42);
  CHECK(a.points == b.points);
}

TEST_CASE("cox with lebesgue measure matches ppp counts") {
  const Window w = Window::centered(2, 5.0, 1.0);
  const auto leb = DirectingMeasureSpec::lebesgue();
  std::vector<double> ppp, cox;
  for (int s = 0; s < 1000; ++s) {
    ppp.push_back(static_cast<double>(sample_ppp(1.5, w, s).size()));
    cox.push_back(static_cast<double>(sample_cox(build_directing_measure(leb, w, 5000 + s), 1.5, 5000 + s).size()));
  }
  // Two-sample Kolmogorov-Smirnov at the 1% level.
  std::vector<double> all = ppp;
  all.insert(all.end(), cox.begin(), cox.end());
  std::sort(ppp.begin(), ppp.end());
  std::sort(cox.begin(), cox.end());
  double ks = 0.0;
  for (double t : all) {
    const double fa = (std::upper_bound(ppp.begin(), ppp.end(), t) - ppp.begin()) / 1000.0;
    const double fb = (std::upper_bound(cox.begin(), cox.end(), t) - cox.begin()) / 1000.0;
    ks = std::max(ks, std::abs(fa - fb));
  }
  CHECK(ks < 1.628 * std::sqrt(2.0 / 1000.0));
  CHECK(sample_cox(build_directing_measure(leb, w, 1), 0.0, 1).size() == 0);
}

TEST_CASE("cox points on a voronoi skeleton lie on segments") {
  const auto m = build_directing_measure(DirectingMeasureSpec::voronoi_edge(1.0), Window::centered(2, 10.0, 1.0), 3);
  const auto c = sample_cox(m, 5.0, 3);
  REQUIRE(c.size() > 0);
  for (Index i = 0; i < c.size(); ++i) {
    double best = 1e300;
    for (const auto& s : m.segments()) best = std::min(best, point_segment_distance(c.points.col(i), s.a, s.b));
    CHECK(best < 1e-9);
  }
}

TEST_CASE("cox with a density follows it") {
  // Modulated measure: inside the balls the density is lambda_in / lambda_out times larger.
  const auto spec = calibrate_normalization(DirectingMeasureSpec::modulated(4.0, 1.0, 0.1, 1.5), 2, 8);
  double in = 0.0, out = 0.0, vol_in = 0.0, vol_out = 0.0;
  for (int s = 0; s < 40; ++s) {
    const auto m = build_directing_measure(spec, Window::centered(2, 20.0, 0.0), s);
    const auto c = sample_cox(m, 2.0, s);
    for (Index i = 0; i < c.size(); ++i) (m.density(c.points.col(i)) > 1.5 * spec.normalization ? in : out) += 1.0;
    for (int gx = 0; gx < 100; ++gx)
      for (int gy = 0; gy < 100; ++gy) {
        Point x(2);
        x << -10.0 + 0.2 * (gx + 0.5), -10.0 + 0.2 * (gy + 0.5);
        (m.density(x) > 1.5 * spec.normalization ? vol_in : vol_out) += 0.04;
      }
  }
  REQUIRE(vol_in > 0.0);
  REQUIRE(vol_out > 0.0);
  CHECK((in / vol_in) / (out / vol_out) == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("power marks") {
  const Window w = Window::centered(2, 10.0, 0.0);
  const auto c = mark_powers(sample_ppp(1.0, w, 1), PowerDistribution::dirac(1.0), 1);
  CHECK(std::all_of(c.powers.begin(), c.powers.end(), [](double p) { return p == 1.0; }));
  CHECK_THROWS(mark_powers(c, PowerDistribution::dirac(1.0), 2));

  const auto big = mark_powers(sample_ppp(1000.0, w, 2), PowerDistribution::exponential(1.0), 2);
  REQUIRE(big.size() > 90000);
  std::vector<double> p(big.powers.begin(), big.powers.end());
  const auto ms = mean_se(p);
  CHECK(std::abs(ms.mean - 1.0) < 3.0 * ms.se);

  const auto heavy = mark_powers(sample_ppp(1.0, w, 3), PowerDistribution::pareto(1.5, 1.0), 3);
  CHECK(heavy.provenance.heavy_tail);
  CHECK_FALSE(big.provenance.heavy_tail);
}

TEST_CASE("thinning by power") {
  const Window w = Window::centered(2, 10.0, 0.0);
  const auto c = mark_powers(sample_ppp(1.0, w, 1), PowerDistribution::dirac(1.0), 1);
  CHECK(thin_by_power(c, 0.5).size() == c.size());
  CHECK(thin_by_power(c, 2.0).size() == 0);

  const auto big = mark_powers(sample_ppp(1000.0, w, 5), PowerDistribution::exponential(1.0), 5);
  for (double t : {0.5, 1.0, 2.0}) {
    const double n = static_cast<double>(big.size());
    const double p = std::exp(-t);
    const double kept = static_cast<double>(thin_by_power(big, t).size()) / n;
    CHECK(std::abs(kept - p) < 3.0 * std::sqrt(p * (1.0 - p) / n));
  }

  // Retention is independent of position: 2x2 contingency over quadrants.
  double table[4][2] = {};
  for (Index i = 0; i < big.size(); ++i) {
    const int q = (big.points(0, i) > 0) + 2 * (big.points(1, i) > 0);
    table[q][big.powers[i] >= 1.0] += 1.0;
  }
  double rows[4] = {}, cols[2] = {}, total = 0.0;
  for (int q = 0; q < 4; ++q)
    for (int k = 0; k < 2; ++k) rows[q] += table[q][k], cols[k] += table[q][k], total += table[q][k];
  double chi2 = 0.0;
  for (int q = 0; q < 4; ++q)
    for (int k = 0; k < 2; ++k) {
      const double e = rows[q] * cols[k] / total;
      chi2 += (table[q][k] - e) * (table[q][k] - e) / e;
    }
  CHECK(chi2 < 11.345);
}

TEST_CASE("empirical intensity") {
  const Window w = Window::centered(2, 10.0, 0.0);
  const auto empty = sample_ppp(0.0, w, 1);
  CHECK(empirical_intensity(empty, w.observation()) == 0.0);
  CHECK_THROWS(empirical_intensity(empty, Box{Point::Zero(2), Point::Zero(2)}));

  std::vector<double> dens, thinned;
  for (int s = 0; s < 200; ++s) {
    const auto c = mark_powers(sample_ppp(3.0, w, s), PowerDistribution::exponential(1.0), s);
    dens.push_back(empirical_intensity(c, w.observation()));
    thinned.push_back(empirical_intensity(thin_by_power(c, 0.7), w.observation()));
  }
  const auto a = mean_se(dens);
  CHECK(std::abs(a.mean - 3.0) < 3.0 * a.se);
  const auto b = mean_se(thinned);
  CHECK(std::abs(b.mean - 3.0 * std::exp(-0.7)) < 3.0 * b.se);
}

TEST_CASE("nonequidistance") {
  CHECK(is_nonequidistant(test::pts2({{0, 0}, {1, 0}, {0, 2.5}})));
  CHECK_FALSE(is_nonequidistant(test::pts2({{0, 0}, {1, 0}, {0, 1}})));
  const Window w = Window::centered(2, 10.0, 0.0);
  CHECK_THROWS(make_configuration(test::pts2({{0, 0}, {0, 0}}), w, 0));
  CHECK_THROWS(make_configuration(test::pts2({{0, 0}, {6, 0}}), w, 0));
  const auto lattice = make_configuration(test::pts2({{0, 0}, {1, 0}, {0, 1}}), w, 0);
  CHECK(lattice.provenance.nonequidistance == NonequidistanceCheck::Violated);
  const auto c = sample_ppp(2.0, w, 11);
  CHECK(c.provenance.nonequidistance == NonequidistanceCheck::Verified);
}
