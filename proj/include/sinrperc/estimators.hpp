#pragma once

#include "sinrperc/measure.hpp"
#include "sinrperc/pathloss.hpp"
#include "sinrperc/pointproc.hpp"
#include "sinrperc/power.hpp"
#include "sinrperc/renorm.hpp"
#include "sinrperc/sinr.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sinrperc {

struct ModelConfig {
  int dim = 2;
  DirectingMeasureSpec measure = DirectingMeasureSpec::lebesgue();
  PowerDistribution mu = PowerDistribution::dirac(1.0);
  PathLoss ell = PathLoss::power_law(0.5, 6.0, 2);
  double tau = 1.0;
  double noise = 1.0 / 64.0;

  void validate() const;
  /// Connection radius l^{-1}(tau N_o / P) at the typical power (the mean, or
  /// the median when the mean is infinite).
  double connection_scale() const;
  SinrParams sinr(double gamma) const { return {tau, noise, gamma}; }
};

/// Calibrates the measure normalization unless the measure is Lebesgue.
ModelConfig prepare_model(ModelConfig model, std::uint64_t seed);

struct Margin {
  double value = 0.0;
  /// The interference-tail criterion could not be met below the cap.
  bool capped = false;
};

/// Buffer width around the observation window; interference is summed up to
/// this distance. Bounded l: its support radius or five connection scales,
/// whichever is larger. Unbounded l: the smallest m
/// with lambda E[P] |S^{d-1}| int_m^inf s^{d-1} l(s) ds < tol N_o.
Margin sinr_margin(const ModelConfig& model, double lambda, double cap, double tol = 1e-3);

struct MonteCarlo {
  Index replicas = 200;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct Estimate {
  double value = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  Index successes = 0;
  Index replicas = 0;
  double se = 0.0;
};

/// Fraction with a 95% Wilson interval and binomial standard error.
Estimate wilson(Index successes, Index replicas, double z = 1.959963984540054);

std::uint64_t replica_seed(std::uint64_t master, Index k);

/// One marked Cox configuration on the window of side L buffered by `margin`.
MarkedConfiguration simulate_replica(const ModelConfig& model, double lambda, double L, double margin,
                                     std::uint64_t seed);

/// Infimum of the gammas at which no observed cluster crosses axis 0:
/// crossing at gamma iff gamma < result. -inf when even gamma = 0 does not
/// cross.
double replica_critical_gamma(const MarkedConfiguration& config, const ModelConfig& model, double touch,
                              double cutoff);

/// Points of a Poisson process of intensity lambda_max on the observation box
/// carry independent uniform labels; keeping labels <= lambda / lambda_max
/// gives intensity lambda. Returns the least lambda at which the Gilbert graph
/// of radius r crosses axis 0 (+inf if never below lambda_max).
double replica_critical_lambda_gilbert(int dim, double r, double L, double lambda_max, std::uint64_t seed);

/// Crossing probability of G_gamma at intensity lambda on window L.
Estimate crossing_probability(const ModelConfig& model, double lambda, double gamma, double L,
                              const MonteCarlo& mc);

struct SweepPoint {
  double lambda = 0.0;
  double gamma = 0.0;
  Estimate crossing;
};

struct SweepResult {
  double window = 0.0;
  double margin = 0.0;
  std::vector<SweepPoint> points;
};

/// Crossing probabilities over a lambda x gamma grid. Each lambda reuses one
/// set of replicas for all gammas, so estimates are pointwise nonincreasing
/// in gamma.
SweepResult crossing_sweep(const ModelConfig& model, const std::vector<double>& lambdas,
                           const std::vector<double>& gammas, double L, const MonteCarlo& mc);

/// Gilbert crossing probability at radius r.
Estimate gilbert_crossing_probability(int dim, double r, double lambda, double L, const MonteCarlo& mc);

struct WindowEstimate {
  double window = 0.0;
  double value = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  Index replicas = 0;
  int iterations = 0;
  /// Crossing probability at gamma = 0 (gamma-star only).
  double at_zero = 0.0;
};

/// Smallest x in [lo, hi] with f(x) >= target for nondecreasing f, by
/// bisection: at most 20 halvings or until the bracket is below 1e-3 relative.
struct Bisection {
  double value;
  int iterations;
};
template <typename Fn>
Bisection bisect_up(Fn&& f, double lo, double hi, double target);

struct LambdaCEstimate {
  double r = 0.0;
  std::vector<WindowEstimate> windows;
  double value = 0.0;   // largest window
  double spread = 0.0;  // max - min over windows
};

/// lambda_c(r) of the Gilbert graph: crossing probability 0.5 per window.
/// Throws std::runtime_error when the crossing probability does not
/// straddle 0.5 over the searched range.
LambdaCEstimate estimate_lambda_c_gilbert(int dim, double r, const std::vector<double>& windows,
                                          const MonteCarlo& mc);

struct GammaStarEstimate {
  double lambda = 0.0;
  std::vector<WindowEstimate> windows;
  double value = 0.0;
  double spread = 0.0;
  /// No crossing at gamma = 0 on the largest window; value is 0.
  bool subcritical = false;
  /// Crossing probability stays above 0.5 up to the search cap.
  bool unbounded = false;
  /// (gamma, crossing probability) at the largest window.
  std::vector<std::pair<double, double>> profile;
};

GammaStarEstimate estimate_gamma_star(const ModelConfig& model, double lambda,
                                      const std::vector<double>& windows, const MonteCarlo& mc);

struct Theorem2Row {
  double lambda = 0.0;
  double window = 0.0;
  Estimate crossing;
  Index max_degree = 0;
  double mean_largest_cluster = 0.0;
  Index cycles = 0;
  Index paths = 0;
};

struct Theorem2Report {
  double gamma = 0.0;
  std::vector<Theorem2Row> rows;
  Index degree_violations = 0;
  /// Per lambda: crossing(L_max) <= crossing(L_min) + 2 combined SE.
  std::vector<bool> nonincreasing;
  /// Per lambda: ratio of mean largest clusters below the window ratio.
  std::vector<bool> sublinear;
};

/// gamma defaults to 1/(2 tau).
Theorem2Report theorem2_experiment(const ModelConfig& model, const std::vector<double>& lambdas,
                                   const std::vector<double>& windows, const MonteCarlo& mc,
                                   std::optional<double> gamma = std::nullopt);

struct Theorem3Row {
  double factor = 0.0;
  double lambda = 0.0;
  Estimate at_zero;
  double gamma_star = 0.0;
  /// gamma > 0 tried as a witness and its crossing probability on fresh seeds.
  double gamma = 0.0;
  Estimate at_gamma;
  bool witness = false;
};

struct Theorem3Report {
  double r_B = 0.0;
  LambdaCEstimate lambda_c;
  std::vector<Theorem3Row> rows;
  /// Largest lambda without crossing at gamma = 0, smallest with a witness.
  double bracket_lo = 0.0;
  double bracket_hi = std::numeric_limits<double>::infinity();
  bool stable = false;           // spread / value <= 5%
  bool bracket_within = false;   // bracket inside +-10% of lambda_c
};

/// Requires Lebesgue measure and Dirac powers. Reuses `lambda_c` when given.
Theorem3Report theorem3_experiment(const ModelConfig& model, const std::vector<double>& factors,
                                   const std::vector<double>& windows, const MonteCarlo& mc,
                                   std::optional<LambdaCEstimate> lambda_c = std::nullopt);

struct SiteFrequencies {
  Index sites = 0;
  double good = 0.0;
  double tame = 0.0;
  double nice = 0.0;
  bool crossing = false;
  double M = 0.0;
  double r = 0.0;
  double r_o = 0.0;
};

struct Theorem1Report {
  std::string condition;
  std::vector<std::string> assumption_flags;
  double window = 0.0;
  double margin = 0.0;
  bool margin_capped = false;
  /// (lambda, crossing probability at gamma = 0) visited by the search.
  std::vector<std::pair<double, Estimate>> lambda_search;
  double lambda = 0.0;
  double gamma = 0.0;
  Estimate at_gamma;
  bool witness = false;
  std::optional<SiteFrequencies> sites;
};

/// Doubles lambda from lambda_start until G_0 crosses with probability above
/// 0.5, then looks for gamma > 0 keeping it above 0.5 on fresh seeds.
Theorem1Report theorem1_experiment(const ModelConfig& model, double lambda_start, double L,
                                   const MonteCarlo& mc, int max_doublings = 8);

/// Good / tame / nice frequencies on one replica (Six blocks, n = 1, r just
/// below the connection scale, M twice the median shifted interference).
SiteFrequencies site_frequencies(const ModelConfig& model, const MarkedConfiguration& config);

template <typename Fn>
Bisection bisect_up(Fn&& f, double lo, double hi, double target) {
  int it = 0;
  while (it < 20 && hi - lo > 1e-3 * std::abs(hi)) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= target) hi = mid;
    else lo = mid;
    ++it;
  }
  return {hi, it};
}

}  // namespace sinrperc
