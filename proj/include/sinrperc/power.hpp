#pragma once

#include "sinrperc/random.hpp"

#include <string>

namespace sinrperc {

/// Distribution mu of the i.i.d. transmission powers.
class PowerDistribution {
public:
  enum class Kind { Dirac, Exponential, Pareto, Uniform };

  static PowerDistribution dirac(double p);
  static PowerDistribution exponential(double mean);
  /// P(P > x) = (scale / x)^shape for x >= scale.
  static PowerDistribution pareto(double shape, double scale);
  static PowerDistribution uniform(double lo, double hi);

  Kind kind() const { return kind_; }
  double first() const { return a_; }
  double second() const { return b_; }

  double sample(Rng& rng) const;

  /// P(P >= t).
  double survival(double t) const;
  /// E[P]; +inf for Pareto with shape <= 1.
  double mean() const;
  /// ess sup of the distribution (P_sup).
  double ess_sup() const;
  /// Pareto tails have no exponential moments.
  bool heavy_tail() const { return kind_ == Kind::Pareto; }

  std::string describe() const;

private:
  PowerDistribution(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}

  Kind kind_;
  double a_;
  double b_;
};

}  // namespace sinrperc
