#include "sinrperc/power.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sinrperc {

namespace {
void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw std::invalid_argument(std::string("power distribution: ") + what + " must be > 0");
}
}  // namespace

PowerDistribution PowerDistribution::dirac(double p) {
  require_positive(p, "dirac value");
  return {Kind::Dirac, p, 0.0};
}

PowerDistribution PowerDistribution::exponential(double mean) {
  require_positive(mean, "exponential mean");
  return {Kind::Exponential, mean, 0.0};
}

PowerDistribution PowerDistribution::pareto(double shape, double scale) {
  require_positive(shape, "pareto shape");
  require_positive(scale, "pareto scale");
  return {Kind::Pareto, shape, scale};
}

PowerDistribution PowerDistribution::uniform(double lo, double hi) {
  require_positive(lo, "uniform lower bound");
  if (!(hi > lo)) throw std::invalid_argument("power distribution: uniform needs hi > lo");
  return {Kind::Uniform, lo, hi};
}

double PowerDistribution::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::Dirac:
      return a_;
    case Kind::Exponential: {
      std::exponential_distribution<double> e(1.0 / a_);
      double v = e(rng);
      // Powers are strictly positive.
      while (!(v > 0.0)) v = e(rng);
      return v;
    }
    case Kind::Pareto: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      double v = u(rng);
      while (!(v > 0.0)) v = u(rng);
      return b_ * std::pow(v, -1.0 / a_);
    }
    case Kind::Uniform: {
      std::uniform_real_distribution<double> u(a_, b_);
      return u(rng);
    }
  }
  return a_;
}

double PowerDistribution::survival(double t) const {
  switch (kind_) {
    case Kind::Dirac:
      return t <= a_ ? 1.0 : 0.0;
    case Kind::Exponential:
      return t <= 0.0 ? 1.0 : std::exp(-t / a_);
    case Kind::Pareto:
      return t <= b_ ? 1.0 : std::pow(b_ / t, a_);
    case Kind::Uniform:
      if (t <= a_) return 1.0;
      if (t >= b_) return 0.0;
      return (b_ - t) / (b_ - a_);
  }
  return 0.0;
}

double PowerDistribution::mean() const {
  switch (kind_) {
    case Kind::Dirac:
    case Kind::Exponential:
      return a_;
    case Kind::Pareto:
      return a_ > 1.0 ? a_ * b_ / (a_ - 1.0) : std::numeric_limits<double>::infinity();
    case Kind::Uniform:
      return 0.5 * (a_ + b_);
  }
  return 0.0;
}

double PowerDistribution::ess_sup() const {
  switch (kind_) {
    case Kind::Dirac:
      return a_;
    case Kind::Uniform:
      return b_;
    default:
      return std::numeric_limits<double>::infinity();
  }
}

std::string PowerDistribution::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Dirac:
      os << "dirac(" << a_ << ")";
      break;
    case Kind::Exponential:
      os << "exponential(mean=" << a_ << ")";
      break;
    case Kind::Pareto:
      os << "pareto(shape=" << a_ << ", scale=" << b_ << ")";
      break;
    case Kind::Uniform:
      os << "uniform(" << a_ << ", " << b_ << ")";
      break;
  }
  return os.str();
}

}  // namespace sinrperc
