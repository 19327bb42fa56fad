#include "sinrperc/pathloss.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace sinrperc {

PathLoss::PathLoss(Kind k, double d_o, double alpha, double rho, double ell0, int dim)
    : kind_(k), d_o_(d_o), alpha_(alpha), rho_(rho), ell0_(ell0), dim_(dim) {
  if (k == Kind::PowerLaw && alpha == std::floor(alpha) && alpha <= 16) int_alpha_ = static_cast<int>(alpha);
}

PathLoss PathLoss::power_law(double d_o, double alpha, int dim) {
  if (dim < 1) throw std::invalid_argument("pathloss: dimension must be >= 1");
  if (!(d_o > 0.0)) throw std::invalid_argument("pathloss: power law needs d_o > 0");
  if (!(alpha > dim))
    throw std::invalid_argument("pathloss: power law needs alpha > dimension for integrable tails");
  return PathLoss(Kind::PowerLaw, d_o, alpha, std::numeric_limits<double>::infinity(), 1.0, dim);
}

PathLoss PathLoss::bounded_cone(double d_o, double rho, int dim, double ell0) {
  if (dim < 1) throw std::invalid_argument("pathloss: dimension must be >= 1");
  if (!(d_o >= 0.0)) throw std::invalid_argument("pathloss: cone needs d_o >= 0");
  if (!(rho > d_o)) throw std::invalid_argument("pathloss: cone needs rho > d_o");
  if (!(ell0 > 0.0)) throw std::invalid_argument("pathloss: cone needs l0 > 0");
  return PathLoss(Kind::BoundedCone, d_o, 0.0, rho, ell0, dim);
}

double PathLoss::operator()(double r) const {
  if (r <= d_o_) return at_zero();
  if (kind_ == Kind::PowerLaw) {
    if (int_alpha_ == 0) return std::pow(r / d_o_, -alpha_);
    const double q = d_o_ / r;
    double out = 1.0;
    for (int k = 0; k < int_alpha_; ++k) out *= q;
    return out;
  }
  if (r >= rho_) return 0.0;
  return ell0_ * (rho_ - r) / (rho_ - d_o_);
}

double PathLoss::support_sup() const { return rho_; }

double PathLoss::inverse(double y) const {
  if (!(y <= at_zero()) || y < 0.0)
    throw std::domain_error("pathloss inverse: value outside (0, l(0)]");
  if (y == at_zero()) return d_o_;
  if (kind_ == Kind::PowerLaw) {
    if (y == 0.0) throw std::domain_error("pathloss inverse: 0 has no finite preimage");
    return d_o_ * std::pow(y, -1.0 / alpha_);
  }
  return rho_ - y * (rho_ - d_o_) / ell0_;
}

double PathLoss::shifted(double a, double r) const {
  const double s = a * std::sqrt(static_cast<double>(dim_)) / 2.0;
  if (r < s) return at_zero();
  return (*this)(r - s);
}

double PathLoss::tail_integral(double m) const {
  const double d = dim_;
  m = std::max(m, 0.0);
  if (kind_ == Kind::PowerLaw) {
    double plateau_part = 0.0;
    double from = m;
    if (m < d_o_) {
      plateau_part = (std::pow(d_o_, d) - std::pow(m, d)) / d;
      from = d_o_;
    }
    return plateau_part + std::pow(d_o_, alpha_) * std::pow(from, d - alpha_) / (alpha_ - d);
  }
  if (m >= rho_) return 0.0;
  double plateau_part = 0.0;
  double from = m;
  if (m < d_o_) {
    plateau_part = ell0_ * (std::pow(d_o_, d) - std::pow(m, d)) / d;
    from = d_o_;
  }
  const auto antideriv = [&](double r) {
    return ell0_ / (rho_ - d_o_) * (rho_ * std::pow(r, d) / d - std::pow(r, d + 1.0) / (d + 1.0));
  };
  return plateau_part + antideriv(rho_) - antideriv(from);
}

std::string PathLoss::describe() const {
  std::ostringstream os;
  if (kind_ == Kind::PowerLaw)
    os << "power-law(d_o=" << d_o_ << ", alpha=" << alpha_ << ", d=" << dim_ << ")";
  else
    os << "bounded-cone(d_o=" << d_o_ << ", rho=" << rho_ << ", l0=" << ell0_ << ", d=" << dim_ << ")";
  return os.str();
}

double connection_radius(const PathLoss& ell, double power, double tau, double noise) {
  const double y = tau * noise;
  if (!(power * ell.at_zero() > y)) return 0.0;
  if (y == 0.0) return ell.support_sup();
  return ell.inverse(y / power);
}

}  // namespace sinrperc
