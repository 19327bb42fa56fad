#pragma once

#include <string>

namespace sinrperc {

/// Well-behaved path-loss function: continuous, constant on [0, d_o],
/// strictly decreasing on [d_o, inf) within its support, with
/// integral_0^inf r^{d-1} l(r) dr finite.
///
/// Two families are provided:
///  - truncated power law  l(r) = min(1, (r/d_o)^-alpha), alpha > d
///  - bounded cone         l(r) = l0 on [0, d_o], linear down to 0 at rho
class PathLoss {
public:
  enum class Kind { PowerLaw, BoundedCone };

  static PathLoss power_law(double d_o, double alpha, int dim);
  static PathLoss bounded_cone(double d_o, double rho, int dim, double ell0 = 1.0);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double plateau() const { return d_o_; }
  double alpha() const { return alpha_; }
  double rho() const { return rho_; }

  double operator()(double r) const;
  double at_zero() const { return kind_ == Kind::PowerLaw ? 1.0 : ell0_; }

  /// Supremum of the support; +inf for the power law.
  double support_sup() const;
  bool bounded_support() const { return kind_ == Kind::BoundedCone; }

  /// The r >= d_o with l(r) = y. By convention inverse(l(0)) = d_o.
  /// y = 0 maps to rho for bounded support; throws for the power law.
  double inverse(double y) const;

  /// Shifted path loss l_a(r) = l(0) for r < a sqrt(d)/2, else l(r - a sqrt(d)/2).
  double shifted(double a, double r) const;

  /// integral_m^inf r^{d-1} l(r) dr.
  double tail_integral(double m) const;

  std::string describe() const;

private:
  PathLoss(Kind k, double d_o, double alpha, double rho, double ell0, int dim);

  Kind kind_;
  double d_o_;
  double alpha_;
  double rho_;
  double ell0_;
  int dim_;
  int int_alpha_ = 0;
};

/// Received-power connection radius l^{-1}(tau N_o / P); 0 when P l(0) <= tau N_o,
/// i.e. the transmitter cannot beat the noise at any distance.
double connection_radius(const PathLoss& ell, double power, double tau, double noise);

}  // namespace sinrperc
