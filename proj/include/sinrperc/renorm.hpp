#pragma once

#include "sinrperc/graph.hpp"
#include "sinrperc/measure.hpp"
#include "sinrperc/pathloss.hpp"
#include "sinrperc/pointproc.hpp"
#include "sinrperc/power.hpp"
#include "sinrperc/sinr.hpp"

#include <Eigen/Core>

#include <vector>

namespace sinrperc {

using Site = Eigen::VectorXi;

/// Block construction used by a site scan.
///  - Six: blocks of side r n around r n z; interference shifted by 6 r n.
///  - Seven: blocks of side n around n z (Boolean-model goodness);
///    interference shifted by 7 n.
enum class BlockVariant { Six, Seven };

struct RenormParams {
  int n = 1;
  double r = 1.0;
  double r_o = 2.0;
  double M = 1.0;
  double lambda = 1.0;

  void validate(const PathLoss& ell) const;
  double block_side(BlockVariant v) const { return v == BlockVariant::Six ? r * n : n; }
};

/// r_o(r) = r (rho / rho')^{1/d}, the power threshold tau N_o / l(r_o), its
/// survival probability p and lambda(r) = rho' r^{-d} / p.
struct CoupledParams {
  double r;
  double r_o;
  double power_threshold;
  double survival;
  double lambda;
};

CoupledParams coupled_parameters(double rho, double r, const SinrParams& sinr, const PathLoss& ell,
                                 const PowerDistribution& mu, double rho_ratio = 0.8);

enum class Tri { False, True, NotEvaluated };

struct GoodSiteResult {
  bool good = false;
  Tri stabilization = Tri::NotEvaluated;
  bool nonempty = false;
  bool connected = false;
};

/// (r, n)-goodness of site z for the thinned configuration: the dependence
/// range is below r n / 2 (only when the measure has a known range), the core
/// block Q_{rn}(rnz) holds a thinned point, and all thinned points of
/// Q_{3rn}(rnz) are joined by g_r paths inside Q_{6rn}(rnz).
GoodSiteResult good_site(const Site& z, const RenormParams& params,
                         const MarkedConfiguration& thinned, const DirectingMeasureSpec& measure);

struct InterferenceSplit {
  double inner;
  double outer;
};

/// Splits sum_k P_k l_a(|X_k - x|) into the part from the box of side
/// `inner_side` centered at x and the rest.
InterferenceSplit interference_split(const MarkedConfiguration& config, const Point& x,
                                     double inner_side, const PathLoss& ell, double shift);

/// I_{6rn}(rnz) <= M (Six) or I_{7n}(nz) <= M (Seven).
bool tame_site(const Site& z, const RenormParams& params, const MarkedConfiguration& config,
               const PathLoss& ell, BlockVariant variant);

/// gamma' = (l(r_o) / (tau M)) (l(r) / l(r_o) - 1).
double gamma_prime(double r, double r_o, double M, const SinrParams& sinr, const PathLoss& ell);

/// n-goodness for the Boolean model B(X, r/2): the big components
/// (diameter >= n/3) of the block Q_n(nz) exist, and those of z and its
/// sup-norm neighbours all merge inside Q_{6n}(nz). Diameters are taken over
/// point sets, so they can undershoot the ball-union diameter by up to r.
bool boolean_good_site(const Site& z, int n, const MarkedConfiguration& config, double r);

struct SiteFlags {
  Site z;
  bool good = false;
  bool tame = false;
  bool nice = false;
  Tri stabilization = Tri::NotEvaluated;
};

struct SiteScan {
  std::vector<SiteFlags> sites;
  Site lo;
  Site hi;
  /// Nice sites connect the two faces orthogonal to axis 0.
  bool crossing = false;
  double gamma = 0.0;
  double gamma_prime = 0.0;
  /// Largest gamma for which nice blocks provably keep their g_r edges.
  double gamma_guaranteed = 0.0;
  Index edges_checked = 0;
  Index edges_violated = 0;

  Index nice_count() const;
};

/// Flags every site whose core block lies in the observation window and whose
/// evaluation block lies in the buffered window, and
/// checks, inside each nice block, that g_r edges among thinned points are
/// edges of G_gamma on the full configuration.
SiteScan nice_site_scan(const RenormParams& params, const MarkedConfiguration& config, double gamma,
                        const SinrParams& sinr, const PathLoss& ell, const DirectingMeasureSpec& measure,
                        BlockVariant variant);

}  // namespace sinrperc
