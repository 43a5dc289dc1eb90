#pragma once

#include <functional>
#include <limits>

#include "peakheight/numerics/quadrature.hpp"

namespace peakheight::numerics {

/// Correlation of a standard bivariate normal pair, strictly inside (-1, 1).
class BivariateCorrelation {
 public:
  explicit BivariateCorrelation(double rho);
  double value() const { return rho_; }
  /// sqrt(1 - rho^2), computed as sqrt((1 - rho)(1 + rho)).
  double complement() const { return comp_; }

 private:
  double rho_;
  double comp_;
};

double bivariate_normal_pdf(double x, double y, BivariateCorrelation rho);

/// Upper corners of the integration box; the lower corner is (-R, -R).
/// Integrands that vanish above a corner should pass it here so no panel
/// straddles the support edge.
struct UpperLimits {
  double z1 = std::numeric_limits<double>::infinity();
  double z2 = std::numeric_limits<double>::infinity();
};

/// E_rho[g(Z1, Z2)] by nested adaptive quadrature over the truncated
/// square [-R, R]^2, R = cfg.truncation_radius. The outer integral runs
/// over z1 against phi(z1); the inner one over z2 against the conditional
/// density N(rho z1, 1 - rho^2). Inner tolerances are a tenth of the outer.
QuadResult expect_bivariate(const std::function<double(double, double)>& g,
                            BivariateCorrelation rho, const QuadConfig& cfg = {},
                            UpperLimits upper = {});

}  // namespace peakheight::numerics
