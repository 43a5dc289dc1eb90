#include "peakheight/numerics/bivariate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "peakheight/numerics/normal.hpp"

namespace peakheight::numerics {

BivariateCorrelation::BivariateCorrelation(double rho) : rho_(rho) {
  if (!(rho > -1.0 && rho < 1.0)) {
    throw std::invalid_argument("BivariateCorrelation: need -1 < rho < 1, got " + std::to_string(rho));
  }
  comp_ = std::sqrt((1.0 - rho) * (1.0 + rho));
}

double bivariate_normal_pdf(double x, double y, BivariateCorrelation rho) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw std::domain_error("bivariate_normal_pdf: non-finite argument");
  }
  const double r = rho.value();
  const double one_minus = (1.0 - r) * (1.0 + r);
  const double q = (x * x - 2.0 * r * x * y + y * y) / (2.0 * one_minus);
  return std::exp(-q) / (2.0 * kPi * std::sqrt(one_minus));
}

QuadResult expect_bivariate(const std::function<double(double, double)>& g,
                            BivariateCorrelation rho, const QuadConfig& cfg, UpperLimits upper) {
  cfg.validate();
  const double radius = cfg.truncation_radius;
  const double hi1 = std::min(radius, upper.z1);
  const double hi2 = std::min(radius, upper.z2);
  if (!(hi1 > -radius) || !(hi2 > -radius)) return {0.0, 0.0, 0, true};

  const double r = rho.value();
  const double s = rho.complement();
  const QuadConfig inner_cfg = cfg.scaled(0.1);
  bool inner_ok = true;
  double inner_err = 0.0;

  auto outer = [&](double z1) {
    const double w1 = kInvSqrt2Pi * std::exp(-0.5 * z1 * z1);
    const double mean = r * z1;
    auto inner = [&](double z2) {
      const double t = (z2 - mean) / s;
      return g(z1, z2) * kInvSqrt2Pi * std::exp(-0.5 * t * t) / s;
    };
    // Start the inner partition at the conditional mean when it lies in
    // range, so the peak of the weight is never sampled only by chance.
    double breaks[3] = {-radius, mean, hi2};
    std::span<const double> parts(breaks, 3);
    if (!(mean > -radius && mean < hi2)) {
      breaks[1] = hi2;
      parts = std::span<const double>(breaks, 2);
    }
    const QuadResult ir = detail::adaptive(inner, parts, inner_cfg);
    if (!ir.converged) inner_ok = false;
    inner_err = std::max(inner_err, ir.abs_error);
    return w1 * ir.value;
  };
  double breaks[3] = {-radius, 0.0, hi1};
  std::span<const double> parts(breaks, 3);
  if (!(hi1 > 0.0)) {
    breaks[1] = hi1;
    parts = std::span<const double>(breaks, 2);
  }
  QuadResult res = detail::adaptive(outer, parts, cfg);
  res.abs_error += inner_err;
  res.converged = res.converged && inner_ok;
  return res;
}

}  // namespace peakheight::numerics
