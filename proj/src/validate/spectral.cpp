#include "peakheight/validate/spectral.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace peakheight::validate {

namespace {

// central stencils on offsets -1, 0, 1 (unscaled by the step)
constexpr std::array<double, 3> kFirst{-0.5, 0.0, 0.5};
constexpr std::array<double, 3> kSecond{1.0, -2.0, 1.0};
constexpr std::array<double, 3> kValue{0.0, 1.0, 0.0};

const std::array<double, 3>& stencil(int order) {
  return order == 0 ? kValue : order == 1 ? kFirst : kSecond;
}

// d^p/da^p d^q/db^q C(t + a, t + b) at a = b = 0, second order in h
double mixed(const CovarianceHandle1D& cov, double t, int p, int q, double h) {
  const auto& sa = stencil(p);
  const auto& sb = stencil(q);
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (sa[i] == 0.0) continue;
    for (int j = 0; j < 3; ++j) {
      if (sb[j] == 0.0) continue;
      s += sa[i] * sb[j] * cov.cov(t + (i - 1) * h, t + (j - 1) * h);
    }
  }
  return s / std::pow(h, p + q);
}

// two Richardson levels over h, h/2, h/4 (error series in h^2)
double extrapolated(const CovarianceHandle1D& cov, double t, int p, int q, double h) {
  const double a0 = mixed(cov, t, p, q, h);
  const double a1 = mixed(cov, t, p, q, 0.5 * h);
  const double a2 = mixed(cov, t, p, q, 0.25 * h);
  const double b0 = (4.0 * a1 - a0) / 3.0;
  const double b1 = (4.0 * a2 - a1) / 3.0;
  return (16.0 * b1 - b0) / 15.0;
}

}  // namespace

process1d::SpectralTriple1D spectral_moments_1d(const CovarianceHandle1D& cov, double t, const SpectralOptions& opt) {
  if (!cov.cov) throw std::invalid_argument("spectral_moments_1d: empty covariance");
  if (!(opt.base_step > 0.0)) throw std::invalid_argument("spectral_moments_1d: base_step > 0 required");
  if (!std::isfinite(t)) throw std::domain_error("spectral_moments_1d: non-finite t");
  const double h = opt.base_step;
  process1d::SpectralTriple1D s;
  s.lambda1 = extrapolated(cov, t, 1, 1, h);
  s.r = extrapolated(cov, t, 1, 2, h);
  s.lambda2 = extrapolated(cov, t, 2, 2, h);
  const double xx2 = extrapolated(cov, t, 0, 2, h);
  if (std::abs(xx2 + s.lambda1) > opt.identity_tol) {
    throw std::invalid_argument(cov.name + ": E[X X''] = -lambda1 violated at t = " + std::to_string(t) +
                                " (|" + std::to_string(xx2) + " + " + std::to_string(s.lambda1) +
                                "| > tolerance); covariance not smooth enough or mis-specified");
  }
  s.validate();
  return s;
}

}  // namespace peakheight::validate
