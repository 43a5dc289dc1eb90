#include "peakheight/process1d.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "peakheight/numerics/normal.hpp"

namespace peakheight::process1d {

using numerics::kSqrt2Pi;
using numerics::std_normal_cdf;
using numerics::std_normal_pdf;
using numerics::std_normal_tail;

namespace {
const double kSqrt3 = std::sqrt(3.0);
// Relative slack for accepting kappa = sqrt(3) computed in floating point.
constexpr double kBoundarySlack = 1e-12;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::domain_error(std::string(what) + ": non-finite argument");
}
}  // namespace

void SpectralTriple1D::validate() const {
  if (!(lambda1 > 0.0)) throw std::invalid_argument("SpectralTriple1D: lambda1 > 0 violated");
  if (!(lambda2 > 0.0)) throw std::invalid_argument("SpectralTriple1D: lambda2 > 0 violated");
  if (!std::isfinite(r)) throw std::invalid_argument("SpectralTriple1D: r must be finite");
  const double delta_sq = lambda2 - r * r / lambda1;
  if (!(delta_sq > lambda1 * lambda1)) {
    throw std::invalid_argument(
        "SpectralTriple1D: lambda2 - r^2/lambda1 > lambda1^2 violated (covariance of (X, X', X'') "
        "not positive definite)");
  }
}

Rho1D::Rho1D(double rho) : rho_(rho) {
  if (!(rho > -1.0 && rho < 0.0)) {
    throw std::invalid_argument("Rho1D: need -1 < rho < 0, got " + std::to_string(rho));
  }
  if (1.0 + rho < 1e-12) {
    throw std::invalid_argument("Rho1D: rho within 1e-12 of -1, the peak height law degenerates");
  }
  comp_ = std::sqrt((1.0 - rho) * (1.0 + rho));
}

StationaryKappa::StationaryKappa(double kappa) : kappa_(kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("StationaryKappa: kappa > 0 violated");
  if (kappa > kSqrt3 * (1.0 + kBoundarySlack)) {
    throw std::invalid_argument("StationaryKappa: kappa^2 <= 3 violated (1D spectral bound)");
  }
  if (kappa > kSqrt3) kappa_ = kSqrt3;
}

bool StationaryKappa::degenerate() const { return kappa_ >= kSqrt3 * (1.0 - kBoundarySlack); }

Rho1D conditional_rho(const SpectralTriple1D& s) {
  s.validate();
  const double delta = std::sqrt(s.lambda2 - s.r * s.r / s.lambda1);
  return Rho1D(-s.lambda1 / delta);
}

double peak_tail_1d(Rho1D rho, double u) {
  require_finite(u, "peak_tail_1d");
  const double p = rho.value();
  const double c = rho.complement();
  return std_normal_tail(u / c) - kSqrt2Pi * p * std_normal_pdf(u) * std_normal_cdf(-p * u / c);
}

double peak_density_1d(Rho1D rho, double x) {
  require_finite(x, "peak_density_1d");
  const double p = rho.value();
  const double c = rho.complement();
  return c * std_normal_pdf(x / c) -
         kSqrt2Pi * p * x * std_normal_pdf(x) * std_normal_cdf(-p * x / c);
}

double peak_tail_1d_rho_zero_limit(double u) { return std_normal_tail(u); }

StationaryKappa stationary_kappa(double phi1, double phi2) {
  if (!(phi1 < 0.0)) throw std::invalid_argument("stationary_kappa: phi'(0) < 0 violated");
  if (!(phi2 > 0.0)) throw std::invalid_argument("stationary_kappa: phi''(0) > 0 violated");
  return StationaryKappa(-phi1 / std::sqrt(phi2));
}

namespace {
void require_nondegenerate(StationaryKappa kappa, const char* what) {
  if (kappa.degenerate()) {
    throw std::invalid_argument(std::string(what) +
                                ": kappa = sqrt(3) is degenerate; use the cosine family with N = 1");
  }
}
}  // namespace

double peak_tail_stationary_1d(StationaryKappa kappa, double u) {
  require_finite(u, "peak_tail_stationary_1d");
  require_nondegenerate(kappa, "peak_tail_stationary_1d");
  const double k = kappa.value();
  return std_normal_tail(u / std::sqrt(1.0 - k * k / 3.0)) +
         kSqrt2Pi * k / kSqrt3 * std_normal_pdf(u) * std_normal_cdf(k * u / std::sqrt(3.0 - k * k));
}

double peak_density_stationary_1d(StationaryKappa kappa, double x) {
  require_finite(x, "peak_density_stationary_1d");
  require_nondegenerate(kappa, "peak_density_stationary_1d");
  const double k = kappa.value();
  const double c = std::sqrt(1.0 - k * k / 3.0);
  return c * std_normal_pdf(x / c) +
         kSqrt2Pi * k / kSqrt3 * x * std_normal_pdf(x) * std_normal_cdf(k * x / std::sqrt(3.0 - k * k));
}

}  // namespace peakheight::process1d
