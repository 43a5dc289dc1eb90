#include "peakheight/validate/covariance.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "peakheight/numerics/normal.hpp"

namespace peakheight::validate {

void Grid1D::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("Grid: step > 0 violated");
  if (!std::isfinite(origin)) throw std::invalid_argument("Grid: non-finite origin");
  if (n_points < 16) throw std::invalid_argument("Grid: n_points >= 16 violated");
}

Grid1D Grid1D::covering(double a, double b, double step) {
  if (!(b > a)) throw std::invalid_argument("Grid: min < max violated");
  if (!(step > 0.0)) throw std::invalid_argument("Grid: step > 0 violated");
  Grid1D g{a, step, static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1};
  g.validate();
  return g;
}

void CovarianceHandle1D::validate(const Grid1D& grid) const {
  grid.validate();
  if (!cov) throw std::invalid_argument("CovarianceHandle1D: empty covariance");
  const std::size_t stride = std::max<std::size_t>(1, grid.n_points / 64);
  for (std::size_t i = 0; i < grid.n_points; i += stride) {
    const double t = grid.at(i);
    if (std::abs(cov(t, t) - 1.0) > 1e-10) {
      throw std::invalid_argument(name + ": C(t,t) = 1 within 1e-10 violated at t = " + std::to_string(t));
    }
    for (std::size_t j = i + stride; j < grid.n_points; j += 7 * stride) {
      const double s = grid.at(j);
      if (std::abs(cov(t, s) - cov(s, t)) > 1e-12) throw std::invalid_argument(name + ": C(t,s) = C(s,t) violated");
    }
  }
}

CovarianceHandle1D squared_exponential_1d(double ell) {
  if (!(ell > 0.0)) throw std::invalid_argument("squared_exponential_1d: ell > 0 required");
  CovarianceHandle1D h;
  h.name = "squared-exponential";
  h.cov = [ell](double t, double s) {
    const double d = (t - s) / ell;
    return std::exp(-0.5 * d * d);
  };
  const double l2 = ell * ell;
  h.closed_form = [l2](double) { return process1d::SpectralTriple1D{1.0 / l2, 3.0 / (l2 * l2), 0.0}; };
  return h;
}

CovarianceHandle1D time_warp_1d(double amplitude) {
  if (!(std::abs(amplitude) < 1.0)) throw std::invalid_argument("time_warp_1d: |amplitude| < 1 keeps the warp monotone");
  CovarianceHandle1D h;
  h.name = "time-warp";
  auto f = [amplitude](double t) { return t + amplitude * std::sin(t); };
  h.cov = [f](double t, double s) {
    const double d = f(t) - f(s);
    return std::exp(-0.5 * d * d);
  };
  // X = Z(f): lambda1 = f'^2, r = f' f'', lambda2 = 3 f'^4 + f''^2
  h.closed_form = [amplitude](double t) {
    const double d1 = 1.0 + amplitude * std::cos(t);
    const double d2 = -amplitude * std::sin(t);
    return process1d::SpectralTriple1D{d1 * d1, 3.0 * d1 * d1 * d1 * d1 + d2 * d2, d1 * d2};
  };
  return h;
}

CovarianceHandle1D amplitude_mixture_1d(double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("amplitude_mixture_1d: horizon > 0 required");
  CovarianceHandle1D h;
  h.name = "amplitude-mixture";
  const double speed = 0.5 * numerics::kPi / horizon;
  h.cov = [speed](double t, double s) {
    const double d = t - s;
    const double a = speed * t;
    const double b = speed * s;
    return std::cos(a) * std::cos(b) * std::exp(-0.5 * d * d) + std::sin(a) * std::sin(b) * std::exp(-0.125 * d * d);
  };
  return h;
}

StationaryCovariance2D separable_gaussian_2d(double l1, double l2) {
  if (!(l1 > 0.0) || !(l2 > 0.0)) throw std::invalid_argument("separable_gaussian_2d: length scales must be positive");
  return [l1, l2](double t1, double t2) {
    const double a = t1 / l1;
    const double b = t2 / l2;
    return std::exp(-0.5 * (a * a + b * b));
  };
}

}  // namespace peakheight::validate
