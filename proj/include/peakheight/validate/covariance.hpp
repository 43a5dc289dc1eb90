#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "peakheight/process1d.hpp"

namespace peakheight::validate {

/// Regular grid origin + i * step, i < n_points.
struct Grid1D {
  double origin = 0.0;
  double step = 0.01;
  std::size_t n_points = 16;

  void validate() const;
  double at(std::size_t i) const { return origin + step * static_cast<double>(i); }
  double length() const { return step * static_cast<double>(n_points - 1); }
  /// Grid covering [a, b] with the given step (b is included up to rounding).
  static Grid1D covering(double a, double b, double step);
};

struct Grid2D {
  Grid1D x;
  Grid1D y;
  void validate() const {
    x.validate();
    y.validate();
  }
};

/// Unit-variance covariance C(t, s) of a 1D process, optionally with the
/// closed-form spectral triple.
struct CovarianceHandle1D {
  std::string name;
  std::function<double(double, double)> cov;
  std::function<process1d::SpectralTriple1D(double)> closed_form;

  /// C(t,t) = 1 within 1e-10 and C(t,s) = C(s,t) on the grid points.
  void validate(const Grid1D& grid) const;
};

/// exp(-(t-s)^2 / (2 ell^2)).
CovarianceHandle1D squared_exponential_1d(double ell = 1.0);

/// exp(-(f(t)-f(s))^2/2) with f(t) = t + amplitude sin t.
CovarianceHandle1D time_warp_1d(double amplitude = 0.3);

/// p(t)p(s) e^{-(t-s)^2/2} + q(t)q(s) e^{-(t-s)^2/8} with
/// p = cos theta(t), q = sin theta(t), theta(t) = (pi/2) t / horizon.
CovarianceHandle1D amplitude_mixture_1d(double horizon);

/// Stationary planar covariance C(t1, t2) = E[X(s) X(s + t)].
using StationaryCovariance2D = std::function<double(double, double)>;

/// exp(-t1^2 / (2 l1^2) - t2^2 / (2 l2^2)).
StationaryCovariance2D separable_gaussian_2d(double l1, double l2);

}  // namespace peakheight::validate
