#pragma once

#include "peakheight/process1d.hpp"
#include "peakheight/validate/covariance.hpp"

namespace peakheight::validate {

/// Options for the finite-difference spectral moments.
struct SpectralOptions {
  /// Coarsest step; two Richardson levels use step/2 and step/4.
  double base_step = 0.05;
  /// Tolerance on the identity E[X X''] = -lambda1.
  double identity_tol = 1e-4;
};

/// lambda1 = Var X'(t), r = E[X'X''], lambda2 = Var X''(t) from central
/// differences of mixed partials of C at (t, t), Richardson-extrapolated.
/// Throws std::invalid_argument if E[X X''] differs from -lambda1 by more
/// than identity_tol (covariance not smooth enough or mis-specified).
process1d::SpectralTriple1D spectral_moments_1d(const CovarianceHandle1D& cov, double t,
                                                const SpectralOptions& opt = {});

}  // namespace peakheight::validate
