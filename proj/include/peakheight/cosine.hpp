#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "peakheight/numerics/estimate.hpp"
#include "peakheight/numerics/quadrature.hpp"
#include "peakheight/numerics/random.hpp"
#include "peakheight/parallel.hpp"

namespace peakheight::cosine {

/// X(t) = N^{-1/2} sum_k [zeta_k cos(omega_k t_k) + zeta'_k sin(omega_k t_k)].
/// The frequencies only matter for simulation: the peak height law does
/// not depend on them.
struct CosineSpec {
  int n_dim = 1;
  std::vector<double> omegas;

  /// All-ones frequencies.
  static CosineSpec unit(int n_dim);
  void validate() const;
};

/// Largest N handled by nested quadrature.
inline constexpr int kMaxQuadratureDim = 4;

/// F(u) = (2 pi)^{N/2} E[prod |Z_i| 1{Z_i < 0} 1{sum Z_i <= -sqrt(N) u}]
/// by nested quadrature. With W_i = -Z_i the innermost constrained moment is
/// phi(.) in closed form, leaving N - 1 one-dimensional integrals on finite
/// ranges. Returns 1 for u < 0: at a cosine-field peak X(t) = -sum X_ii(t) > 0.
/// Throws std::invalid_argument for N > kMaxQuadratureDim (use the MC form).
double peak_tail_cosine_quad(int n_dim, double u, const numerics::QuadConfig& cfg = {});

/// Same quantity as (pi/2)^{N/2} E[prod W_i 1{sum W_i >= sqrt(N) u}] with W_i
/// i.i.d. half-normal. Sampling is split into kDefaultChunks substreams of
/// `stream`, so the result does not depend on the worker count.
numerics::EstimateWithError peak_tail_cosine_mc(int n_dim, double u, std::size_t n_samples,
                                                const numerics::RandomStream& stream,
                                                Execution exec = Execution::kParallel);

/// Quadrature for N <= 4 (std_error 0), Monte Carlo otherwise.
numerics::EstimateWithError peak_tail_cosine(int n_dim, double u, const numerics::QuadConfig& cfg,
                                             std::size_t n_samples,
                                             const numerics::RandomStream& stream);

/// Field value at t. `zeta` holds N (cos, sin) coefficient pairs:
/// zeta[2k] multiplies cos(omega_k t_k), zeta[2k+1] multiplies sin.
double cosine_field_eval(const CosineSpec& spec, std::span<const double> zeta,
                         std::span<const double> t);

}  // namespace peakheight::cosine
