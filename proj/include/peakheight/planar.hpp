#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "peakheight/numerics/bivariate.hpp"
#include "peakheight/numerics/quadrature.hpp"

namespace peakheight::planar {

/// Stationary planar field with quadrant-symmetric second-order structure:
/// Cov(X1, X2) = diag(gamma1_sq, gamma2_sq) and E[X11 X12] = E[X22 X12] = 0.
/// The sigma fields are the Hessian variances after rescaling to unit
/// gradient covariance: Var X11 = sigma1_sq, Var X22 = sigma2_sq and
/// Var X12 = E[X11 X22] = sigma3_sq.
struct PlanarSpec {
  double gamma1_sq = 1.0;
  double gamma2_sq = 1.0;
  double sigma1_sq = 0.0;
  double sigma2_sq = 0.0;
  double sigma3_sq = 0.0;

  /// Throws std::invalid_argument naming the first failing inequality.
  void validate() const;
};

/// Gradient variances and Hessian variances of the unscaled field.
struct RawPlanarSpec {
  double gamma1_sq;
  double gamma2_sq;
  double hess11_var;
  double hess22_var;
  double hess12_var;
};

/// Spec of Z(t1, t2) = X(t1/gamma1, t2/gamma2), which has identity gradient
/// covariance and the same peak height distribution as X.
PlanarSpec rescale_to_unit_gradient(const RawPlanarSpec& raw);

/// The kernel g(z1, z2, x | a1^2, a2^2, a3^2) with b = a3^2/(a1 a2):
///   a1 a2 {(p - b)(Phi(sqrt(p/b)) - 1/2) + sqrt(b p) phi(sqrt(p/b))}
/// where p = (z1 - x/a1)(z2 - x/a2), restricted to z1 < x/a1, z2 < x/a2.
/// It is E[(p - b W^2) 1{W^2 < p/b}] / 2 scaled by a1 a2, W standard normal,
/// so it vanishes continuously (as p^{3/2}) on the support edge.
double g_kernel(double z1, double z2, double x, double a1_sq, double a2_sq, double a3_sq);

struct PlanarCorrelations {
  numerics::BivariateCorrelation rho;        // sigma3^2/(sigma1 sigma2)
  numerics::BivariateCorrelation rho_tilde;  // (sigma3^2-1)/sqrt((sigma1^2-1)(sigma2^2-1))
};

/// Throws std::invalid_argument if either correlation reaches +-1.
PlanarCorrelations planar_correlations(const PlanarSpec& spec);

/// Peak height density and tail for one spec. The x-independent
/// denominator E_rho[g(Z1, Z2, 0 | sigma^2)] is computed once in the
/// constructor; the object is immutable apart from a mutex-guarded cache
/// of unit-segment integrals, so it is safe to share between threads.
class PlanarPeakHeight {
 public:
  explicit PlanarPeakHeight(const PlanarSpec& spec, const numerics::QuadConfig& cfg = {});

  const PlanarSpec& spec() const { return spec_; }
  const numerics::QuadConfig& config() const { return cfg_; }
  double denominator() const { return denominator_; }

  /// h(x) = phi(x) E_rho~[g(Z~1, Z~2, x | sigma1^2-1, sigma2^2-1, sigma3^2)] / denominator.
  double density(double x) const;

  /// F(u) = integral of h over [u, inf). Integer breakpoints are fixed, so
  /// tails at nearby u share every segment except the first.
  double tail(double u) const;

  /// F at each point of an ascending grid by cumulative integration from
  /// the top; far cheaper than calling tail() per point.
  std::vector<double> tail_table(std::span<const double> ascending_u) const;

 private:
  double segment(int k) const;
  double upper_tail(double from) const;

  PlanarSpec spec_;
  numerics::QuadConfig cfg_;
  double a1_;
  double a2_;
  numerics::BivariateCorrelation rho_tilde_;
  double denominator_;
  mutable std::mutex cache_mutex_;
  mutable std::map<int, double> segment_cache_;
};

/// Free-function forms; the per-spec denominator is cached process-wide
/// (first writer wins, every writer computes the identical value).
double peak_density_planar(const PlanarSpec& spec, double x, const numerics::QuadConfig& cfg = {});
double peak_tail_planar(const PlanarSpec& spec, double u, const numerics::QuadConfig& cfg = {});

/// Shared evaluator for a spec/config pair, built on first use.
std::shared_ptr<const PlanarPeakHeight> planar_evaluator(const PlanarSpec& spec,
                                                         const numerics::QuadConfig& cfg);

}  // namespace peakheight::planar
