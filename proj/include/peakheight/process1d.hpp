#pragma once

namespace peakheight::process1d {

/// Second-order spectral quantities of a unit-variance process at one
/// location: lambda1 = Var X'(t), lambda2 = Var X''(t), r = E[X'(t) X''(t)].
struct SpectralTriple1D {
  double lambda1;
  double lambda2;
  double r;

  /// Checks lambda1 > 0, lambda2 > 0 and lambda2 - r^2/lambda1 > lambda1^2;
  /// throws std::invalid_argument naming the failing inequality.
  void validate() const;
};

/// Correlation of X(t) and X''(t) given X'(t) = 0. Always in (-1, 0).
class Rho1D {
 public:
  /// Rejects rho outside (-1, 0) and rho within 1e-12 of -1.
  explicit Rho1D(double rho);
  double value() const { return rho_; }
  /// sqrt(1 - rho^2) as sqrt((1 - rho)(1 + rho)).
  double complement() const { return comp_; }

 private:
  double rho_;
  double comp_;
};

/// kappa = -phi'(0)/sqrt(phi''(0)) of a stationary covariance
/// E[Z(t)Z(s)] = phi(|t - s|^2). Bounded by 0 < kappa <= sqrt(3) in 1D.
class StationaryKappa {
 public:
  explicit StationaryKappa(double kappa);
  double value() const { return kappa_; }
  /// True at the upper bound kappa = sqrt(3) (the rank-2 cosine process).
  bool degenerate() const;

 private:
  double kappa_;
};

/// rho(t) = -lambda1 / sqrt(lambda2 - r^2/lambda1).
Rho1D conditional_rho(const SpectralTriple1D& s);

/// Peak height tail F_t(u) = P[X(t) > u | t is a local maximum]:
///   Psi(u/sqrt(1-rho^2)) - sqrt(2 pi) rho phi(u) Phi(-rho u/sqrt(1-rho^2)).
double peak_tail_1d(Rho1D rho, double u);

/// Peak height density h_t(x) = -dF_t/dx.
double peak_density_1d(Rho1D rho, double x);

/// rho -> 0- limit of peak_tail_1d, which is Psi(u). Not reachable through
/// Rho1D (lambda1 > 0 forces rho < 0) but exposed for limit checks.
double peak_tail_1d_rho_zero_limit(double u);

/// Rejects phi1 >= 0, phi2 <= 0 and kappa > sqrt(3).
StationaryKappa stationary_kappa(double phi1, double phi2);

/// Stationary closed forms in terms of kappa. Both reject kappa = sqrt(3).
double peak_tail_stationary_1d(StationaryKappa kappa, double u);
double peak_density_stationary_1d(StationaryKappa kappa, double x);

}  // namespace peakheight::process1d
