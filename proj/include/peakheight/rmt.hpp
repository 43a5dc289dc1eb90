#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "peakheight/numerics/estimate.hpp"
#include "peakheight/numerics/quadrature.hpp"
#include "peakheight/numerics/random.hpp"
#include "peakheight/parallel.hpp"

namespace peakheight::rmt {

/// Covariance parameter c of an N x N GOI(c) matrix, nondegenerate for c > -1/N.
class GoiCovParam {
 public:
  GoiCovParam(double c, int n_dim);
  double c() const { return c_; }
  int n_dim() const { return n_; }

 private:
  double c_;
  int n_;
};

/// E[M_ij M_kl] = (d_ik d_jl + d_il d_jk)/2 + c d_ij d_kl.
double goi_entry_covariance(int i, int j, int k, int l, double c);

/// Symmetric by construction: only the upper triangle is drawn.
struct SymmetricMatrixSample {
  Eigen::MatrixXd entries;
  int n_dim() const { return static_cast<int>(entries.rows()); }
};

/// GOE: diagonal variance 1, off-diagonal variance 1/2. Entries are drawn
/// row by row over the upper triangle.
SymmetricMatrixSample sample_goe(int n_dim, numerics::RandomStream& stream);

/// GOI(c) for c >= 0 as GOE + sqrt(c) xi I. Negative c has no additive
/// construction; throws std::invalid_argument pointing at expect_goi.
SymmetricMatrixSample sample_goi(int n_dim, double c, numerics::RandomStream& stream);

/// Ascending eigenvalues.
std::vector<double> eigenvalues(const SymmetricMatrixSample& m);

/// log K_N with K_N = 2^{N/2} prod_{i=1..N} Gamma(i/2).
double goi_log_normalizer(int n_dim);

/// log f_c of the ordered eigenvalues:
///   -log K_N - log(1+Nc)/2 - sum l^2/2 + c (sum l)^2 / (2(1+Nc)) + sum_{i<j} log|l_i - l_j|.
/// Throws std::invalid_argument unless the input is sorted ascending.
double goi_ordered_eig_logdensity(std::span<const double> lambdas, GoiCovParam c);

enum class GoiSampling {
  kAuto,        // importance sampling for c < 0, direct GOI(c) draws for c >= 0
  kImportance,  // GOE draws weighted by f_c/f_0
  kDirect,      // GOE + sqrt(c) xi I, c >= 0 only
};

/// Importance weights became too uneven to trust (c close to -1/N).
class WeightDegeneracyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed set of GOI(c) eigenvalue draws with importance weights, reused
/// across every functional evaluated on it (common random numbers).
///
/// Importance weights from GOE are exp(c s^2 / (2(1+Nc))) / sqrt(1+Nc) with
/// s = trace; this is the exact ratio f_c/f_0 and is bounded for c <= 0.
/// For c > 0 its second moment is infinite once Nc >= 1, which is why
/// kAuto switches to direct sampling there (all weights 1).
class GoiEigenSample {
 public:
  /// Draw chunk k from stream.substream(substream_offset + k).
  static GoiEigenSample draw(GoiCovParam c, std::size_t n_samples, const numerics::RandomStream& stream,
                             GoiSampling method = GoiSampling::kAuto,
                             Execution exec = Execution::kParallel, std::uint32_t substream_offset = 0);

  int n_dim() const { return n_; }
  double c() const { return c_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const double> eigenvalues(std::size_t i) const {
    return {eig_.data() + i * static_cast<std::size_t>(n_), static_cast<std::size_t>(n_)};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  /// (sum w)^2 / sum w^2.
  double effective_sample_size() const;

  /// Mean of w_i g(lambda_i) with its standard error.
  numerics::EstimateWithError expect(const std::function<double(std::span<const double>)>& g) const;

 private:
  int n_ = 0;
  double c_ = 0.0;
  std::vector<double> eig_;
  std::vector<double> weights_;
};

/// E^N_GOI(c)[g]; g must be symmetric in its arguments. Throws
/// WeightDegeneracyError if the effective sample size drops below 1%.
numerics::EstimateWithError expect_goi(const std::function<double(std::span<const double>)>& g,
                                       GoiCovParam c, std::size_t n_samples,
                                       const numerics::RandomStream& stream,
                                       GoiSampling method = GoiSampling::kAuto);

enum class KappaBranch { kSubcritical, kCritical };

struct KappaClass {
  double kappa = 0.0;
  KappaBranch branch = KappaBranch::kSubcritical;
  /// Subcritical but within 1e-6 of the bound: c = (1-kappa^2)/2 is close
  /// to -1/N and importance weights are poorly conditioned.
  bool near_critical = false;
};

/// kappa = -phi'(0)/sqrt(phi''(0)) and its branch. |kappa^2 - (N+2)/N| <= 1e-9
/// is critical; kappa^2 > (N+2)/N is rejected.
KappaClass kappa_from_phi(double phi1, double phi2, int n_dim);

/// Branch classification for a kappa given directly.
KappaClass classify_kappa(double kappa, int n_dim);

/// Anisotropic field E[X(t)X(s)] = phi(|A(t-s)|^2). Only kappa enters the
/// peak height law; A is validated and otherwise unused.
struct AnisoSpec {
  int n_dim = 1;
  Eigen::MatrixXd a_matrix;
  double phi1 = -0.5;
  double phi2 = 0.25;

  /// Identity A with phi'(0) = -1/2 (unit gradient variance) and phi''(0)
  /// chosen to give the requested kappa.
  static AnisoSpec with_kappa(int n_dim, double kappa);
  void validate() const;
  KappaClass kappa() const;
};

/// Peak height tail and density of an anisotropic field from one fixed set
/// of GOI eigenvalue draws.
///
/// Subcritical branch: per draw the x-integral of
/// phi(x) prod_j |l_j - kappa x/sqrt2| 1{l_max < kappa x/sqrt2} over [u, inf)
/// is a polynomial-times-Gaussian integral done exactly, which is the outer
/// quadrature carried out on the common-random-number integrand with zero
/// discretization error. tail_by_quadrature() evaluates the same integral
/// by adaptive quadrature for cross-checking.
///
/// Numerator draws use substreams [0, 64) of the stream, the c = 1/2
/// denominator uses [64, 128). In the critical branch both share the
/// c = 1/2 draws and the ratio error includes their covariance.
class AnisoPeakHeight {
 public:
  AnisoPeakHeight(const AnisoSpec& spec, const numerics::RandomStream& stream,
                  std::size_t n_samples = 200000, Execution exec = Execution::kParallel);

  const KappaClass& kappa() const { return kappa_; }
  const numerics::EstimateWithError& denominator() const { return denominator_; }

  numerics::EstimateWithError tail(double u) const;
  /// h(x) = phi(x) E_GOI(c)[g(l; x)] / denominator. Subcritical only.
  numerics::EstimateWithError density(double x) const;
  /// Subcritical only: outer adaptive quadrature over x of the CRN integrand.
  numerics::EstimateWithError tail_by_quadrature(double u, const numerics::QuadConfig& cfg) const;

 private:
  numerics::EstimateWithError ratio(const std::vector<double>& numerator_terms) const;
  double numerator_integrand(double x) const;

  KappaClass kappa_;
  int n_;
  double slope_;  // kappa / sqrt(2)
  GoiEigenSample numerator_draws_;
  GoiEigenSample denominator_draws_;
  std::vector<double> denominator_terms_;
  numerics::EstimateWithError denominator_;
  Execution exec_;
};

/// One-shot F(u). cfg is checked but only the quadrature cross-check
/// (tail_by_quadrature) consumes tolerances.
numerics::EstimateWithError peak_tail_aniso(const AnisoSpec& spec, double u, std::size_t n_samples,
                                            const numerics::RandomStream& stream,
                                            const numerics::QuadConfig& cfg = {});

}  // namespace peakheight::rmt
