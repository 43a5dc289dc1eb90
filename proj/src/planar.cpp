#include "peakheight/planar.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <tuple>

#include "peakheight/numerics/normal.hpp"

namespace peakheight::planar {

using numerics::BivariateCorrelation;
using numerics::QuadConfig;

void PlanarSpec::validate() const {
  auto fail = [](const char* msg) { throw std::invalid_argument(std::string("PlanarSpec: ") + msg); };
  if (!(gamma1_sq > 0.0)) fail("gamma1_sq > 0 violated");
  if (!(gamma2_sq > 0.0)) fail("gamma2_sq > 0 violated");
  if (!(sigma1_sq > 1.0)) fail("sigma1_sq > 1 violated (conditional variance sigma1^2 - 1 must be positive)");
  if (!(sigma2_sq > 1.0)) fail("sigma2_sq > 1 violated (conditional variance sigma2^2 - 1 must be positive)");
  if (!(sigma3_sq > 0.0)) fail("sigma3_sq > 0 violated");
  if (!(sigma3_sq * sigma3_sq <= sigma1_sq * sigma2_sq)) {
    fail("sigma3_sq^2 <= sigma1_sq * sigma2_sq violated (Hessian covariance not PSD)");
  }
  const double c = sigma3_sq - 1.0;
  if (!(c * c <= (sigma1_sq - 1.0) * (sigma2_sq - 1.0))) {
    fail("(sigma3_sq - 1)^2 <= (sigma1_sq - 1)(sigma2_sq - 1) violated (conditional covariance not PSD)");
  }
}

PlanarSpec rescale_to_unit_gradient(const RawPlanarSpec& raw) {
  if (!(raw.gamma1_sq > 0.0) || !(raw.gamma2_sq > 0.0)) {
    throw std::invalid_argument("rescale_to_unit_gradient: gradient variances must be positive");
  }
  PlanarSpec s;
  s.gamma1_sq = 1.0;
  s.gamma2_sq = 1.0;
  s.sigma1_sq = raw.hess11_var / (raw.gamma1_sq * raw.gamma1_sq);
  s.sigma2_sq = raw.hess22_var / (raw.gamma2_sq * raw.gamma2_sq);
  s.sigma3_sq = raw.hess12_var / (raw.gamma1_sq * raw.gamma2_sq);
  s.validate();
  return s;
}

double g_kernel(double z1, double z2, double x, double a1_sq, double a2_sq, double a3_sq) {
  if (!(a1_sq > 0.0 && a2_sq > 0.0 && a3_sq > 0.0)) {
    throw std::invalid_argument("g_kernel: a1_sq, a2_sq, a3_sq must be positive");
  }
  const double a1 = std::sqrt(a1_sq);
  const double a2 = std::sqrt(a2_sq);
  const double d1 = z1 - x / a1;
  const double d2 = z2 - x / a2;
  if (!(d1 < 0.0 && d2 < 0.0)) return 0.0;
  const double b = a3_sq / (a1 * a2);
  const double p = d1 * d2;
  const double s = std::sqrt(p / b);
  const double phi_minus_half = 0.5 * std::erf(s / numerics::kSqrt2);
  const double dens = numerics::kInvSqrt2Pi * std::exp(-0.5 * s * s);
  return a1 * a2 * ((p - b) * phi_minus_half + std::sqrt(b * p) * dens);
}

PlanarCorrelations planar_correlations(const PlanarSpec& spec) {
  spec.validate();
  const double rho = spec.sigma3_sq / std::sqrt(spec.sigma1_sq * spec.sigma2_sq);
  const double rho_tilde =
      (spec.sigma3_sq - 1.0) / std::sqrt((spec.sigma1_sq - 1.0) * (spec.sigma2_sq - 1.0));
  if (!(rho < 1.0)) {
    throw std::invalid_argument("planar_correlations: rho = 1, degenerate bivariate law unsupported");
  }
  if (!(std::abs(rho_tilde) < 1.0)) {
    throw std::invalid_argument("planar_correlations: |rho_tilde| = 1, degenerate bivariate law unsupported");
  }
  return {BivariateCorrelation(rho), BivariateCorrelation(rho_tilde)};
}

namespace {

// Kernel with a1, a2 and b precomputed; x is fixed per call site.
struct Kernel {
  double a1;
  double a2;
  double b;
  double x;
  double operator()(double z1, double z2) const {
    const double d1 = z1 - x / a1;
    const double d2 = z2 - x / a2;
    if (!(d1 < 0.0 && d2 < 0.0)) return 0.0;
    const double p = d1 * d2;
    const double s = std::sqrt(p / b);
    return a1 * a2 *
           ((p - b) * 0.5 * std::erf(s / numerics::kSqrt2) +
            std::sqrt(b * p) * numerics::kInvSqrt2Pi * std::exp(-0.5 * s * s));
  }
};

double kernel_expectation(const Kernel& k, BivariateCorrelation rho, const QuadConfig& cfg,
                          const char* what) {
  const numerics::UpperLimits upper{k.x / k.a1, k.x / k.a2};
  return numerics::expect_bivariate(k, rho, cfg, upper).value_or_throw(what);
}

}  // namespace

PlanarPeakHeight::PlanarPeakHeight(const PlanarSpec& spec, const QuadConfig& cfg)
    : spec_(spec),
      cfg_(cfg),
      a1_(0.0),
      a2_(0.0),
      rho_tilde_(planar_correlations(spec).rho_tilde),
      denominator_(0.0) {
  cfg_.validate();
  const PlanarCorrelations corr = planar_correlations(spec_);
  a1_ = std::sqrt(spec_.sigma1_sq - 1.0);
  a2_ = std::sqrt(spec_.sigma2_sq - 1.0);
  const double s1 = std::sqrt(spec_.sigma1_sq);
  const double s2 = std::sqrt(spec_.sigma2_sq);
  const Kernel den{s1, s2, spec_.sigma3_sq / (s1 * s2), 0.0};
  denominator_ = kernel_expectation(den, corr.rho, cfg_, "planar denominator");
  if (!(denominator_ > 1e-14)) {
    throw std::invalid_argument("PlanarPeakHeight: denominator below 1e-14, degenerate spec");
  }
}

double PlanarPeakHeight::density(double x) const {
  if (!std::isfinite(x)) throw std::domain_error("PlanarPeakHeight::density: non-finite argument");
  const double weight = numerics::kInvSqrt2Pi * std::exp(-0.5 * x * x);
  if (weight == 0.0) return 0.0;
  const Kernel num{a1_, a2_, spec_.sigma3_sq / (a1_ * a2_), x};
  return weight * kernel_expectation(num, rho_tilde_, cfg_, "planar numerator") / denominator_;
}

double PlanarPeakHeight::segment(int k) const {
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    const auto it = segment_cache_.find(k);
    if (it != segment_cache_.end()) return it->second;
  }
  const double lo = static_cast<double>(k);
  const double value = numerics::integrate([this](double x) { return density(x); }, lo, lo + 1.0, cfg_)
                           .value_or_throw("planar tail segment");
  std::lock_guard<std::mutex> lock(cache_mutex_);
  return segment_cache_.emplace(k, value).first->second;
}

double PlanarPeakHeight::upper_tail(double from) const {
  return numerics::integrate([this](double x) { return density(x); }, from,
                             std::numeric_limits<double>::infinity(), cfg_)
      .value_or_throw("planar upper tail");
}

double PlanarPeakHeight::tail(double u) const {
  if (!std::isfinite(u)) throw std::domain_error("PlanarPeakHeight::tail: non-finite argument");
  const int top = static_cast<int>(std::ceil(cfg_.truncation_radius));
  if (u >= top) return upper_tail(u);
  const int first = static_cast<int>(std::ceil(u));
  double total = upper_tail(static_cast<double>(top));
  for (int k = top - 1; k >= first; --k) total += segment(k);
  if (static_cast<double>(first) > u) {
    total += numerics::integrate([this](double x) { return density(x); }, u,
                                 static_cast<double>(first), cfg_)
                 .value_or_throw("planar tail head");
  }
  return total;
}

std::vector<double> PlanarPeakHeight::tail_table(std::span<const double> ascending_u) const {
  std::vector<double> out(ascending_u.size());
  if (ascending_u.empty()) return out;
  for (std::size_t i = 1; i < ascending_u.size(); ++i) {
    if (!(ascending_u[i - 1] <= ascending_u[i])) {
      throw std::invalid_argument("tail_table: grid must be ascending");
    }
  }
  std::size_t i = ascending_u.size() - 1;
  out[i] = tail(ascending_u[i]);
  while (i > 0) {
    --i;
    const double piece =
        numerics::integrate([this](double x) { return density(x); }, ascending_u[i],
                            ascending_u[i + 1], cfg_)
            .value_or_throw("planar tail table");
    out[i] = out[i + 1] + piece;
  }
  return out;
}

std::shared_ptr<const PlanarPeakHeight> planar_evaluator(const PlanarSpec& spec, const QuadConfig& cfg) {
  using Key = std::tuple<double, double, double, double, double, double, double, double, int>;
  static std::mutex mutex;
  static std::map<Key, std::shared_ptr<const PlanarPeakHeight>> cache;
  const Key key{spec.gamma1_sq, spec.gamma2_sq, spec.sigma1_sq, spec.sigma2_sq, spec.sigma3_sq,
                cfg.abs_tol,    cfg.rel_tol,    cfg.truncation_radius, cfg.max_subdivisions};
  {
    std::lock_guard<std::mutex> lock(mutex);
    const auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto built = std::make_shared<const PlanarPeakHeight>(spec, cfg);
  std::lock_guard<std::mutex> lock(mutex);
  return cache.emplace(key, std::move(built)).first->second;
}

double peak_density_planar(const PlanarSpec& spec, double x, const QuadConfig& cfg) {
  return planar_evaluator(spec, cfg)->density(x);
}

double peak_tail_planar(const PlanarSpec& spec, double u, const QuadConfig& cfg) {
  return planar_evaluator(spec, cfg)->tail(u);
}

}  // namespace peakheight::planar
