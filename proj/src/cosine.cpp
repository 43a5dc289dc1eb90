#include "peakheight/cosine.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "peakheight/numerics/normal.hpp"

namespace peakheight::cosine {

using numerics::EstimateWithError;
using numerics::kInvSqrt2Pi;
using numerics::QuadConfig;

CosineSpec CosineSpec::unit(int n_dim) {
  CosineSpec s;
  s.n_dim = n_dim;
  s.omegas.assign(static_cast<std::size_t>(std::max(n_dim, 0)), 1.0);
  s.validate();
  return s;
}

void CosineSpec::validate() const {
  if (n_dim < 1) throw std::invalid_argument("CosineSpec: n_dim >= 1 violated");
  if (omegas.size() != static_cast<std::size_t>(n_dim)) {
    throw std::invalid_argument("CosineSpec: need exactly n_dim frequencies");
  }
  for (double w : omegas) {
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("CosineSpec: frequencies must be positive");
  }
}

namespace {

// G_k(c) = integral over w in [0, inf)^k of prod w_i phi(w_i) 1{sum w_i >= c}.
// G_k(c) = (2 pi)^{-k/2} for c <= 0, and for c > 0
//   G_k(c) = int_0^c w phi(w) G_{k-1}(c - w) dw + (2 pi)^{-(k-1)/2} phi(c),
// the second term being the part where one coordinate alone clears c.
double orthant_moment(int k, double c, const QuadConfig& cfg) {
  if (c <= 0.0) return std::pow(kInvSqrt2Pi, k);
  const double phi_c = kInvSqrt2Pi * std::exp(-0.5 * c * c);
  if (k == 1) return phi_c;
  const QuadConfig inner = cfg.scaled(0.1);
  auto integrand = [k, c, &inner](double w) {
    return w * kInvSqrt2Pi * std::exp(-0.5 * w * w) * orthant_moment(k - 1, c - w, inner);
  };
  const double head = numerics::integrate(integrand, 0.0, c, cfg).value_or_throw("cosine orthant moment");
  return head + std::pow(kInvSqrt2Pi, k - 1) * phi_c;
}

void require_u(double u, const char* what) {
  if (!std::isfinite(u)) throw std::domain_error(std::string(what) + ": non-finite threshold");
}

}  // namespace

double peak_tail_cosine_quad(int n_dim, double u, const QuadConfig& cfg) {
  require_u(u, "peak_tail_cosine_quad");
  cfg.validate();
  if (n_dim < 1) throw std::invalid_argument("peak_tail_cosine_quad: n_dim >= 1 violated");
  if (n_dim > kMaxQuadratureDim) {
    throw std::invalid_argument("peak_tail_cosine_quad: N > 4 is outside the quadrature budget; use peak_tail_cosine_mc");
  }
  if (u <= 0.0) return 1.0;
  const double scale = std::pow(numerics::kSqrt2Pi, n_dim);
  return scale * orthant_moment(n_dim, std::sqrt(static_cast<double>(n_dim)) * u, cfg.scaled(1.0 / scale));
}

EstimateWithError peak_tail_cosine_mc(int n_dim, double u, std::size_t n_samples,
                                      const numerics::RandomStream& stream, Execution exec) {
  require_u(u, "peak_tail_cosine_mc");
  if (n_dim < 1) throw std::invalid_argument("peak_tail_cosine_mc: n_dim >= 1 violated");
  if (n_samples < 2) throw std::invalid_argument("peak_tail_cosine_mc: need at least 2 samples");
  if (u < 0.0) return {1.0, 0.0, n_samples};
  const double prefactor = std::pow(0.5 * numerics::kPi, 0.5 * n_dim);
  const double threshold = std::sqrt(static_cast<double>(n_dim)) * u;
  const std::size_t chunks = std::min(kDefaultChunks, n_samples);
  auto partials = run_chunks<numerics::MeanAccumulator>(
      chunks,
      [&](std::size_t k) {
        numerics::RandomStream rs = stream.substream(static_cast<std::uint32_t>(k));
        numerics::MeanAccumulator acc;
        const std::size_t count = chunk_begin(n_samples, chunks, k + 1) - chunk_begin(n_samples, chunks, k);
        for (std::size_t i = 0; i < count; ++i) {
          double prod = prefactor;
          double sum = 0.0;
          for (int d = 0; d < n_dim; ++d) {
            const double w = std::abs(rs.next_normal());
            prod *= w;
            sum += w;
          }
          acc.add(sum >= threshold ? prod : 0.0);
        }
        return acc;
      },
      exec);
  numerics::MeanAccumulator total;
  for (const auto& p : partials) total.merge(p);
  return total.estimate();
}

EstimateWithError peak_tail_cosine(int n_dim, double u, const QuadConfig& cfg, std::size_t n_samples,
                                   const numerics::RandomStream& stream) {
  if (n_dim <= kMaxQuadratureDim) return {peak_tail_cosine_quad(n_dim, u, cfg), 0.0, 1};
  return peak_tail_cosine_mc(n_dim, u, n_samples, stream);
}

double cosine_field_eval(const CosineSpec& spec, std::span<const double> zeta, std::span<const double> t) {
  const auto n = static_cast<std::size_t>(spec.n_dim);
  if (zeta.size() != 2 * n) throw std::invalid_argument("cosine_field_eval: need 2N coefficients");
  if (t.size() != n) throw std::invalid_argument("cosine_field_eval: point dimension must equal N");
  if (spec.omegas.size() != n) throw std::invalid_argument("cosine_field_eval: need N frequencies");
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double arg = spec.omegas[k] * t[k];
    sum += zeta[2 * k] * std::cos(arg) + zeta[2 * k + 1] * std::sin(arg);
  }
  return sum / std::sqrt(static_cast<double>(n));
}

}  // namespace peakheight::cosine
