#include "peakheight/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "peakheight/numerics/normal.hpp"

namespace peakheight::rmt {

using numerics::EstimateWithError;
using numerics::MeanAccumulator;
using numerics::RandomStream;

GoiCovParam::GoiCovParam(double c, int n_dim) : c_(c), n_(n_dim) {
  if (n_dim < 1) throw std::invalid_argument("GoiCovParam: N >= 1 violated");
  if (!std::isfinite(c) || !(c > -1.0 / n_dim)) {
    throw std::invalid_argument("GoiCovParam: c > -1/N violated (c = " + std::to_string(c) + ")");
  }
}

double goi_entry_covariance(int i, int j, int k, int l, double c) {
  if (i < 0 || j < 0 || k < 0 || l < 0) throw std::out_of_range("goi_entry_covariance: negative index");
  auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  return 0.5 * (d(i, k) * d(j, l) + d(i, l) * d(j, k)) + c * d(i, j) * d(k, l);
}

SymmetricMatrixSample sample_goe(int n_dim, RandomStream& stream) {
  if (n_dim < 1) throw std::invalid_argument("sample_goe: N >= 1 violated");
  SymmetricMatrixSample m{Eigen::MatrixXd(n_dim, n_dim)};
  for (int i = 0; i < n_dim; ++i) {
    m.entries(i, i) = stream.next_normal();
    for (int j = i + 1; j < n_dim; ++j) {
      const double z = stream.next_normal() * numerics::kInvSqrt2;
      m.entries(i, j) = z;
      m.entries(j, i) = z;
    }
  }
  return m;
}

SymmetricMatrixSample sample_goi(int n_dim, double c, RandomStream& stream) {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument(
        "sample_goi: c >= 0 required for the additive construction; "
        "use expect_goi (importance sampling) for c < 0");
  }
  SymmetricMatrixSample m = sample_goe(n_dim, stream);
  const double shift = std::sqrt(c) * stream.next_normal();
  m.entries.diagonal().array() += shift;
  return m;
}

std::vector<double> eigenvalues(const SymmetricMatrixSample& m) {
  const int n = m.n_dim();
  if (n == 1) return {m.entries(0, 0)};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.entries, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigenvalues: symmetric eigensolver failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + n};
}

double goi_log_normalizer(int n_dim) {
  if (n_dim < 1) throw std::invalid_argument("goi_log_normalizer: N >= 1 violated");
  double s = 0.5 * n_dim * std::log(2.0);
  for (int i = 1; i <= n_dim; ++i) s += std::lgamma(0.5 * i);
  return s;
}

double goi_ordered_eig_logdensity(std::span<const double> lambdas, GoiCovParam c) {
  const int n = c.n_dim();
  if (static_cast<int>(lambdas.size()) != n) throw std::invalid_argument("goi_ordered_eig_logdensity: need N eigenvalues");
  if (!std::is_sorted(lambdas.begin(), lambdas.end())) {
    throw std::invalid_argument("goi_ordered_eig_logdensity: eigenvalues must be sorted ascending");
  }
  const double nc1 = 1.0 + n * c.c();
  double sum = 0.0, sum_sq = 0.0, log_vdm = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += lambdas[i];
    sum_sq += lambdas[i] * lambdas[i];
    for (int j = i + 1; j < n; ++j) log_vdm += std::log(lambdas[j] - lambdas[i]);
  }
  return -goi_log_normalizer(n) - 0.5 * std::log(nc1) - 0.5 * sum_sq + c.c() * sum * sum / (2.0 * nc1) + log_vdm;
}

namespace {

struct ChunkDraws {
  std::vector<double> eig;
  std::vector<double> weights;
};

}  // namespace

GoiEigenSample GoiEigenSample::draw(GoiCovParam c, std::size_t n_samples, const RandomStream& stream,
                                    GoiSampling method, Execution exec, std::uint32_t substream_offset) {
  if (n_samples < 2) throw std::invalid_argument("GoiEigenSample: need at least 2 samples");
  bool direct = false;
  switch (method) {
    case GoiSampling::kAuto: direct = c.c() >= 0.0; break;
    case GoiSampling::kDirect:
      if (c.c() < 0.0) throw std::invalid_argument("GoiEigenSample: direct sampling needs c >= 0");
      direct = true;
      break;
    case GoiSampling::kImportance: direct = false; break;
  }
  const int n = c.n_dim();
  const double nc1 = 1.0 + n * c.c();
  const double log_w0 = -0.5 * std::log(nc1);
  const double w_scale = c.c() / (2.0 * nc1);

  const std::size_t chunks = std::min(kDefaultChunks, n_samples);
  auto parts = run_chunks<ChunkDraws>(
      chunks,
      [&](std::size_t k) {
        RandomStream s = stream.substream(substream_offset + static_cast<std::uint32_t>(k));
        const std::size_t count = chunk_begin(n_samples, chunks, k + 1) - chunk_begin(n_samples, chunks, k);
        ChunkDraws out;
        out.eig.reserve(count * static_cast<std::size_t>(n));
        out.weights.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
          SymmetricMatrixSample m = direct ? sample_goi(n, c.c(), s) : sample_goe(n, s);
          const std::vector<double> ev = rmt::eigenvalues(m);
          out.eig.insert(out.eig.end(), ev.begin(), ev.end());
          if (direct) {
            out.weights.push_back(1.0);
          } else {
            const double tr = m.entries.trace();
            out.weights.push_back(std::exp(log_w0 + w_scale * tr * tr));
          }
        }
        return out;
      },
      exec);

  GoiEigenSample sample;
  sample.n_ = n;
  sample.c_ = c.c();
  sample.eig_.reserve(n_samples * static_cast<std::size_t>(n));
  sample.weights_.reserve(n_samples);
  for (const ChunkDraws& p : parts) {
    sample.eig_.insert(sample.eig_.end(), p.eig.begin(), p.eig.end());
    sample.weights_.insert(sample.weights_.end(), p.weights.begin(), p.weights.end());
  }
  if (sample.effective_sample_size() < 0.01 * static_cast<double>(n_samples)) {
    throw WeightDegeneracyError("GOI importance weights degenerate: effective sample size " +
                                std::to_string(sample.effective_sample_size()) + " below 1% of " +
                                std::to_string(n_samples) + " (c = " + std::to_string(c.c()) +
                                " too close to -1/N)");
  }
  return sample;
}

double GoiEigenSample::effective_sample_size() const {
  double s = 0.0, s2 = 0.0;
  for (double w : weights_) {
    s += w;
    s2 += w * w;
  }
  return s2 > 0.0 ? s * s / s2 : 0.0;
}

EstimateWithError GoiEigenSample::expect(const std::function<double(std::span<const double>)>& g) const {
  MeanAccumulator acc;
  for (std::size_t i = 0; i < size(); ++i) acc.add(weights_[i] * g(eigenvalues(i)));
  return acc.estimate();
}

EstimateWithError expect_goi(const std::function<double(std::span<const double>)>& g, GoiCovParam c,
                             std::size_t n_samples, const RandomStream& stream, GoiSampling method) {
  return GoiEigenSample::draw(c, n_samples, stream, method).expect(g);
}

KappaClass classify_kappa(double kappa, int n_dim) {
  if (n_dim < 1) throw std::invalid_argument("classify_kappa: N >= 1 violated");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("classify_kappa: kappa > 0 required");
  const double bound = (n_dim + 2.0) / n_dim;
  const double gap = kappa * kappa - bound;
  KappaClass out;
  out.kappa = kappa;
  if (std::abs(gap) <= 1e-9) {
    out.branch = KappaBranch::kCritical;
    return out;
  }
  if (gap > 0.0) {
    throw std::invalid_argument("kappa^2 = " + std::to_string(kappa * kappa) + " exceeds (N+2)/N = " +
                                std::to_string(bound) + "; the fact kappa^2 <= (N+2)/N holds for every valid covariance");
  }
  out.branch = KappaBranch::kSubcritical;
  out.near_critical = -gap < 1e-6;
  return out;
}

KappaClass kappa_from_phi(double phi1, double phi2, int n_dim) {
  if (!std::isfinite(phi1) || !std::isfinite(phi2)) throw std::invalid_argument("kappa_from_phi: non-finite input");
  if (!(phi1 < 0.0)) throw std::invalid_argument("kappa_from_phi: phi'(0) < 0 required");
  if (!(phi2 > 0.0)) throw std::invalid_argument("kappa_from_phi: phi''(0) > 0 required");
  return classify_kappa(-phi1 / std::sqrt(phi2), n_dim);
}

AnisoSpec AnisoSpec::with_kappa(int n_dim, double kappa) {
  if (n_dim < 1) throw std::invalid_argument("AnisoSpec: N >= 1 violated");
  if (!(kappa > 0.0)) throw std::invalid_argument("AnisoSpec: kappa > 0 required");
  AnisoSpec s;
  s.n_dim = n_dim;
  s.a_matrix = Eigen::MatrixXd::Identity(n_dim, n_dim);
  s.phi1 = -0.5;
  s.phi2 = 0.25 / (kappa * kappa);
  s.validate();
  return s;
}

void AnisoSpec::validate() const {
  if (n_dim < 1) throw std::invalid_argument("AnisoSpec: N >= 1 violated");
  if (a_matrix.rows() != n_dim || a_matrix.cols() != n_dim) throw std::invalid_argument("AnisoSpec: A must be N x N");
  if (!a_matrix.allFinite()) throw std::invalid_argument("AnisoSpec: A has non-finite entries");
  const double norm = a_matrix.norm();
  if (!(std::abs(a_matrix.determinant()) > 1e-12 * std::pow(norm, n_dim))) {
    throw std::invalid_argument("AnisoSpec: |det A| > 1e-12 ||A||^N violated (A singular)");
  }
  kappa_from_phi(phi1, phi2, n_dim);
}

KappaClass AnisoSpec::kappa() const { return kappa_from_phi(phi1, phi2, n_dim); }

namespace {

// coefficients of prod_j (slope * y + d_j) in ascending powers of y
void shifted_product(std::span<const double> lambdas, double slope, double shift, std::vector<double>& coef) {
  coef.assign(lambdas.size() + 1, 0.0);
  coef[0] = 1.0;
  std::size_t deg = 0;
  for (double l : lambdas) {
    const double d = slope * shift - l;
    for (std::size_t k = deg + 2; k-- > 0;) {
      const double lower = k > 0 ? coef[k - 1] : 0.0;
      coef[k] = coef[k] * d + lower * slope;
    }
    ++deg;
  }
}

// m_k = int_0^inf y^k phi(L + y) dy, k = 0..kmax
void shifted_gaussian_moments(double lower, std::size_t kmax, std::vector<double>& m) {
  m.assign(kmax + 1, 0.0);
  m[0] = numerics::std_normal_tail(lower);
  if (kmax >= 1) m[1] = numerics::std_normal_pdf(lower) - lower * m[0];
  for (std::size_t k = 2; k <= kmax; ++k) m[k] = (k - 1) * m[k - 2] - lower * m[k - 1];
}

double max_of(std::span<const double> v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

AnisoPeakHeight::AnisoPeakHeight(const AnisoSpec& spec, const RandomStream& stream, std::size_t n_samples,
                                 Execution exec)
    : kappa_((spec.validate(), spec.kappa())),
      n_(spec.n_dim),
      slope_(kappa_.kappa * numerics::kInvSqrt2),
      exec_(exec) {
  const GoiCovParam half(0.5, n_);
  denominator_draws_ = GoiEigenSample::draw(half, n_samples, stream, GoiSampling::kAuto, exec, kDefaultChunks);
  if (kappa_.branch == KappaBranch::kSubcritical) {
    const GoiCovParam c(0.5 * (1.0 - kappa_.kappa * kappa_.kappa), n_);
    numerator_draws_ = GoiEigenSample::draw(c, n_samples, stream, GoiSampling::kAuto, exec, 0);
  }
  denominator_terms_.resize(denominator_draws_.size());
  MeanAccumulator acc;
  for (std::size_t i = 0; i < denominator_draws_.size(); ++i) {
    const auto ev = denominator_draws_.eigenvalues(i);
    double t = 0.0;
    if (max_of(ev) < 0.0) {
      t = denominator_draws_.weight(i);
      for (double l : ev) t *= -l;
    }
    denominator_terms_[i] = t;
    acc.add(t);
  }
  denominator_ = acc.estimate();
  if (!(denominator_.value > 3.0 * denominator_.std_error)) {
    throw std::runtime_error("AnisoPeakHeight: denominator " + denominator_.to_string() +
                             " within 3 stderr of 0; estimate unreliable");
  }
}

EstimateWithError AnisoPeakHeight::ratio(const std::vector<double>& numerator_terms) const {
  MeanAccumulator num_acc;
  for (double t : numerator_terms) num_acc.add(t);
  const EstimateWithError num = num_acc.estimate();
  const double d = denominator_.value;
  const double r = num.value / d;
  EstimateWithError out{r, 0.0, numerator_terms.size()};
  if (kappa_.branch == KappaBranch::kCritical) {
    // shared draws: Var(R) ~ Var(T - R D) / (n D^2)
    MeanAccumulator resid;
    for (std::size_t i = 0; i < numerator_terms.size(); ++i) resid.add(numerator_terms[i] - r * denominator_terms_[i]);
    out.std_error = std::sqrt(resid.variance() / static_cast<double>(numerator_terms.size())) / d;
  } else {
    const double rel = num.std_error * num.std_error + r * r * denominator_.std_error * denominator_.std_error;
    out.std_error = std::sqrt(rel) / d;
  }
  return out;
}

EstimateWithError AnisoPeakHeight::tail(double u) const {
  if (!std::isfinite(u)) throw std::domain_error("AnisoPeakHeight::tail: non-finite threshold");
  std::vector<double> terms;
  if (kappa_.branch == KappaBranch::kCritical) {
    const double cut = -std::sqrt((n_ + 2.0) / (2.0 * n_)) * u;
    terms.resize(denominator_terms_.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const auto ev = denominator_draws_.eigenvalues(i);
      double mean = 0.0;
      for (double l : ev) mean += l;
      mean /= n_;
      terms[i] = mean <= cut ? denominator_terms_[i] : 0.0;
    }
    return ratio(terms);
  }
  terms.resize(numerator_draws_.size());
  std::vector<double> coef, moments;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto ev = numerator_draws_.eigenvalues(i);
    const double lower = std::max(u, max_of(ev) / slope_);
    shifted_product(ev, slope_, lower, coef);
    shifted_gaussian_moments(lower, coef.size() - 1, moments);
    double s = 0.0;
    for (std::size_t k = 0; k < coef.size(); ++k) s += coef[k] * moments[k];
    terms[i] = numerator_draws_.weight(i) * std::max(s, 0.0);
  }
  return ratio(terms);
}

EstimateWithError AnisoPeakHeight::density(double x) const {
  if (!std::isfinite(x)) throw std::domain_error("AnisoPeakHeight::density: non-finite argument");
  if (kappa_.branch == KappaBranch::kCritical) {
    throw std::invalid_argument("AnisoPeakHeight::density: the critical branch has no density in this form");
  }
  const double phi_x = numerics::std_normal_pdf(x);
  const double level = slope_ * x;
  std::vector<double> terms(numerator_draws_.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto ev = numerator_draws_.eigenvalues(i);
    double t = 0.0;
    if (max_of(ev) < level) {
      t = numerator_draws_.weight(i) * phi_x;
      for (double l : ev) t *= level - l;
    }
    terms[i] = t;
  }
  return ratio(terms);
}

double AnisoPeakHeight::numerator_integrand(double x) const {
  const double level = slope_ * x;
  double s = 0.0;
  for (std::size_t i = 0; i < numerator_draws_.size(); ++i) {
    const auto ev = numerator_draws_.eigenvalues(i);
    if (!(max_of(ev) < level)) continue;
    double t = numerator_draws_.weight(i);
    for (double l : ev) t *= level - l;
    s += t;
  }
  return numerics::std_normal_pdf(x) * s / static_cast<double>(numerator_draws_.size());
}

EstimateWithError AnisoPeakHeight::tail_by_quadrature(double u, const numerics::QuadConfig& cfg) const {
  if (!std::isfinite(u)) throw std::domain_error("AnisoPeakHeight::tail_by_quadrature: non-finite threshold");
  if (kappa_.branch == KappaBranch::kCritical) {
    throw std::invalid_argument("AnisoPeakHeight::tail_by_quadrature: subcritical branch only");
  }
  cfg.validate();
  const double num = numerics::integrate([this](double x) { return numerator_integrand(x); }, u,
                                         std::numeric_limits<double>::infinity(), cfg)
                         .value_or_throw("aniso outer quadrature");
  // the analytic route has the same sampling error
  EstimateWithError ref = tail(u);
  ref.value = num / denominator_.value;
  return ref;
}

EstimateWithError peak_tail_aniso(const AnisoSpec& spec, double u, std::size_t n_samples, const RandomStream& stream,
                                  const numerics::QuadConfig& cfg) {
  cfg.validate();
  return AnisoPeakHeight(spec, stream, n_samples).tail(u);
}

}  // namespace peakheight::rmt
