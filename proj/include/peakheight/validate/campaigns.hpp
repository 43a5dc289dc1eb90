#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "peakheight/parallel.hpp"
#include "peakheight/validate/peaks.hpp"

namespace peakheight::validate {

/// Fewer peaks than a verdict needs.
class InsufficientPeaksError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CampaignOptions {
  std::uint64_t seed = 1;
  /// 0 selects the campaign default.
  std::size_t replications = 0;
  /// 0 selects the campaign default.
  double step = 0.0;
  Execution exec = Execution::kParallel;
  /// Keep per-replication peaks in the report (for CSV export).
  bool keep_peaks = false;
};

/// Location window of the binned nonstationary campaign.
struct BinReport {
  double t_lo = 0.0;
  double t_hi = 0.0;
  double rho = 0.0;  // at the window centre
  std::size_t n_peaks = 0;
  double ks = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct CampaignReport {
  std::string name;
  std::size_t n_peaks = 0;
  double ks = 0.0;
  double threshold = 0.0;
  bool passed = false;
  std::string grid;  // human-readable grid parameters
  std::uint64_t seed = 0;
  std::size_t replications = 0;
  std::vector<BinReport> bins;
  std::vector<std::string> notes;
  int dims = 1;
  std::vector<std::vector<PeakSample>> peaks;
};

/// Squared-exponential process, step 0.01, 2000 paths of 10 correlation
/// lengths, compared with the stationary law at kappa = 1 + kappa_offset.
/// Threshold 0.03.
CampaignReport campaign_stationary_1d(const CampaignOptions& opt, double kappa_offset = 0.0);

/// Time-warped squared exponential f(t) = t + 0.3 sin t on [0, 4 pi]:
/// checks rho(t) = -1/sqrt3 at t = 0, 1, 2 within 1e-4, then pooled KS
/// against the nonstationary law. Threshold 0.03.
CampaignReport campaign_time_warp(const CampaignOptions& opt);

/// Amplitude mixture binned by location into windows where rho varies by
/// less than 0.02. Each bin needs >= 400 peaks; threshold 0.06 per bin.
CampaignReport campaign_amplitude_mixture(const CampaignOptions& opt);

/// exp(-t1^2/2 - t2^2/8) on a 512 x 512 grid by circulant embedding,
/// pooled peaks against the planar law of the rescaled spec. Threshold 0.05.
CampaignReport campaign_planar(const CampaignOptions& opt);

/// Cosine field, N in {1, 2}, one period per axis per draw. Threshold 0.03.
CampaignReport campaign_cosine(int n_dim, const std::vector<double>& omegas, const CampaignOptions& opt);

/// Two-sample KS between N = 2 cosine peaks at omega = (1, 2.5) and (1, 1).
CampaignReport campaign_cosine_frequency_invariance(const CampaignOptions& opt);

/// Throws InsufficientPeaksError when the report's pooled or per-bin counts
/// fall below what its verdict requires.
void require_enough_peaks(const CampaignReport& report, std::size_t minimum);

}  // namespace peakheight::validate
