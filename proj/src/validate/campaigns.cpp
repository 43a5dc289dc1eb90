#include "peakheight/validate/campaigns.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "peakheight/cosine.hpp"
#include "peakheight/numerics/normal.hpp"
#include "peakheight/planar.hpp"
#include "peakheight/process1d.hpp"
#include "peakheight/validate/ks.hpp"
#include "peakheight/validate/simulate.hpp"
#include "peakheight/validate/spectral.hpp"

namespace peakheight::validate {

using numerics::RandomStream;

namespace {

// stream indices keep the campaigns' random numbers disjoint
enum StreamId : std::uint64_t {
  kStationaryStream = 101,
  kWarpStream,
  kMixtureStream,
  kPlanarStream,
  kCosineStream,
  kInvarianceStream,
  kInvarianceReferenceStream,
};

template <class DrawPeaks>
std::vector<std::vector<PeakSample>> replicate(std::size_t reps, const RandomStream& base, DrawPeaks&& draw,
                                               Execution exec) {
  const std::size_t chunks = std::min(kDefaultChunks, reps);
  auto parts = run_chunks<std::vector<std::vector<PeakSample>>>(
      chunks,
      [&](std::size_t k) {
        RandomStream s = base.substream(static_cast<std::uint32_t>(k));
        std::vector<std::vector<PeakSample>> out;
        const std::size_t lo = chunk_begin(reps, chunks, k), hi = chunk_begin(reps, chunks, k + 1);
        for (std::size_t r = lo; r < hi; ++r) draw(s, out);
        return out;
      },
      exec);
  std::vector<std::vector<PeakSample>> all;
  for (auto& p : parts) {
    for (auto& rep : p) all.push_back(std::move(rep));
  }
  return all;
}

std::vector<double> pooled_heights(const std::vector<std::vector<PeakSample>>& reps) {
  std::vector<double> h;
  for (const auto& r : reps) {
    for (const PeakSample& p : r) h.push_back(p.height);
  }
  return h;
}

std::string describe(const Grid1D& g) {
  std::ostringstream os;
  os << "[" << g.origin << ", " << g.origin + g.length() << "] step " << g.step << " (" << g.n_points << " points)";
  return os.str();
}

void finish(CampaignReport& rep, const KsResult& ks, std::vector<std::vector<PeakSample>>&& peaks,
            const CampaignOptions& opt) {
  rep.ks = ks.statistic;
  rep.passed = ks.sufficient() && ks.statistic < rep.threshold;
  if (opt.keep_peaks) rep.peaks = std::move(peaks);
}

double rho_at(const CovarianceHandle1D& cov, double t) {
  return process1d::conditional_rho(spectral_moments_1d(cov, t)).value();
}

}  // namespace

CampaignReport campaign_stationary_1d(const CampaignOptions& opt, double kappa_offset) {
  const double step = opt.step > 0.0 ? opt.step : 0.01;
  const std::size_t reps = opt.replications ? opt.replications : 2000;
  const Grid1D grid = Grid1D::covering(0.0, 10.0, step);
  const PathSimulator1D sim(squared_exponential_1d(1.0), grid);
  auto peaks = replicate(
      reps, RandomStream(opt.seed, kStationaryStream),
      [&](RandomStream& s, auto& out) { out.push_back(find_peaks(sim.draw(s), grid)); }, opt.exec);

  const process1d::StationaryKappa kappa(1.0 + kappa_offset);
  CampaignReport rep;
  rep.name = "stationary-1d";
  rep.threshold = 0.03;
  rep.grid = describe(grid);
  rep.seed = opt.seed;
  rep.replications = reps;
  rep.notes.push_back("reference kappa " + std::to_string(kappa.value()));
  const EmpiricalCDF emp(pooled_heights(peaks));
  rep.n_peaks = emp.count();
  finish(rep, ks_distance(emp, [&](double u) { return process1d::peak_tail_stationary_1d(kappa, u); }),
         std::move(peaks), opt);
  return rep;
}

CampaignReport campaign_time_warp(const CampaignOptions& opt) {
  const double step = opt.step > 0.0 ? opt.step : 0.01;
  const std::size_t reps = opt.replications ? opt.replications : 1500;
  const CovarianceHandle1D cov = time_warp_1d(0.3);
  const double target = -1.0 / std::sqrt(3.0);

  CampaignReport rep;
  rep.name = "time-warp-1d";
  rep.threshold = 0.03;
  rep.seed = opt.seed;
  rep.replications = reps;
  bool rho_ok = true;
  double rho_sum = 0.0;
  for (double t : {0.0, 1.0, 2.0}) {
    const double r = rho_at(cov, t);
    rho_sum += r;
    rho_ok = rho_ok && std::abs(r - target) < 1e-4;
    rep.notes.push_back("rho(" + std::to_string(t) + ") = " + std::to_string(r));
  }
  const process1d::Rho1D rho(rho_sum / 3.0);

  const Grid1D grid = Grid1D::covering(0.0, 4.0 * numerics::kPi, step);
  rep.grid = describe(grid);
  const PathSimulator1D sim(cov, grid);
  auto peaks = replicate(
      reps, RandomStream(opt.seed, kWarpStream),
      [&](RandomStream& s, auto& out) { out.push_back(find_peaks(sim.draw(s), grid)); }, opt.exec);
  const EmpiricalCDF emp(pooled_heights(peaks));
  rep.n_peaks = emp.count();
  finish(rep, ks_distance(emp, [&](double u) { return process1d::peak_tail_1d(rho, u); }), std::move(peaks), opt);
  if (!rho_ok) {
    rep.passed = false;
    rep.notes.push_back("rho not constant at -1/sqrt3 within 1e-4");
  }
  return rep;
}

CampaignReport campaign_amplitude_mixture(const CampaignOptions& opt) {
  const double step = opt.step > 0.0 ? opt.step : 0.01;
  const std::size_t reps = opt.replications ? opt.replications : 6000;
  const double horizon = 10.0;
  const CovarianceHandle1D cov = amplitude_mixture_1d(horizon);
  const Grid1D grid = Grid1D::covering(0.0, horizon, step);

  CampaignReport rep;
  rep.name = "amplitude-mixture-1d";
  rep.threshold = 0.06;
  rep.grid = describe(grid);
  rep.seed = opt.seed;
  rep.replications = reps;

  // greedy windows over the interior where rho stays within a 0.02 range
  const double probe = 0.05;
  const double t_first = grid.at(1), t_last = grid.at(grid.n_points - 2);
  double lo = t_first;
  while (lo < t_last) {
    double hi = lo, rmin = rho_at(cov, lo), rmax = rmin;
    while (hi < t_last) {
      const double next = std::min(hi + probe, t_last);
      const double r = rho_at(cov, next);
      if (std::max(rmax, r) - std::min(rmin, r) >= 0.02) break;
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
      hi = next;
    }
    if (hi == lo) hi = std::min(lo + probe, t_last);
    BinReport b;
    b.t_lo = lo;
    b.t_hi = hi;
    b.threshold = rep.threshold;
    rep.bins.push_back(b);
    lo = hi;
  }

  const PathSimulator1D sim(cov, grid);
  auto peaks = replicate(
      reps, RandomStream(opt.seed, kMixtureStream),
      [&](RandomStream& s, auto& out) { out.push_back(find_peaks(sim.draw(s), grid)); }, opt.exec);

  std::vector<std::vector<double>> per_bin(rep.bins.size());
  for (const auto& r : peaks) {
    for (const PeakSample& p : r) {
      for (std::size_t k = 0; k < rep.bins.size(); ++k) {
        const bool last = k + 1 == rep.bins.size();
        if (p.location[0] >= rep.bins[k].t_lo && (p.location[0] < rep.bins[k].t_hi || last)) {
          per_bin[k].push_back(p.height);
          break;
        }
      }
    }
  }
  rep.passed = true;
  for (std::size_t k = 0; k < rep.bins.size(); ++k) {
    BinReport& b = rep.bins[k];
    b.rho = rho_at(cov, 0.5 * (b.t_lo + b.t_hi));
    b.n_peaks = per_bin[k].size();
    rep.n_peaks += b.n_peaks;
    if (b.n_peaks < 400) {
      rep.passed = false;
      continue;
    }
    const process1d::Rho1D rho(b.rho);
    const EmpiricalCDF emp(std::move(per_bin[k]));
    b.ks = ks_distance(emp, [&](double u) { return process1d::peak_tail_1d(rho, u); }).statistic;
    b.passed = b.ks < b.threshold;
    rep.ks = std::max(rep.ks, b.ks);
    rep.passed = rep.passed && b.passed;
  }
  if (opt.keep_peaks) rep.peaks = std::move(peaks);
  return rep;
}

namespace {

// F at sorted heights by cubic Hermite interpolation of F on a node grid,
// using F' = -h at the nodes.
std::vector<double> planar_tail_at(const planar::PlanarPeakHeight& ev, const std::vector<double>& sorted) {
  const double dx = 0.05;
  const double lo = std::floor(sorted.front()) - dx, hi = std::ceil(sorted.back()) + dx;
  std::vector<double> nodes;
  for (double x = lo; x <= hi + 1e-12; x += dx) nodes.push_back(x);
  const std::vector<double> f = ev.tail_table(nodes);
  std::vector<double> d(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) d[i] = -ev.density(nodes[i]);
  std::vector<double> out(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const std::size_t k = std::min(nodes.size() - 2, static_cast<std::size_t>((sorted[i] - lo) / dx));
    const double h = nodes[k + 1] - nodes[k];
    const double s = (sorted[i] - nodes[k]) / h;
    const double s2 = s * s, s3 = s2 * s;
    out[i] = (2 * s3 - 3 * s2 + 1) * f[k] + (s3 - 2 * s2 + s) * h * d[k] + (-2 * s3 + 3 * s2) * f[k + 1] +
             (s3 - s2) * h * d[k + 1];
  }
  return out;
}

}  // namespace

CampaignReport campaign_planar(const CampaignOptions& opt) {
  const double step = opt.step > 0.0 ? opt.step : 0.05;
  const std::size_t reps = opt.replications ? opt.replications : 64;
  const Grid1D axis{0.0, step, 512};
  const Grid2D grid{axis, axis};
  // exp(-t1^2/2 - t2^2/8): gradient variances 1 and 1/4, Hessian variances 3, 3/16, 1/4
  const planar::RawPlanarSpec raw{1.0, 0.25, 3.0, 3.0 / 16.0, 0.25};
  const planar::PlanarSpec spec = planar::rescale_to_unit_gradient(raw);
  const StationarySimulator2D sim(separable_gaussian_2d(1.0, 2.0), grid);

  CampaignReport rep;
  rep.name = "planar";
  rep.dims = 2;
  rep.threshold = 0.05;
  rep.seed = opt.seed;
  rep.replications = reps;
  rep.grid = "512 x 512 step " + std::to_string(step) + ", circulant padding " + std::to_string(sim.padding());
  rep.notes.push_back("rescaled spec sigma^2 = (" + std::to_string(spec.sigma1_sq) + ", " +
                      std::to_string(spec.sigma2_sq) + ", " + std::to_string(spec.sigma3_sq) + ")");
  const std::size_t pairs = (reps + 1) / 2;
  auto peaks = replicate(
      pairs, RandomStream(opt.seed, kPlanarStream),
      [&](RandomStream& s, auto& out) {
        auto [a, b] = sim.draw_pair(s);
        out.push_back(find_peaks(a, grid));
        out.push_back(find_peaks(b, grid));
      },
      opt.exec);
  peaks.resize(reps);
  const EmpiricalCDF emp(pooled_heights(peaks));
  rep.n_peaks = emp.count();
  const planar::PlanarPeakHeight ev(spec);
  finish(rep, ks_distance_tabulated(emp, planar_tail_at(ev, emp.sorted())), std::move(peaks), opt);
  return rep;
}

namespace {

std::vector<std::vector<PeakSample>> cosine_peaks(const cosine::CosineSpec& spec, std::size_t reps, double step,
                                                  const RandomStream& base, Execution exec) {
  // one period per axis, so each draw has at most one interior maximum
  auto axis = [step](double omega) {
    const double period = 2.0 * numerics::kPi / omega;
    return Grid1D{0.0, step, static_cast<std::size_t>(std::ceil(period / step))};
  };
  if (spec.n_dim == 1) {
    const Grid1D g = axis(spec.omegas[0]);
    return replicate(
        reps, base, [&](RandomStream& s, auto& out) { out.push_back(find_peaks(simulate_cosine_1d(spec, g, s), g)); },
        exec);
  }
  const Grid2D g{axis(spec.omegas[0]), axis(spec.omegas[1])};
  return replicate(
      reps, base, [&](RandomStream& s, auto& out) { out.push_back(find_peaks(simulate_cosine_2d(spec, g, s), g)); },
      exec);
}

}  // namespace

CampaignReport campaign_cosine(int n_dim, const std::vector<double>& omegas, const CampaignOptions& opt) {
  if (n_dim != 1 && n_dim != 2) throw std::invalid_argument("campaign_cosine: simulation supports N in {1, 2}");
  cosine::CosineSpec spec{n_dim, omegas.empty() ? std::vector<double>(n_dim, 1.0) : omegas};
  spec.validate();
  const double step = opt.step > 0.0 ? opt.step : (n_dim == 1 ? 0.01 : 0.02);
  const std::size_t reps = opt.replications ? opt.replications : 10000;

  CampaignReport rep;
  rep.name = "cosine-n" + std::to_string(n_dim);
  rep.dims = n_dim;
  rep.threshold = 0.03;
  rep.seed = opt.seed;
  rep.replications = reps;
  rep.grid = "one period per axis, step " + std::to_string(step);
  auto peaks = cosine_peaks(spec, reps, step, RandomStream(opt.seed, kCosineStream), opt.exec);
  const EmpiricalCDF emp(pooled_heights(peaks));
  rep.n_peaks = emp.count();
  finish(rep, ks_distance(emp, [n_dim](double u) { return cosine::peak_tail_cosine_quad(n_dim, u); }),
         std::move(peaks), opt);
  return rep;
}

CampaignReport campaign_cosine_frequency_invariance(const CampaignOptions& opt) {
  const double step = opt.step > 0.0 ? opt.step : 0.02;
  const std::size_t reps = opt.replications ? opt.replications : 20000;
  const cosine::CosineSpec skewed{2, {1.0, 2.5}};
  const cosine::CosineSpec unit = cosine::CosineSpec::unit(2);
  auto a = cosine_peaks(skewed, reps, step, RandomStream(opt.seed, kInvarianceStream), opt.exec);
  auto b = cosine_peaks(unit, reps, step, RandomStream(opt.seed, kInvarianceReferenceStream), opt.exec);

  CampaignReport rep;
  rep.name = "cosine-frequency-invariance";
  rep.dims = 2;
  rep.threshold = 0.03;
  rep.seed = opt.seed;
  rep.replications = reps;
  rep.grid = "one period per axis, step " + std::to_string(step);
  const EmpiricalCDF ea(pooled_heights(a)), eb(pooled_heights(b));
  rep.n_peaks = std::min(ea.count(), eb.count());
  rep.notes.push_back("omega (1, 2.5): " + std::to_string(ea.count()) + " peaks; omega (1, 1): " +
                      std::to_string(eb.count()) + " peaks");
  finish(rep, ks_two_sample(ea, eb), std::move(a), opt);
  return rep;
}

void require_enough_peaks(const CampaignReport& report, std::size_t minimum) {
  if (report.n_peaks < minimum) {
    throw InsufficientPeaksError(report.name + ": " + std::to_string(report.n_peaks) + " peaks, need at least " +
                                 std::to_string(minimum));
  }
  for (const BinReport& b : report.bins) {
    if (b.n_peaks < 400) {
      throw InsufficientPeaksError(report.name + ": bin [" + std::to_string(b.t_lo) + ", " + std::to_string(b.t_hi) +
                                   ") has " + std::to_string(b.n_peaks) + " peaks, need at least 400");
    }
  }
}

}  // namespace peakheight::validate
