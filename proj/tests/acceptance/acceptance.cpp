// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "peakheight/cli/commands.hpp"
#include "peakheight/cli/run_config.hpp"
#include "peakheight/cosine.hpp"
#include "peakheight/numerics/estimate.hpp"
#include "peakheight/numerics/normal.hpp"
#include "peakheight/numerics/quadrature.hpp"
#include "peakheight/numerics/random.hpp"
#include "peakheight/planar.hpp"
#include "peakheight/process1d.hpp"
#include "peakheight/rmt.hpp"
#include "peakheight/validate/campaigns.hpp"
#include "peakheight/validate/covariance.hpp"
#include "peakheight/validate/spectral.hpp"

namespace pn = peakheight::numerics;
namespace p1 = peakheight::process1d;
namespace pl = peakheight::planar;
namespace co = peakheight::cosine;
namespace rmt = peakheight::rmt;
namespace val = peakheight::validate;
namespace cli = peakheight::cli;
using peakheight::Execution;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[fail] ";
    }
    detail << what << "; ";
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string est(const pn::EstimateWithError& e) { return fmt(e.value) + "+-" + fmt(e.std_error); }

Outcome stationary_equivalence() {
  Outcome o;
  double worst = 0.0;
  for (double k : {0.3, 1.0, 1.6}) {
    const p1::StationaryKappa kappa(k);
    const p1::Rho1D rho(-k / std::sqrt(3.0));
    for (int i = -40; i <= 40; ++i) {
      const double u = 0.1 * i;
      worst = std::max(worst, std::abs(p1::peak_tail_stationary_1d(kappa, u) - p1::peak_tail_1d(rho, u)));
    }
  }
  o.check(worst < 1e-12, "max gap " + fmt(worst));
  return o;
}

Outcome normalization() {
  Outcome o;
  const pn::QuadConfig cfg;
  for (double r : {-0.1, -0.5, -0.9}) {
    const p1::Rho1D rho(r);
    const double m = pn::integrate([&](double x) { return p1::peak_density_1d(rho, x); }, -12.0, 12.0, cfg).value;
    o.check(std::abs(m - 1.0) < 1e-8, "process1d rho=" + fmt(r) + " err " + fmt(m - 1.0));
  }
  pn::RandomStream s(2024, 1);
  double worst = 0.0;
  int made = 0;
  while (made < 10) {
    pl::PlanarSpec spec;
    spec.sigma1_sq = 1.2 + 4.0 * s.next_uniform();
    spec.sigma2_sq = 1.2 + 4.0 * s.next_uniform();
    const double rt = -0.8 + 1.6 * s.next_uniform();
    spec.sigma3_sq = 1.0 + rt * std::sqrt((spec.sigma1_sq - 1.0) * (spec.sigma2_sq - 1.0));
    if (spec.sigma3_sq <= 0.05 || spec.sigma3_sq >= 0.95 * std::sqrt(spec.sigma1_sq * spec.sigma2_sq)) continue;
    ++made;
    const pl::PlanarPeakHeight p(spec);
    const double m = pn::integrate([&](double x) { return p.density(x); }, -10.0, 10.0, cfg).value;
    worst = std::max(worst, std::abs(m - 1.0));
  }
  o.check(worst < 1e-6, "planar 10 random specs max err " + fmt(worst));
  return o;
}

Outcome derivative_consistency() {
  Outcome o;
  const double h = 1e-4;
  const p1::Rho1D rho(-0.5);
  const pl::PlanarPeakHeight planar(pl::PlanarSpec{1.0, 1.0, 4.0, 2.25, 1.5});
  double worst1 = 0.0, worst2 = 0.0;
  for (double u : {-2.0, 0.0, 2.0}) {
    const double d1 = (p1::peak_tail_1d(rho, u - h) - p1::peak_tail_1d(rho, u + h)) / (2 * h);
    worst1 = std::max(worst1, std::abs(d1 / p1::peak_density_1d(rho, u) - 1.0));
    const double d2 = (planar.tail(u - h) - planar.tail(u + h)) / (2 * h);
    worst2 = std::max(worst2, std::abs(d2 / planar.density(u) - 1.0));
  }
  o.check(worst1 < 1e-6, "process1d rel err " + fmt(worst1));
  o.check(worst2 < 1e-6, "planar rel err " + fmt(worst2));
  return o;
}

Outcome cosine_closed_forms() {
  Outcome o;
  double worst = 0.0;
  for (double u = 0.0; u <= 4.0; u += 0.25) {
    worst = std::max(worst, std::abs(co::peak_tail_cosine_quad(1, u) - std::exp(-0.5 * u * u)));
  }
  o.check(worst < 1e-8, "N=1 quadrature max err " + fmt(worst));
  const pn::RandomStream s(31, 0);
  for (double u : {0.5, 1.5}) {
    const auto e = co::peak_tail_cosine_mc(1, u, 1000000, s);
    o.check(e.within(std::exp(-0.5 * u * u), 3.0), "N=1 MC u=" + fmt(u) + " " + est(e));
  }
  for (int n : {1, 2, 3}) {
    const double f = co::peak_tail_cosine_quad(n, 0.0);
    o.check(std::abs(f - 1.0) < 1e-8, "F(0) N=" + std::to_string(n) + " err " + fmt(f - 1.0));
  }
  for (int n : {6, 10}) {
    const auto e = co::peak_tail_cosine_mc(n, 0.0, 1000000, pn::RandomStream(32, static_cast<std::uint64_t>(n)));
    o.check(e.within(1.0, 3.0), "F(0) N=" + std::to_string(n) + " MC " + est(e));
  }
  return o;
}

Outcome goi_machinery() {
  Outcome o;
  for (int n : {2, 4}) {
    for (double c : {0.0, 0.5}) {
      pn::RandomStream s(41, static_cast<std::uint64_t>(10 * n) + (c > 0 ? 1 : 0));
      const std::size_t m = static_cast<std::size_t>(n) * n;
      std::vector<pn::MeanAccumulator> acc(m * m);
      for (int d = 0; d < 100000; ++d) {
        const auto x = c == 0.0 ? rmt::sample_goe(n, s) : rmt::sample_goi(n, c, s);
        for (std::size_t a = 0; a < m; ++a)
          for (std::size_t b = 0; b < m; ++b) acc[a * m + b].add(x.entries(a / n, a % n) * x.entries(b / n, b % n));
      }
      int bad = 0;
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
          const double want = rmt::goi_entry_covariance(static_cast<int>(a / n), static_cast<int>(a % n),
                                                        static_cast<int>(b / n), static_cast<int>(b % n), c);
          if (!acc[a * m + b].estimate().within(want, 4.0, 1e-12)) ++bad;
        }
      o.check(bad == 0, "entry cov N=" + std::to_string(n) + " c=" + fmt(c) + " misses " + std::to_string(bad));
    }
  }
  for (double c : {-0.2, 0.0, 0.5}) {
    const auto e = rmt::expect_goi([](std::span<const double>) { return 1.0; }, rmt::GoiCovParam(c, 3), 100000,
                                   pn::RandomStream(42, 0));
    o.check(e.within(1.0, 3.0, 1e-12), "E[1] c=" + fmt(c) + " " + est(e));
  }
  const auto hn = rmt::expect_goi([](std::span<const double> l) { return l[0] < 0.0 ? -l[0] : 0.0; },
                                  rmt::GoiCovParam(0.5, 1), 200000, pn::RandomStream(43, 0));
  o.check(hn.within(std::sqrt(1.5) / pn::kSqrt2Pi, 3.0), "half-normal " + est(hn));
  return o;
}

Outcome cross_family() {
  Outcome o;
  const rmt::AnisoPeakHeight one(rmt::AnisoSpec::with_kappa(1, 1.0), pn::RandomStream(51, 0), 200000);
  const p1::StationaryKappa k1(1.0);
  for (double u : {0.0, 1.0, 2.0}) {
    const auto e = one.tail(u);
    o.check(e.within(p1::peak_tail_stationary_1d(k1, u), 3.0), "N=1 u=" + fmt(u) + " " + est(e));
  }
  const rmt::AnisoPeakHeight two(rmt::AnisoSpec::with_kappa(2, 1.0), pn::RandomStream(52, 0), 200000);
  const pl::PlanarPeakHeight planar(pl::PlanarSpec{1.0, 1.0, 3.0, 3.0, 1.0});
  for (double u : {0.0, 1.0}) {
    const auto e = two.tail(u);
    o.check(e.within(planar.tail(u), 3.0, 1e-5), "N=2 u=" + fmt(u) + " " + est(e) + " vs " + fmt(planar.tail(u)));
  }
  return o;
}

void report_campaign(Outcome& o, const val::CampaignReport& r, std::size_t min_peaks) {
  o.check(r.passed && r.n_peaks >= min_peaks,
          r.name + " ks " + fmt(r.ks) + " < " + fmt(r.threshold) + " peaks " + std::to_string(r.n_peaks));
}

Outcome simulation_stationary() {
  Outcome o;
  const val::CampaignOptions opt;
  report_campaign(o, val::campaign_stationary_1d(opt), 2000);
  const auto neg = val::campaign_stationary_1d(opt, 0.5);
  o.check(neg.ks > neg.threshold, "negative control ks " + fmt(neg.ks) + " > " + fmt(neg.threshold));
  return o;
}

Outcome simulation_nonstationary() {
  Outcome o;
  const auto cov = val::time_warp_1d(0.3);
  double worst = 0.0;
  for (double t : {0.0, 1.0, 2.0, 3.0}) {
    worst = std::max(worst, std::abs(p1::conditional_rho(val::spectral_moments_1d(cov, t)).value() + 1.0 / std::sqrt(3.0)));
  }
  o.check(worst < 1e-4, "warp rho gap " + fmt(worst));
  const val::CampaignOptions opt;
  report_campaign(o, val::campaign_time_warp(opt), 2000);
  const auto mix = val::campaign_amplitude_mixture(opt);
  std::size_t fewest = mix.bins.empty() ? 0 : mix.bins.front().n_peaks;
  double worst_ks = 0.0;
  for (const auto& b : mix.bins) {
    fewest = std::min(fewest, b.n_peaks);
    worst_ks = std::max(worst_ks, b.ks);
  }
  o.check(mix.passed && !mix.bins.empty() && fewest >= 400,
          "mixture " + std::to_string(mix.bins.size()) + " bins, worst ks " + fmt(worst_ks) + ", fewest peaks " +
              std::to_string(fewest));
  return o;
}

Outcome simulation_planar() {
  Outcome o;
  report_campaign(o, val::campaign_planar(val::CampaignOptions{}), 1500);
  return o;
}

Outcome simulation_cosine() {
  Outcome o;
  const val::CampaignOptions opt;
  report_campaign(o, val::campaign_cosine(1, {1.0}, opt), 3000);
  report_campaign(o, val::campaign_cosine(2, {1.0, 1.0}, opt), 3000);
  report_campaign(o, val::campaign_cosine_frequency_invariance(opt), 3000);
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "peakheight_acceptance";
  std::filesystem::create_directories(dir);
  cli::RunConfig cfg;
  cfg.family = cli::Family::kAniso;
  cfg.n_dim = 3;
  cfg.kappa = 0.9;
  cfg.grid = cli::GridSpec::parse("-1:3:0.5");
  cfg.samples = 50000;
  cfg.seed = 99;
  std::ostringstream sink;
  std::vector<std::string> files;
  for (int rep = 0; rep < 2; ++rep) {
    cfg.out_path = (dir / ("eval" + std::to_string(rep) + ".csv")).string();
    const int code = cli::cmd_eval(cfg, sink, sink);
    o.check(code == 0, "eval exit " + std::to_string(code));
    files.push_back(slurp(*cfg.out_path));
  }
  o.check(!files[0].empty() && files[0] == files[1], "eval files identical (" + std::to_string(files[0].size()) + " bytes)");

  const int saved = omp_get_max_threads();
  std::vector<double> values;
  for (int threads : {1, 4}) {
    omp_set_num_threads(threads);
    const rmt::AnisoPeakHeight a(rmt::AnisoSpec::with_kappa(2, 0.8), pn::RandomStream(61, 0), 50000);
    values.push_back(a.tail(0.5).value);
    values.push_back(co::peak_tail_cosine_mc(5, 0.5, 100000, pn::RandomStream(62, 0)).value);
  }
  omp_set_num_threads(saved);
  const rmt::AnisoPeakHeight serial(rmt::AnisoSpec::with_kappa(2, 0.8), pn::RandomStream(61, 0), 50000,
                                    Execution::kSerial);
  o.check(values[0] == values[2] && values[0] == serial.tail(0.5).value, "aniso invariant to worker count");
  o.check(values[1] == values[3] &&
              values[1] == co::peak_tail_cosine_mc(5, 0.5, 100000, pn::RandomStream(62, 0), Execution::kSerial).value,
          "cosine MC invariant to worker count");
  return o;
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"stationary/nonstationary 1D equivalence", 1.0, stationary_equivalence},
      {"density normalization", 30.0, normalization},
      {"derivative consistency", 30.0, derivative_consistency},
      {"cosine closed forms", 60.0, cosine_closed_forms},
      {"GOI machinery", 120.0, goi_machinery},
      {"cross-family oracles", 300.0, cross_family},
      {"simulation oracle, 1D stationary", 300.0, simulation_stationary},
      {"simulation oracle, 1D nonstationary", 600.0, simulation_nonstationary},
      {"simulation oracle, planar", 600.0, simulation_planar},
      {"simulation oracle, cosine", 300.0, simulation_cosine},
      {"determinism", 60.0, determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.check(secs < c.budget_s, "runtime " + fmt(secs) + " s (budget " + fmt(c.budget_s) + " s)");
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << c.name << " -- " << o.detail.str()
              << std::endl;
  }
  std::cout << criteria.size() - static_cast<std::size_t>(failures) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failures == 0 ? 0 : 1;
}
