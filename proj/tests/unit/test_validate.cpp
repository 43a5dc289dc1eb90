#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "peakheight/numerics/estimate.hpp"
#include "peakheight/numerics/normal.hpp"
#include "peakheight/process1d.hpp"
#include "peakheight/validate/covariance.hpp"
#include "peakheight/validate/ks.hpp"
#include "peakheight/validate/peaks.hpp"
#include "peakheight/validate/simulate.hpp"
#include "peakheight/validate/spectral.hpp"

using namespace peakheight::validate;
namespace pn = peakheight::numerics;
namespace p1 = peakheight::process1d;

TEST(Grid, Validation) {
  EXPECT_THROW((Grid1D{0.0, 0.0, 100}.validate()), std::invalid_argument);
  EXPECT_THROW((Grid1D{0.0, 0.1, 15}.validate()), std::invalid_argument);
  const Grid1D g = Grid1D::covering(0.0, 10.0, 0.01);
  EXPECT_EQ(g.n_points, 1001u);
  EXPECT_NEAR(g.at(1000), 10.0, 1e-12);
}

TEST(Spectral, SquaredExponential) {
  const auto s = spectral_moments_1d(squared_exponential_1d(), 0.3);
  EXPECT_NEAR(s.lambda1, 1.0, 1e-5);
  EXPECT_NEAR(s.lambda2, 3.0, 1e-5);
  EXPECT_NEAR(s.r, 0.0, 1e-5);
}

TEST(Spectral, TimeWarpMatchesClosedForm) {
  const auto cov = time_warp_1d(0.3);
  for (double t : {0.0, 1.0, 2.0}) {
    const auto s = spectral_moments_1d(cov, t);
    const auto c = cov.closed_form(t);
    EXPECT_NEAR(s.lambda1, c.lambda1, 1e-6);
    EXPECT_NEAR(s.lambda2, c.lambda2, 1e-5);
    EXPECT_NEAR(s.r, c.r, 1e-5);
    EXPECT_NEAR(p1::conditional_rho(s).value(), -1.0 / std::sqrt(3.0), 1e-4);
  }
}

TEST(Spectral, RoughCovarianceRejected) {
  // exponential covariance is not differentiable at the diagonal
  CovarianceHandle1D h{"exponential", [](double t, double s) { return std::exp(-std::abs(t - s)); }, {}};
  EXPECT_THROW(spectral_moments_1d(h, 0.0), std::invalid_argument);
}

TEST(Covariance, MixtureHasUnitDiagonal) {
  const auto cov = amplitude_mixture_1d(10.0);
  for (double t = 0.0; t <= 10.0; t += 0.37) EXPECT_NEAR(cov.cov(t, t), 1.0, 1e-10);
  EXPECT_NO_THROW(cov.validate(Grid1D::covering(0.0, 10.0, 0.05)));
}

TEST(Simulate1D, MarginalVarianceAndLagCorrelation) {
  const Grid1D g{0.0, 0.01, 200};
  const auto cov = squared_exponential_1d();
  const PathSimulator1D sim(cov, g);
  pn::RandomStream s(3, 0);
  pn::MeanAccumulator v0, v1, v2, lag;
  for (int r = 0; r < 10000; ++r) {
    const auto x = sim.draw(s);
    v0.add(x[10] * x[10]);
    v1.add(x[100] * x[100]);
    v2.add(x[190] * x[190]);
    lag.add(x[100] * x[101]);
  }
  for (const auto* m : {&v0, &v1, &v2}) EXPECT_NEAR(m->mean(), 1.0, 0.03);
  EXPECT_NEAR(lag.mean(), cov.cov(g.at(100), g.at(101)), 0.03);
}

TEST(Simulate1D, DegenerateCovarianceRejected) {
  CovarianceHandle1D one{"constant", [](double, double) { return 1.0; }, {}};
  pn::RandomStream s(1, 0);
  EXPECT_THROW(simulate_1d(one, Grid1D{0.0, 0.1, 32}, s), IndefiniteCovarianceError);
}

TEST(Simulate1D, IndefiniteCovarianceRejected) {
  CovarianceHandle1D bad{"indefinite", [](double t, double s) { return t == s ? 1.0 : -0.9; }, {}};
  pn::RandomStream s(1, 0);
  EXPECT_THROW(simulate_1d(bad, Grid1D{0.0, 0.1, 32}, s), IndefiniteCovarianceError);
}

TEST(Simulate2D, CirculantVarianceAndCurvature) {
  const Grid1D axis{0.0, 0.1, 64};
  const Grid2D grid{axis, axis};
  const StationarySimulator2D sim(separable_gaussian_2d(1.0, 2.0), grid);
  EXPECT_EQ(sim.method(), Simulation2DMethod::kCirculant);
  pn::RandomStream s(4, 0);
  pn::MeanAccumulator var, x11;
  const double h = axis.step;
  for (int r = 0; r < 3000; ++r) {
    auto [a, b] = sim.draw_pair(s);
    for (const Field2D* f : {&a, &b}) {
      var.add((*f)(32, 32) * (*f)(32, 32));
      const double d2 = ((*f)(31, 20) - 2 * (*f)(32, 20) + (*f)(33, 20)) / (h * h);
      x11.add(d2 * d2);
    }
  }
  EXPECT_NEAR(var.mean(), 1.0, 0.03);
  // Var X11 = 3 for exp(-t1^2/2); second differences overestimate slightly
  EXPECT_NEAR(x11.mean(), 3.0, 0.15);
}

TEST(Simulate2D, DenseFallbackForLongRangeCovariance) {
  const Grid1D axis{0.0, 1.0, 16};
  const StationarySimulator2D sim(separable_gaussian_2d(8.0, 8.0), Grid2D{axis, axis});
  EXPECT_EQ(sim.method(), Simulation2DMethod::kDense);
  pn::RandomStream s(5, 0);
  pn::MeanAccumulator var;
  for (int r = 0; r < 2000; ++r) {
    const Field2D f = sim.draw(s);
    var.add(f(5, 7) * f(5, 7));
  }
  EXPECT_NEAR(var.mean(), 1.0, 0.08);
}

TEST(Simulate2D, OversizedIndefiniteGridRejected) {
  const Grid1D axis{0.0, 1.0, 80};
  EXPECT_THROW(StationarySimulator2D(separable_gaussian_2d(40.0, 40.0), Grid2D{axis, axis}),
               IndefiniteCovarianceError);
}

TEST(SimulateCosine, UnitVariance) {
  const Grid1D g{0.0, 0.5, 16};
  pn::RandomStream s(6, 0);
  pn::MeanAccumulator v1, v2;
  const Grid2D g2{g, g};
  for (int r = 0; r < 100000; ++r) {
    const auto x = simulate_cosine_1d(peakheight::cosine::CosineSpec::unit(1), g, s);
    v1.add(x[3] * x[3]);
  }
  for (int r = 0; r < 20000; ++r) {
    const auto f = simulate_cosine_2d(peakheight::cosine::CosineSpec{2, {1.0, 2.5}}, g2, s);
    v2.add(f(4, 9) * f(4, 9));
  }
  EXPECT_NEAR(v1.mean(), 1.0, 0.02);
  EXPECT_NEAR(v2.mean(), 1.0, 0.04);
}

TEST(SimulateCosine, SingleHarmonicPeak) {
  const Grid1D g{0.0, 0.01, 629};  // one period
  pn::RandomStream s(7, 0);
  int with_peak = 0;
  for (int r = 0; r < 50; ++r) {
    pn::RandomStream copy = s;
    const double a = copy.next_normal(), b = copy.next_normal();
    const auto x = simulate_cosine_1d(peakheight::cosine::CosineSpec::unit(1), g, s);
    const auto p = find_peaks(x, g);
    ASSERT_LE(p.size(), 1u);
    if (p.empty()) continue;
    ++with_peak;
    EXPECT_GT(p[0].height, 0.0);
    EXPECT_NEAR(p[0].height, std::hypot(a, b), 1e-3);
  }
  EXPECT_GE(with_peak, 45);
}

TEST(Peaks, RampAndBump) {
  const Grid1D g{0.0, 0.1, 40};
  std::vector<double> ramp(40), bump(40), flat(40, 1.0);
  for (std::size_t i = 0; i < 40; ++i) {
    ramp[i] = 0.5 * static_cast<double>(i);
    bump[i] = -std::pow(g.at(i) - 1.7, 2);
  }
  EXPECT_TRUE(find_peaks(ramp, g).empty());
  EXPECT_TRUE(find_peaks(flat, g).empty());
  const auto p = find_peaks(bump, g);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_NEAR(p[0].location[0], 1.7, 1e-12);
}

TEST(Peaks, TwoDimensionalStrictDominance) {
  const Grid1D axis{0.0, 0.1, 20};
  const Grid2D g{axis, axis};
  Field2D f(20, 20);
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < 20; ++j) f(i, j) = -std::pow(axis.at(i) - 0.8, 2) - std::pow(axis.at(j) - 1.2, 2);
  f(3, 15) = 5.0;  // isolated spike
  f(0, 0) = 9.0;   // boundary, excluded
  const auto p = find_peaks(f, g);
  ASSERT_EQ(p.size(), 2u);
  for (const auto& pk : p) {
    const auto i = static_cast<std::size_t>(std::lround(pk.location[0] / 0.1));
    const auto j = static_cast<std::size_t>(std::lround(pk.location[1] / 0.1));
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj)
        if (di || dj) {
          EXPECT_GT(pk.height, f(i + di, j + dj));
        }
  }
}

TEST(Peaks, CsvExport) {
  std::ostringstream os;
  write_peaks_csv(os, {{{{0.5, 0.0}, 1.25}}, {{{0.75, 0.0}, -0.5}}}, 1);
  EXPECT_EQ(os.str(), "replication,location,height\n0,0.5,1.25\n1,0.75,-0.5\n");
}

TEST(Ks, SelfDistanceIsZero) {
  std::vector<double> v{0.3, 0.1, 0.7, 0.2};
  const EmpiricalCDF e(v);
  EXPECT_EQ(ks_two_sample(e, e).statistic, 0.0);
  EXPECT_DOUBLE_EQ(e.cdf(0.2), 0.5);
  EXPECT_DOUBLE_EQ(e.exceedance(0.2), 0.5);
}

TEST(Ks, UniformSample) {
  pn::RandomStream s(8, 0);
  std::vector<double> v;
  for (int i = 0; i < 10000; ++i) v.push_back(s.next_uniform());
  const auto ks = ks_distance(EmpiricalCDF(v), [](double u) { return 1.0 - std::clamp(u, 0.0, 1.0); });
  EXPECT_TRUE(ks.sufficient());
  EXPECT_LT(ks.statistic, 0.025);
}

TEST(Ks, DetectsWrongDistribution) {
  pn::RandomStream s(9, 0);
  std::vector<double> v;
  for (int i = 0; i < 2000; ++i) v.push_back(s.next_normal());
  const auto ks = ks_distance(EmpiricalCDF(v), [](double u) { return pn::std_normal_tail(u - 0.3); });
  EXPECT_GT(ks.statistic, 0.08);
}

TEST(Ks, SmallSampleHasNoVerdict) {
  std::vector<double> v(50, 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  EXPECT_FALSE(ks_distance(EmpiricalCDF(v), [](double) { return 0.5; }).sufficient());
}

TEST(Ks, TwoSampleShift) {
  std::vector<double> a, b;
  for (int i = 0; i < 100; ++i) {
    a.push_back(i);
    b.push_back(i + 50);
  }
  EXPECT_NEAR(ks_two_sample(EmpiricalCDF(a), EmpiricalCDF(b)).statistic, 0.5, 1e-12);
}

TEST(Validation, TimeWarpPreservesPeakHeights) {
  // peaks of Z(f(t)) and of Z(t) share one law; compare two independent samples
  const Grid1D gw = Grid1D::covering(0.0, 4.0 * pn::kPi, 0.02);
  const Grid1D gs = Grid1D::covering(0.0, 12.0, 0.02);
  const PathSimulator1D warp(time_warp_1d(0.3), gw), plain(squared_exponential_1d(), gs);
  pn::RandomStream s1(10, 0), s2(10, 1);
  std::vector<double> hw, hs;
  while (hw.size() < 2500) {
    for (const auto& p : find_peaks(warp.draw(s1), gw)) hw.push_back(p.height);
  }
  while (hs.size() < 2500) {
    for (const auto& p : find_peaks(plain.draw(s2), gs)) hs.push_back(p.height);
  }
  EXPECT_LT(ks_two_sample(EmpiricalCDF(hw), EmpiricalCDF(hs)).statistic, 0.05);
}

TEST(Validation, GridRefinementDoesNotIncreaseKs) {
  // at coarse steps the discretization bias dominates the KS statistic
  const auto cov = squared_exponential_1d();
  const auto ks_at = [&](double step) {
    const Grid1D g = Grid1D::covering(0.0, 20.0, step);
    const PathSimulator1D sim(cov, g);
    pn::RandomStream s(11, 0);
    std::vector<double> h;
    for (int r = 0; r < 800; ++r) {
      for (const auto& p : find_peaks(sim.draw(s), g)) h.push_back(p.height);
    }
    const p1::StationaryKappa k(1.0);
    return ks_distance(EmpiricalCDF(h), [&](double u) { return p1::peak_tail_stationary_1d(k, u); }).statistic;
  };
  EXPECT_LT(ks_at(0.05), ks_at(1.0));
}
