#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "peakheight/numerics/normal.hpp"
#include "peakheight/numerics/quadrature.hpp"
#include "peakheight/process1d.hpp"

using namespace peakheight::process1d;
namespace pn = peakheight::numerics;

TEST(Process1d, ConditionalRhoFromTriple) {
  EXPECT_NEAR(conditional_rho({0.5, 2.0, 0.5}).value(), -0.40824829046386301637, 1e-15);
  EXPECT_NEAR(conditional_rho({1.0, 3.0, 0.0}).value(), -1.0 / std::sqrt(3.0), 1e-15);
}

TEST(Process1d, TripleValidationNamesInequality) {
  try {
    SpectralTriple1D{1.0, 0.5, 0.0}.validate();
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("lambda2"), std::string::npos);
  }
  EXPECT_THROW((SpectralTriple1D{-1.0, 3.0, 0.0}.validate()), std::invalid_argument);
}

TEST(Process1d, RhoRange) {
  EXPECT_THROW(Rho1D(0.0), std::invalid_argument);
  EXPECT_THROW(Rho1D(-1.0), std::invalid_argument);
  EXPECT_THROW(Rho1D(0.3), std::invalid_argument);
  EXPECT_NO_THROW(Rho1D(-0.999));
}

TEST(Process1d, TailAtZero) {
  // Psi(0) - sqrt(2 pi) rho phi(0) Phi(0) = 1/2 - rho/2
  EXPECT_DOUBLE_EQ(peak_tail_1d(Rho1D(-0.5), 0.0), 0.75);
  EXPECT_NEAR(peak_tail_1d(Rho1D(-0.9), 0.0), 0.95, 1e-15);
}

TEST(Process1d, LimitsOfTail) {
  const Rho1D rho(-0.6);
  EXPECT_NEAR(peak_tail_1d(rho, -40.0), 1.0, 1e-15);
  EXPECT_NEAR(peak_tail_1d(rho, 40.0), 0.0, 1e-15);
}

TEST(Process1d, RhoZeroLimitIsNormalTail) {
  for (double u : {-1.0, 0.0, 0.7, 2.5}) {
    EXPECT_NEAR(peak_tail_1d(Rho1D(-1e-10), u), peak_tail_1d_rho_zero_limit(u), 1e-9);
    EXPECT_DOUBLE_EQ(peak_tail_1d_rho_zero_limit(u), pn::std_normal_tail(u));
  }
}

TEST(Process1d, DensityIsNegativeDerivative) {
  for (double rho : {-0.1, -0.5, -0.9}) {
    for (double u : {-2.0, 0.0, 2.0}) {
      const double h = 1e-4;
      const double fd = (peak_tail_1d(Rho1D(rho), u - h) - peak_tail_1d(Rho1D(rho), u + h)) / (2 * h);
      EXPECT_NEAR(fd, peak_density_1d(Rho1D(rho), u), 1e-6 * std::abs(fd) + 1e-12);
    }
  }
}

TEST(Process1d, DensityIntegratesToOne) {
  for (double rho : {-0.1, -0.5, -0.9}) {
    const Rho1D r(rho);
    const auto res = pn::integrate_1d([&](double x) { return peak_density_1d(r, x); },
                                      -std::numeric_limits<double>::infinity(),
                                      std::numeric_limits<double>::infinity());
    EXPECT_NEAR(res.value, 1.0, 1e-8) << rho;
  }
}

TEST(Process1d, DensityNonNegative) {
  for (double x = -8.0; x <= 8.0; x += 0.05) EXPECT_GE(peak_density_1d(Rho1D(-0.95), x), 0.0);
}

TEST(Stationary, KappaValidation) {
  EXPECT_THROW(stationary_kappa(0.5, 0.25), std::invalid_argument);
  EXPECT_THROW(stationary_kappa(-0.5, 0.0), std::invalid_argument);
  EXPECT_THROW(StationaryKappa(2.0), std::invalid_argument);
  EXPECT_NEAR(stationary_kappa(-0.5, 0.25).value(), 1.0, 1e-15);
  EXPECT_TRUE(StationaryKappa(std::sqrt(3.0)).degenerate());
  EXPECT_FALSE(StationaryKappa(1.7).degenerate());
}

TEST(Stationary, KnownValueAtZero) {
  EXPECT_NEAR(peak_tail_stationary_1d(StationaryKappa(1.0), 0.0), 0.78867513459481288225, 1e-15);
}

TEST(Stationary, DegenerateKappaRejected) {
  EXPECT_THROW(peak_tail_stationary_1d(StationaryKappa(std::sqrt(3.0)), 0.5), std::invalid_argument);
}

TEST(Stationary, MatchesNonstationaryForm) {
  double worst = 0.0;
  for (double k : {0.3, 1.0, 1.6}) {
    const Rho1D rho(-k / std::sqrt(3.0));
    for (int i = -40; i <= 40; ++i) {
      const double u = 0.1 * i;
      worst = std::max(worst, std::abs(peak_tail_stationary_1d(StationaryKappa(k), u) - peak_tail_1d(rho, u)));
      worst = std::max(worst,
                       std::abs(peak_density_stationary_1d(StationaryKappa(k), u) - peak_density_1d(rho, u)));
    }
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(Stationary, NearBoundApproachesRayleighTail) {
  // as kappa -> sqrt3 the law tends to exp(-u^2/2) on u > 0
  const StationaryKappa k(std::sqrt(3.0) * (1 - 1e-9));
  EXPECT_NEAR(peak_tail_stationary_1d(k, 1.0), std::exp(-0.5), 1e-3);
}
