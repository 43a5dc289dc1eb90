#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "peakheight/numerics/normal.hpp"
#include "peakheight/numerics/quadrature.hpp"
#include "peakheight/planar.hpp"
#include "peakheight/rmt.hpp"

using namespace peakheight::planar;
namespace pn = peakheight::numerics;

namespace {

const PlanarSpec kIsotropic{1.0, 1.0, 3.0, 3.0, 1.0};
const PlanarSpec kSkewed{1.0, 1.0, 4.0, 2.25, 1.5};

}  // namespace

TEST(Planar, KernelExample) {
  EXPECT_NEAR(g_kernel(-1.0, -1.0, 0.0, 1.0, 1.0, 1.0), 0.2419707245191433498, 1e-15);
}

TEST(Planar, KernelVanishesOffSupport) {
  EXPECT_EQ(g_kernel(0.5, -1.0, 0.0, 1.0, 1.0, 1.0), 0.0);
  EXPECT_EQ(g_kernel(-1.0, 0.0, 0.0, 1.0, 1.0, 1.0), 0.0);
  EXPECT_LT(g_kernel(-1e-4, -1e-4, 0.0, 1.0, 1.0, 1.0), 1e-10);
}

TEST(Planar, Correlations) {
  const auto iso = planar_correlations(kIsotropic);
  EXPECT_NEAR(iso.rho.value(), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(iso.rho_tilde.value(), 0.0, 1e-15);
  const auto sk = planar_correlations(kSkewed);
  EXPECT_NEAR(sk.rho.value(), 0.5, 1e-15);
  EXPECT_NEAR(sk.rho_tilde.value(), 0.5 / std::sqrt(3.75), 1e-15);
  EXPECT_NEAR(sk.rho_tilde.value(), 0.2581989, 1e-7);
}

TEST(Planar, DegenerateSpecRejected) {
  EXPECT_THROW(planar_correlations(PlanarSpec{1.0, 1.0, 2.0, 2.0, 2.0}), std::invalid_argument);
  EXPECT_THROW(PlanarPeakHeight(PlanarSpec{1.0, 1.0, 2.0, 2.0, 2.0}), std::invalid_argument);
  EXPECT_THROW((PlanarSpec{1.0, 1.0, 0.9, 3.0, 0.5}.validate()), std::invalid_argument);
  EXPECT_THROW((PlanarSpec{0.0, 1.0, 3.0, 3.0, 1.0}.validate()), std::invalid_argument);
}

TEST(Planar, RescaleToUnitGradient) {
  const auto s = rescale_to_unit_gradient({4.0, 1.0, 48.0, 3.0, 6.0});
  EXPECT_DOUBLE_EQ(s.gamma1_sq, 1.0);
  EXPECT_DOUBLE_EQ(s.gamma2_sq, 1.0);
  EXPECT_DOUBLE_EQ(s.sigma1_sq, 3.0);
  EXPECT_DOUBLE_EQ(s.sigma2_sq, 3.0);
  EXPECT_DOUBLE_EQ(s.sigma3_sq, 1.5);
}

TEST(Planar, DensityMatchesCubatureOracle) {
  // scipy cubature of the raw conditional Hessian expectation
  EXPECT_NEAR(peak_density_planar(kSkewed, 0.0), 0.1647154595468214, 1e-7);
  EXPECT_NEAR(peak_density_planar(kSkewed, 1.0), 0.456586397175961, 1e-7);
  EXPECT_NEAR(peak_density_planar(kIsotropic, 0.0), 0.1431083624315704, 1e-7);
  EXPECT_NEAR(peak_density_planar(kIsotropic, 1.0), 0.45234187051257624, 1e-7);
}

TEST(Planar, SymmetricUnderAxisSwap) {
  const PlanarSpec swapped{1.0, 1.0, 2.25, 4.0, 1.5};
  for (double x : {-1.0, 0.3, 2.0}) {
    EXPECT_NEAR(peak_density_planar(kSkewed, x), peak_density_planar(swapped, x), 1e-9);
  }
}

TEST(Planar, DensityIntegratesToOne) {
  const PlanarPeakHeight p(kSkewed);
  const auto r = pn::integrate([&](double x) { return p.density(x); }, -10.0, 10.0, pn::QuadConfig{});
  EXPECT_NEAR(r.value, 1.0, 1e-7);
}

TEST(Planar, TailLimits) {
  const PlanarPeakHeight p(kIsotropic);
  EXPECT_NEAR(p.tail(-8.0), 1.0, 1e-9);
  EXPECT_LT(p.tail(8.0), 1e-9);
  EXPECT_GE(p.tail(8.0), 0.0);
}

TEST(Planar, DerivativeOfTailIsMinusDensity) {
  const PlanarPeakHeight p(kSkewed);
  const double h = 1e-3;
  for (double x : {-0.5, 0.5, 1.5, 2.5}) {
    const double d = (p.tail(x - h) - p.tail(x + h)) / (2 * h);
    EXPECT_NEAR(d, p.density(x), 1e-6) << x;
  }
}

TEST(Planar, TailTableMatchesPointwise) {
  const PlanarPeakHeight p(kSkewed);
  const std::vector<double> u{-2.0, -0.35, 0.0, 0.8, 2.15, 3.0};
  const auto t = p.tail_table(u);
  ASSERT_EQ(t.size(), u.size());
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(t[i], p.tail(u[i]), 1e-9);
}

TEST(Planar, GradientScaleDoesNotMatter) {
  PlanarSpec s = kSkewed;
  s.gamma1_sq = 4.0;
  s.gamma2_sq = 0.25;
  EXPECT_NEAR(peak_tail_planar(s, 0.7), peak_tail_planar(kSkewed, 0.7), 1e-12);
}

TEST(Planar, IsotropicAgreesWithAnisotropicForm) {
  // (3, 3, 1) is the isotropic field with kappa = 1
  const peakheight::rmt::AnisoPeakHeight a(peakheight::rmt::AnisoSpec::with_kappa(2, 1.0),
                                           pn::RandomStream(21, 0), 100000);
  const PlanarPeakHeight p(kIsotropic);
  for (double u : {0.0, 1.0, 2.0}) {
    const auto e = a.tail(u);
    EXPECT_NEAR(e.value, p.tail(u), 4.0 * e.std_error + 1e-3) << u;
  }
}
