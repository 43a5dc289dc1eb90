#include "peakheight/cli/selftest.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "peakheight/cosine.hpp"
#include "peakheight/numerics/normal.hpp"
#include "peakheight/numerics/quadrature.hpp"
#include "peakheight/numerics/random.hpp"
#include "peakheight/planar.hpp"
#include "peakheight/process1d.hpp"
#include "peakheight/rmt.hpp"
#include "peakheight/validate/ks.hpp"
#include "peakheight/validate/peaks.hpp"
#include "peakheight/validate/spectral.hpp"

namespace peakheight::cli {

namespace {

using numerics::EstimateWithError;

std::string near(double got, double want, double tol) {
  if (std::abs(got - want) <= tol) return {};
  std::ostringstream os;
  os << std::setprecision(12) << "got " << got << ", want " << want << " (tol " << tol << ")";
  return os.str();
}

std::string within(const EstimateWithError& e, double want, double k, double slack = 0.0) {
  if (e.within(want, k, slack)) return {};
  std::ostringstream os;
  os << std::setprecision(8) << "got " << e.value << " +- " << e.std_error << ", want " << want;
  return os.str();
}

std::string first_failure(std::initializer_list<std::string> results) {
  for (const std::string& r : results) {
    if (!r.empty()) return r;
  }
  return {};
}

}  // namespace

std::vector<SelftestCheck> selftest_checks() {
  using namespace process1d;
  std::vector<SelftestCheck> c;

  c.push_back({"philox known-answer vector", [](bool) {
                 const auto out = numerics::philox4x32_10({0, 0, 0, 0}, {0, 0});
                 return out == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}
                            ? std::string()
                            : std::string("counter 0, key 0 mismatch");
               }});
  c.push_back({"process1d F(0) at rho = -0.5 is 3/4", [](bool tamper) {
                 return near(peak_tail_1d(Rho1D(-0.5), 0.0), tamper ? 0.76 : 0.75, 1e-15);
               }});
  c.push_back({"stationary kappa = 1, F(0) = 1/2 + 1/(2 sqrt3)", [](bool) {
                 return near(peak_tail_stationary_1d(StationaryKappa(1.0), 0.0), 0.5 + 0.5 / std::sqrt(3.0), 1e-15);
               }});
  c.push_back({"stationary and nonstationary forms agree", [](bool) {
                 double worst = 0.0;
                 for (double k : {0.3, 1.0, 1.6}) {
                   for (int i = -40; i <= 40; ++i) {
                     const double u = 0.1 * i;
                     worst = std::max(worst, std::abs(peak_tail_stationary_1d(StationaryKappa(k), u) -
                                                      peak_tail_1d(Rho1D(-k / std::sqrt(3.0)), u)));
                   }
                 }
                 return near(worst, 0.0, 1e-12);
               }});
  c.push_back({"process1d density integrates to 1", [](bool) {
                 const Rho1D rho(-0.5);
                 const double inf = std::numeric_limits<double>::infinity();
                 const double mass =
                     numerics::integrate([&](double x) { return peak_density_1d(rho, x); }, -inf, inf, numerics::QuadConfig{}).value;
                 return near(mass, 1.0, 1e-8);
               }});
  c.push_back({"rho -> 0 limit is the normal tail", [](bool) {
                 return near(peak_tail_1d(Rho1D(-1e-10), 1.3), numerics::std_normal_tail(1.3), 1e-8);
               }});
  c.push_back({"planar density symmetric in (sigma1^2, sigma2^2)", [](bool) {
                 const planar::PlanarSpec a{1, 1, 4.0, 2.25, 1.5}, b{1, 1, 2.25, 4.0, 1.5};
                 return near(planar::peak_density_planar(a, 0.5), planar::peak_density_planar(b, 0.5), 1e-10);
               }});
  c.push_back({"planar total mass is 1", [](bool) {
                 return near(planar::peak_tail_planar(planar::PlanarSpec{1, 1, 4.0, 2.25, 1.5}, -10.0), 1.0, 1e-6);
               }});
  c.push_back({"planar (3,3,1) density matches isotropic N = 2, kappa = 1", [](bool) {
                 const rmt::AnisoPeakHeight iso(rmt::AnisoSpec::with_kappa(2, 1.0), numerics::RandomStream(11, 0));
                 const planar::PlanarSpec spec{1, 1, 3.0, 3.0, 1.0};
                 std::string r;
                 for (double x : {0.0, 1.0}) {
                   if (r.empty()) r = within(iso.density(x), planar::peak_density_planar(spec, x), 3.0, 1e-6);
                 }
                 return r;
               }});
  c.push_back({"cosine N = 1 tail is exp(-u^2/2)", [](bool) {
                 return first_failure({near(cosine::peak_tail_cosine_quad(1, 0.5), std::exp(-0.125), 1e-8),
                                       near(cosine::peak_tail_cosine_quad(1, 2.0), std::exp(-2.0), 1e-8)});
               }});
  c.push_back({"cosine F(0) = 1 for N = 1, 2, 3", [](bool) {
                 return first_failure({near(cosine::peak_tail_cosine_quad(1, 0.0), 1.0, 1e-8),
                                       near(cosine::peak_tail_cosine_quad(2, 0.0), 1.0, 1e-8),
                                       near(cosine::peak_tail_cosine_quad(3, 0.0), 1.0, 1e-8)});
               }});
  c.push_back({"cosine N = 2 against its closed form", [](bool) {
                 // G_2(c) = c e^{-c^2/4} erf(c/2) / (4 sqrt(pi)) + phi(c) / sqrt(2 pi), F = 2 pi G_2(sqrt2 u)
                 const double u = 1.0, cc = std::sqrt(2.0) * u;
                 const double g2 = cc * std::exp(-0.25 * cc * cc) * std::erf(0.5 * cc) / (4.0 * std::sqrt(numerics::kPi)) +
                                   numerics::std_normal_pdf(cc) * numerics::kInvSqrt2Pi;
                 return near(cosine::peak_tail_cosine_quad(2, u), 2.0 * numerics::kPi * g2, 1e-8);
               }});
  c.push_back({"cosine Monte Carlo N = 1 matches exp(-u^2/2)", [](bool) {
                 return within(cosine::peak_tail_cosine_mc(1, 1.0, 200'000, numerics::RandomStream(5, 0)),
                               std::exp(-0.5), 3.0);
               }});
  c.push_back({"GOI expectation of 1 is 1", [](bool) {
                 std::string r;
                 for (double cv : {-0.2, 0.0, 0.5}) {
                   const auto e = rmt::expect_goi([](std::span<const double>) { return 1.0; }, rmt::GoiCovParam(cv, 2),
                                                  100'000, numerics::RandomStream(3, 0));
                   if (r.empty()) r = within(e, 1.0, 3.0, 1e-12);
                 }
                 return r;
               }});
  c.push_back({"GOI N = 1, c = 1/2 half-normal moment", [](bool) {
                 const auto e = rmt::expect_goi([](std::span<const double> l) { return l[0] < 0.0 ? -l[0] : 0.0; },
                                                rmt::GoiCovParam(0.5, 1), 200'000, numerics::RandomStream(4, 0));
                 return within(e, std::sqrt(1.5) * numerics::kInvSqrt2Pi, 3.0);
               }});
  c.push_back({"aniso N = 1, kappa = 1 reproduces the 1D law", [](bool) {
                 const rmt::AnisoPeakHeight a(rmt::AnisoSpec::with_kappa(1, 1.0), numerics::RandomStream(9, 0));
                 std::string r;
                 for (double u : {0.0, 1.0, 2.0}) {
                   if (r.empty()) r = within(a.tail(u), peak_tail_stationary_1d(StationaryKappa(1.0), u), 3.0);
                 }
                 return r;
               }});
  c.push_back({"aniso critical N = 1 gives exp(-u^2/2)", [](bool) {
                 const rmt::AnisoPeakHeight a(rmt::AnisoSpec::with_kappa(1, std::sqrt(3.0)),
                                              numerics::RandomStream(9, 1));
                 return within(a.tail(1.0), std::exp(-0.5), 3.0);
               }});
  c.push_back({"kappa branch classification", [](bool) {
                 const auto a = rmt::kappa_from_phi(-0.5, 0.25, 2);
                 const auto b = rmt::kappa_from_phi(-1.0, 0.5, 2);
                 bool rejected = false;
                 try {
                   rmt::kappa_from_phi(-2.0, 1.0, 2);
                 } catch (const std::invalid_argument&) {
                   rejected = true;
                 }
                 if (a.branch != rmt::KappaBranch::kSubcritical || std::abs(a.kappa - 1.0) > 1e-15) return std::string("(-1/2, 1/4)");
                 if (b.branch != rmt::KappaBranch::kCritical) return std::string("(-1, 1/2) not critical");
                 return rejected ? std::string() : std::string("(-2, 1) accepted");
               }});
  c.push_back({"squared-exponential spectral moments", [](bool) {
                 const auto s = validate::spectral_moments_1d(validate::squared_exponential_1d(), 0.7);
                 return first_failure({near(s.lambda1, 1.0, 1e-5), near(s.lambda2, 3.0, 1e-5), near(s.r, 0.0, 1e-5)});
               }});
  c.push_back({"time-warp rho is constant", [](bool) {
                 const auto cov = validate::time_warp_1d(0.3);
                 std::string r;
                 for (double t : {0.0, 1.0, 2.0}) {
                   const double rho = conditional_rho(validate::spectral_moments_1d(cov, t)).value();
                   if (r.empty()) r = near(rho, -1.0 / std::sqrt(3.0), 1e-4);
                 }
                 return r;
               }});
  c.push_back({"peak finder on ramp and bump", [](bool) {
                 const validate::Grid1D g{0.0, 0.1, 50};
                 std::vector<double> ramp(50), bump(50);
                 for (std::size_t i = 0; i < 50; ++i) {
                   ramp[i] = static_cast<double>(i);
                   const double d = g.at(i) - 2.0;
                   bump[i] = std::exp(-d * d);
                 }
                 if (!validate::find_peaks(ramp, g).empty()) return std::string("ramp has a peak");
                 const auto p = validate::find_peaks(bump, g);
                 if (p.size() != 1 || std::abs(p[0].location[0] - 2.0) > 1e-12) return std::string("bump apex missed");
                 return std::string();
               }});
  c.push_back({"KS of a sample against itself is 0", [](bool) {
                 std::vector<double> v;
                 numerics::RandomStream s(2, 0);
                 for (int i = 0; i < 500; ++i) v.push_back(s.next_normal());
                 const validate::EmpiricalCDF e(v);
                 return near(validate::ks_two_sample(e, e).statistic, 0.0, 0.0);
               }});
  return c;
}

int cmd_selftest(std::ostream& out, bool tamper) {
  int failures = 0;
  const auto checks = selftest_checks();
  for (const SelftestCheck& check : checks) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string reason;
    try {
      reason = check.run(tamper);
    } catch (const std::exception& e) {
      reason = std::string("threw: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out << (reason.empty() ? "PASS  " : "FAIL  ") << check.name << "  (" << std::fixed << std::setprecision(2) << secs
        << " s)";
    if (!reason.empty()) out << "  " << reason;
    out << '\n';
    failures += reason.empty() ? 0 : 1;
  }
  out << (checks.size() - failures) << "/" << checks.size() << " checks passed\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace peakheight::cli
