#pragma once

namespace peakheight::numerics {

inline constexpr double kSqrt2Pi = 2.50662827463100050241576528481104525;
inline constexpr double kInvSqrt2Pi = 0.398942280401432677939946059934381868;
inline constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
inline constexpr double kInvSqrt2 = 0.707106781186547524400844362104849039;
inline constexpr double kPi = 3.14159265358979323846264338327950288;

/// Standard normal density. Throws std::domain_error on non-finite input.
double std_normal_pdf(double x);

/// Standard normal distribution function Phi(x).
double std_normal_cdf(double x);

/// Upper tail Psi(x) = 1 - Phi(x), evaluated through erfc so that the
/// deep right tail keeps full relative precision.
double std_normal_tail(double x);

}  // namespace peakheight::numerics
