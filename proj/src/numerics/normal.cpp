#include "peakheight/numerics/normal.hpp"

#include <cmath>
#include <stdexcept>

namespace peakheight::numerics {

namespace {
void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::domain_error(std::string(what) + ": non-finite argument");
}
}  // namespace

double std_normal_pdf(double x) {
  require_finite(x, "std_normal_pdf");
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) {
  require_finite(x, "std_normal_cdf");
  return 0.5 * std::erfc(-x / kSqrt2);
}

double std_normal_tail(double x) {
  require_finite(x, "std_normal_tail");
  return 0.5 * std::erfc(x / kSqrt2);
}

}  // namespace peakheight::numerics
