#include "peakheight/numerics/quadrature.hpp"

#include <cstdio>

namespace peakheight::numerics {

void QuadConfig::validate() const {
  if (!(abs_tol > 0.0)) throw std::invalid_argument("QuadConfig: abs_tol must be > 0");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadConfig: rel_tol must be > 0");
  if (!(truncation_radius >= 6.0)) {
    throw std::invalid_argument("QuadConfig: truncation_radius must be >= 6");
  }
  if (max_subdivisions < 10) throw std::invalid_argument("QuadConfig: max_subdivisions must be >= 10");
}

QuadConfig QuadConfig::scaled(double factor) const {
  QuadConfig c = *this;
  c.abs_tol *= factor;
  c.rel_tol *= factor;
  return c;
}

namespace {
std::string describe(const std::string& context, const QuadResult& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, ": quadrature did not converge (value %.12g, error estimate %.3g, %d panels)",
                r.value, r.abs_error, r.n_intervals);
  return context + buf;
}
}  // namespace

QuadratureError::QuadratureError(const std::string& context, const QuadResult& result)
    : std::runtime_error(describe(context, result)), result_(result) {}

double QuadResult::value_or_throw(const std::string& context) const {
  if (!converged) throw QuadratureError(context, *this);
  return value;
}

QuadResult integrate_1d(const std::function<double(double)>& f, double lo, double hi,
                        const QuadConfig& cfg) {
  return integrate(f, lo, hi, cfg);
}

}  // namespace peakheight::numerics
