#include "peakheight/validate/ks.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace peakheight::validate {

EmpiricalCDF::EmpiricalCDF(std::vector<double> samples) : sorted_(std::move(samples)) {
  for (double v : sorted_) {
    if (!std::isfinite(v)) throw std::invalid_argument("EmpiricalCDF: non-finite sample");
  }
  std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCDF::cdf(double u) const {
  if (sorted_.empty()) throw std::logic_error("EmpiricalCDF: empty sample");
  const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), u);
  return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

KsResult ks_distance_tabulated(const EmpiricalCDF& emp, std::span<const double> tail_at_sorted) {
  const std::size_t n = emp.count();
  if (n == 0) throw std::invalid_argument("ks_distance: empty sample");
  if (tail_at_sorted.size() != n) throw std::invalid_argument("ks_distance: tail table size mismatch");
  const double inv = 1.0 / static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    // exceedance just below and at the i-th order statistic
    const double before = 1.0 - static_cast<double>(i) * inv;
    const double after = 1.0 - static_cast<double>(i + 1) * inv;
    const double f = tail_at_sorted[i];
    d = std::max({d, std::abs(before - f), std::abs(after - f)});
  }
  return {d, n};
}

KsResult ks_distance(const EmpiricalCDF& emp, const std::function<double(double)>& tail) {
  std::vector<double> f(emp.count());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = tail(emp.sorted()[i]);
  return ks_distance_tabulated(emp, f);
}

KsResult ks_two_sample(const EmpiricalCDF& a, const EmpiricalCDF& b) {
  if (a.count() == 0 || b.count() == 0) throw std::invalid_argument("ks_two_sample: empty sample");
  const auto& x = a.sorted();
  const auto& y = b.sorted();
  const double na = static_cast<double>(x.size()), nb = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= v) ++i;
    while (j < y.size() && y[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return {d, std::min(x.size(), y.size())};
}

}  // namespace peakheight::validate
