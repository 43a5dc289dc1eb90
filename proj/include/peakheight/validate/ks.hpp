#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace peakheight::validate {

/// Minimum sample count for a KS verdict.
inline constexpr std::size_t kMinKsSamples = 200;

/// Right-continuous empirical distribution of a sample.
class EmpiricalCDF {
 public:
  explicit EmpiricalCDF(std::vector<double> samples);

  std::size_t count() const { return sorted_.size(); }
  const std::vector<double>& sorted() const { return sorted_; }
  /// Fraction of samples <= u.
  double cdf(double u) const;
  /// Fraction of samples > u.
  double exceedance(double u) const { return 1.0 - cdf(u); }

 private:
  std::vector<double> sorted_;
};

struct KsResult {
  double statistic = 0.0;
  std::size_t n_samples = 0;
  /// False below kMinKsSamples: the statistic is reported without a verdict.
  bool sufficient() const { return n_samples >= kMinKsSamples; }
};

/// sup over sample points of |empirical exceedance - F|, taking both sides
/// of each jump. tail(u) is the theoretical P(height > u).
KsResult ks_distance(const EmpiricalCDF& emp, const std::function<double(double)>& tail);

/// Same with F already evaluated at emp.sorted().
KsResult ks_distance_tabulated(const EmpiricalCDF& emp, std::span<const double> tail_at_sorted);

/// Two-sample statistic sup |F_a - F_b|; n_samples is the smaller count.
KsResult ks_two_sample(const EmpiricalCDF& a, const EmpiricalCDF& b);

}  // namespace peakheight::validate
