#pragma once

#include <cstddef>
#include <string>

namespace peakheight::numerics {

/// Monte-Carlo value with its standard error. `std_error` is the sample
/// standard deviation of the estimator terms divided by sqrt(n_samples).
struct EstimateWithError {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;

  /// |value - target| <= k * std_error + slack
  bool within(double target, double k, double slack = 0.0) const;
  std::string to_string() const;
};

/// Streaming mean/variance (Welford) with an order-dependent but
/// deterministic merge, so chunked reductions are reproducible.
class MeanAccumulator {
 public:
  void add(double x);
  void merge(const MeanAccumulator& other);

  std::size_t count() const { return n_; }
  double mean() const { return mean_; }
  /// Unbiased sample variance; zero for fewer than two terms.
  double variance() const;
  EstimateWithError estimate() const;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace peakheight::numerics
