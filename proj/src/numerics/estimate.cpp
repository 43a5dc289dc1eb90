#include "peakheight/numerics/estimate.hpp"

#include <cmath>
#include <cstdio>

namespace peakheight::numerics {

bool EstimateWithError::within(double target, double k, double slack) const {
  return std::abs(value - target) <= k * std_error + slack;
}

std::string EstimateWithError::to_string() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.8g +/- %.2g (n=%zu)", value, std_error, n_samples);
  return buf;
}

void MeanAccumulator::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void MeanAccumulator::merge(const MeanAccumulator& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(n_);
  const double nb = static_cast<double>(other.n_);
  const double delta = other.mean_ - mean_;
  const double n = na + nb;
  mean_ += delta * nb / n;
  m2_ += other.m2_ + delta * delta * na * nb / n;
  n_ += other.n_;
}

double MeanAccumulator::variance() const {
  return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0;
}

EstimateWithError MeanAccumulator::estimate() const {
  EstimateWithError e;
  e.value = mean_;
  e.n_samples = n_;
  e.std_error = n_ > 0 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
  return e;
}

}  // namespace peakheight::numerics
