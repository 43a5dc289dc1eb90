#pragma once

#include <array>
#include <cstddef>
#include <ostream>
#include <span>
#include <vector>

#include "peakheight/validate/covariance.hpp"
#include "peakheight/validate/simulate.hpp"

namespace peakheight::validate {

struct PeakSample {
  std::array<double, 2> location{};  // second coordinate unused in 1D
  double height = 0.0;
};

/// Interior grid points strictly above both neighbours. Ties are dropped.
std::vector<PeakSample> find_peaks(std::span<const double> values, const Grid1D& grid);

/// Interior grid points strictly above all 8 neighbours.
std::vector<PeakSample> find_peaks(const Field2D& field, const Grid2D& grid);

std::vector<double> heights(const std::vector<PeakSample>& peaks);

/// CSV with columns replication,location...,height; dims is 1 or 2.
void write_peaks_csv(std::ostream& out, const std::vector<std::vector<PeakSample>>& by_replication, int dims);

}  // namespace peakheight::validate
