#include "peakheight/validate/peaks.hpp"

#include <charconv>
#include <stdexcept>
#include <string>

namespace peakheight::validate {

std::vector<PeakSample> find_peaks(std::span<const double> values, const Grid1D& grid) {
  if (values.size() != grid.n_points) throw std::invalid_argument("find_peaks: field size does not match the grid");
  std::vector<PeakSample> peaks;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const double v = values[i];
    if (v > values[i - 1] && v > values[i + 1]) peaks.push_back({{grid.at(i), 0.0}, v});
  }
  return peaks;
}

std::vector<PeakSample> find_peaks(const Field2D& field, const Grid2D& grid) {
  if (field.nx != grid.x.n_points || field.ny != grid.y.n_points) {
    throw std::invalid_argument("find_peaks: field size does not match the grid");
  }
  std::vector<PeakSample> peaks;
  for (std::size_t i = 1; i + 1 < field.nx; ++i) {
    for (std::size_t j = 1; j + 1 < field.ny; ++j) {
      const double v = field(i, j);
      bool is_max = true;
      for (int di = -1; di <= 1 && is_max; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          if (!(v > field(i + di, j + dj))) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) peaks.push_back({{grid.x.at(i), grid.y.at(j)}, v});
    }
  }
  return peaks;
}

std::vector<double> heights(const std::vector<PeakSample>& peaks) {
  std::vector<double> h;
  h.reserve(peaks.size());
  for (const PeakSample& p : peaks) h.push_back(p.height);
  return h;
}

namespace {

void put(std::ostream& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.write(buf, res.ptr - buf);
}

}  // namespace

void write_peaks_csv(std::ostream& out, const std::vector<std::vector<PeakSample>>& by_replication, int dims) {
  if (dims != 1 && dims != 2) throw std::invalid_argument("write_peaks_csv: dims must be 1 or 2");
  out << (dims == 1 ? "replication,location,height\n" : "replication,location_x,location_y,height\n");
  for (std::size_t r = 0; r < by_replication.size(); ++r) {
    for (const PeakSample& p : by_replication[r]) {
      out << r << ',';
      put(out, p.location[0]);
      out << ',';
      if (dims == 2) {
        put(out, p.location[1]);
        out << ',';
      }
      put(out, p.height);
      out << '\n';
    }
  }
}

}  // namespace peakheight::validate
