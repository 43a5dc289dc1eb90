#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "peakheight/cosine.hpp"
#include "peakheight/numerics/quadrature.hpp"
#include "peakheight/planar.hpp"
#include "peakheight/process1d.hpp"
#include "peakheight/rmt.hpp"

namespace peakheight::cli {

enum class Family { kProcess1d, kPlanar, kCosine, kAniso };
enum class OutputFormat { kCsv, kJson };

Family parse_family(const std::string& s);
std::string to_string(Family f);
OutputFormat parse_format(const std::string& s);
std::string to_string(OutputFormat f);

/// Invalid command-line or config-file input.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation points MIN:MAX:STEP (inclusive of MAX up to rounding).
struct GridSpec {
  double min = -3.0;
  double max = 3.0;
  double step = 0.5;

  static GridSpec parse(const std::string& text);
  static GridSpec single(double u);
  std::vector<double> points() const;
  bool is_single() const { return min == max; }
  std::string to_string() const;
};

/// Everything a subcommand needs. Family parameters that do not apply to
/// the selected family are ignored; the ones that do are checked by
/// validate() before any computation.
struct RunConfig {
  Family family = Family::kProcess1d;
  GridSpec grid;
  OutputFormat format = OutputFormat::kCsv;
  std::uint64_t seed = 1;
  std::optional<std::size_t> samples;
  std::optional<std::string> out_path;
  numerics::QuadConfig quad;

  // process1d: either rho or a stationary kappa
  std::optional<double> rho;
  std::optional<double> kappa;

  // planar
  std::optional<double> sigma1_sq;
  std::optional<double> sigma2_sq;
  std::optional<double> sigma3_sq;
  double gamma1 = 1.0;
  double gamma2 = 1.0;

  // cosine and aniso
  std::optional<int> n_dim;
  std::vector<double> omegas;
  std::optional<double> phi1;
  std::optional<double> phi2;
  std::vector<double> a_matrix;  // row-major N x N

  // validate only
  std::string field = "se";  // process1d simulator: se | warp | mixture
  std::optional<double> step;
  std::optional<std::string> peaks_csv;

  /// Throws ConfigError naming the violated invariant.
  void validate() const;
};

/// Applies the keys present in a JSON object (same names as the long flags
/// without dashes, '-' replaced by '_') on top of cfg.
void apply_json(RunConfig& cfg, const std::string& json_text);

/// Family objects built from a config; each throws ConfigError on bad input.
process1d::Rho1D process1d_rho(const RunConfig& cfg);
planar::PlanarSpec planar_spec(const RunConfig& cfg);
cosine::CosineSpec cosine_spec(const RunConfig& cfg);
rmt::AnisoSpec aniso_spec(const RunConfig& cfg);

/// "1,2.5" -> {1, 2.5}; also accepts ';' as a separator (matrix rows).
std::vector<double> parse_list(const std::string& text);

}  // namespace peakheight::cli
