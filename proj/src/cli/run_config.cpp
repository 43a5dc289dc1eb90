#include "peakheight/cli/run_config.hpp"

#include <charconv>
#include <cmath>
#include <json.hpp>
#include <sstream>

namespace peakheight::cli {

namespace {

double parse_double(const std::string& s, const std::string& what) {
  double v = 0.0;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  while (begin < end && *begin == ' ') ++begin;
  while (end > begin && end[-1] == ' ') --end;
  if (begin < end && *begin == '+') ++begin;
  const auto res = std::from_chars(begin, end, v);
  if (res.ec != std::errc() || res.ptr != end) throw ConfigError(what + ": cannot parse '" + s + "' as a number");
  return v;
}

// wrap library exceptions so every bad parameter maps to the same exit code
template <class Fn>
auto guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

Family parse_family(const std::string& s) {
  if (s == "process1d") return Family::kProcess1d;
  if (s == "planar") return Family::kPlanar;
  if (s == "cosine") return Family::kCosine;
  if (s == "aniso") return Family::kAniso;
  throw ConfigError("family must be one of process1d | planar | cosine | aniso, got '" + s + "'");
}

std::string to_string(Family f) {
  switch (f) {
    case Family::kProcess1d: return "process1d";
    case Family::kPlanar: return "planar";
    case Family::kCosine: return "cosine";
    case Family::kAniso: return "aniso";
  }
  return "?";
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::kCsv;
  if (s == "json") return OutputFormat::kJson;
  throw ConfigError("format must be csv | json, got '" + s + "'");
}

std::string to_string(OutputFormat f) { return f == OutputFormat::kCsv ? "csv" : "json"; }

GridSpec GridSpec::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw ConfigError("grid must be MIN:MAX:STEP, got '" + text + "'");
  GridSpec g{parse_double(parts[0], "grid min"), parse_double(parts[1], "grid max"),
             parse_double(parts[2], "grid step")};
  if (!(g.min < g.max)) throw ConfigError("grid: min < max violated");
  if (!(g.step > 0.0) || !std::isfinite(g.step)) throw ConfigError("grid: step > 0 violated");
  return g;
}

GridSpec GridSpec::single(double u) {
  if (!std::isfinite(u)) throw ConfigError("u must be finite");
  return {u, u, 1.0};
}

std::vector<double> GridSpec::points() const {
  if (is_single()) return {min};
  std::vector<double> p;
  const auto n = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9));
  if (n > 10'000'000) throw ConfigError("grid: more than 1e7 points");
  for (std::size_t i = 0; i <= n; ++i) p.push_back(min + static_cast<double>(i) * step);
  return p;
}

std::string GridSpec::to_string() const {
  std::ostringstream os;
  os.precision(17);
  os << min << ':' << max << ':' << step;
  return os.str();
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::string item;
  for (char c : text + ",") {
    if (c == ',' || c == ';') {
      if (!item.empty()) out.push_back(parse_double(item, "list entry"));
      item.clear();
    } else {
      item.push_back(c);
    }
  }
  return out;
}

process1d::Rho1D process1d_rho(const RunConfig& cfg) {
  return guarded([&] {
    if (cfg.rho.has_value() == cfg.kappa.has_value()) {
      throw ConfigError("process1d needs exactly one of --rho or --kappa");
    }
    if (cfg.rho) return process1d::Rho1D(*cfg.rho);
    const process1d::StationaryKappa k(*cfg.kappa);
    if (k.degenerate()) {
      throw ConfigError("process1d: kappa = sqrt3 is the degenerate cosine case; use --family cosine --n 1");
    }
    return process1d::Rho1D(-k.value() / std::sqrt(3.0));
  });
}

planar::PlanarSpec planar_spec(const RunConfig& cfg) {
  return guarded([&] {
    if (!cfg.sigma1_sq || !cfg.sigma2_sq || !cfg.sigma3_sq) {
      throw ConfigError("planar needs --sigma1-sq, --sigma2-sq and --sigma3-sq");
    }
    planar::PlanarSpec s;
    s.gamma1_sq = cfg.gamma1 * cfg.gamma1;
    s.gamma2_sq = cfg.gamma2 * cfg.gamma2;
    s.sigma1_sq = *cfg.sigma1_sq;
    s.sigma2_sq = *cfg.sigma2_sq;
    s.sigma3_sq = *cfg.sigma3_sq;
    s.validate();
    planar::planar_correlations(s);
    return s;
  });
}

cosine::CosineSpec cosine_spec(const RunConfig& cfg) {
  return guarded([&] {
    if (!cfg.n_dim) throw ConfigError("cosine needs --n");
    cosine::CosineSpec s = cosine::CosineSpec::unit(*cfg.n_dim);
    if (!cfg.omegas.empty()) s.omegas = cfg.omegas;
    s.validate();
    return s;
  });
}

rmt::AnisoSpec aniso_spec(const RunConfig& cfg) {
  return guarded([&] {
    if (!cfg.n_dim) throw ConfigError("aniso needs --n");
    const int n = *cfg.n_dim;
    rmt::AnisoSpec s;
    if (cfg.kappa) {
      if (cfg.phi1 || cfg.phi2) throw ConfigError("aniso: give either --kappa or --phi1/--phi2, not both");
      s = rmt::AnisoSpec::with_kappa(n, *cfg.kappa);
    } else {
      if (!cfg.phi1 || !cfg.phi2) throw ConfigError("aniso needs --kappa or both --phi1 and --phi2");
      s.n_dim = n;
      s.a_matrix = Eigen::MatrixXd::Identity(n, n);
      s.phi1 = *cfg.phi1;
      s.phi2 = *cfg.phi2;
    }
    if (!cfg.a_matrix.empty()) {
      if (cfg.a_matrix.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
        throw ConfigError("aniso: --a-matrix needs N*N entries");
      }
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) s.a_matrix(i, j) = cfg.a_matrix[static_cast<std::size_t>(i * n + j)];
      }
    }
    s.validate();
    return s;
  });
}

void RunConfig::validate() const {
  if (!grid.is_single()) {
    if (!(grid.min < grid.max)) throw ConfigError("grid: min < max violated");
    if (!(grid.step > 0.0)) throw ConfigError("grid: step > 0 violated");
  }
  if (samples && *samples < 2) throw ConfigError("samples >= 2 violated");
  guarded([&] {
    quad.validate();
    return 0;
  });
  switch (family) {
    case Family::kProcess1d: process1d_rho(*this); break;
    case Family::kPlanar: planar_spec(*this); break;
    case Family::kCosine: cosine_spec(*this); break;
    case Family::kAniso: aniso_spec(*this); break;
  }
}

void apply_json(RunConfig& cfg, const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config file: top level must be an object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "family") cfg.family = parse_family(v.get<std::string>());
      else if (key == "grid") cfg.grid = GridSpec::parse(v.get<std::string>());
      else if (key == "u") cfg.grid = GridSpec::single(v.get<double>());
      else if (key == "format") cfg.format = parse_format(v.get<std::string>());
      else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "samples") cfg.samples = v.get<std::size_t>();
      else if (key == "out") cfg.out_path = v.get<std::string>();
      else if (key == "abs_tol") cfg.quad.abs_tol = v.get<double>();
      else if (key == "rel_tol") cfg.quad.rel_tol = v.get<double>();
      else if (key == "rho") cfg.rho = v.get<double>();
      else if (key == "kappa") cfg.kappa = v.get<double>();
      else if (key == "sigma1_sq") cfg.sigma1_sq = v.get<double>();
      else if (key == "sigma2_sq") cfg.sigma2_sq = v.get<double>();
      else if (key == "sigma3_sq") cfg.sigma3_sq = v.get<double>();
      else if (key == "gamma1") cfg.gamma1 = v.get<double>();
      else if (key == "gamma2") cfg.gamma2 = v.get<double>();
      else if (key == "n") cfg.n_dim = v.get<int>();
      else if (key == "omegas") cfg.omegas = v.get<std::vector<double>>();
      else if (key == "phi1") cfg.phi1 = v.get<double>();
      else if (key == "phi2") cfg.phi2 = v.get<double>();
      else if (key == "a_matrix") cfg.a_matrix = v.get<std::vector<double>>();
      else if (key == "field") cfg.field = v.get<std::string>();
      else if (key == "step") cfg.step = v.get<double>();
      else if (key == "peaks_csv") cfg.peaks_csv = v.get<std::string>();
      else throw ConfigError("config file: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::type_error& e) {
    throw ConfigError(std::string("config file: ") + e.what());
  }
}

}  // namespace peakheight::cli
