#include "peakheight/cli/commands.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>

#include "peakheight/cli/selftest.hpp"
#include "peakheight/validate/campaigns.hpp"
#include "peakheight/validate/ks.hpp"

#ifndef PEAKHEIGHT_VERSION
#define PEAKHEIGHT_VERSION "unknown"
#endif

namespace peakheight::cli {

using nlohmann::ordered_json;

std::string format_number(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

struct Row {
  double u = 0.0;
  double tail = 0.0;
  std::optional<double> tail_se;
  std::optional<double> density;
  std::optional<double> density_se;
};

struct Table {
  bool has_tail_se = false;
  bool has_density = false;
  bool has_density_se = false;
  bool deterministic = true;
  std::vector<Row> rows;
};

Table evaluate(const RunConfig& cfg, std::ostream& err) {
  const std::vector<double> u = cfg.grid.points();
  Table t;
  t.rows.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) t.rows[i].u = u[i];
  switch (cfg.family) {
    case Family::kProcess1d: {
      const process1d::Rho1D rho = process1d_rho(cfg);
      t.has_density = true;
      for (Row& r : t.rows) {
        r.tail = process1d::peak_tail_1d(rho, r.u);
        r.density = process1d::peak_density_1d(rho, r.u);
      }
      break;
    }
    case Family::kPlanar: {
      const planar::PlanarPeakHeight ev(planar_spec(cfg), cfg.quad);
      const std::vector<double> f = ev.tail_table(u);
      t.has_density = true;
      for (std::size_t i = 0; i < u.size(); ++i) {
        t.rows[i].tail = f[i];
        t.rows[i].density = ev.density(u[i]);
      }
      break;
    }
    case Family::kCosine: {
      const cosine::CosineSpec spec = cosine_spec(cfg);
      if (spec.n_dim <= cosine::kMaxQuadratureDim) {
        for (Row& r : t.rows) r.tail = cosine::peak_tail_cosine_quad(spec.n_dim, r.u, cfg.quad);
      } else {
        t.deterministic = false;
        t.has_tail_se = true;
        const numerics::RandomStream stream(cfg.seed, 0);
        for (Row& r : t.rows) {
          const auto e = cosine::peak_tail_cosine_mc(spec.n_dim, r.u, cfg.samples.value_or(1'000'000), stream);
          r.tail = e.value;
          r.tail_se = e.std_error;
        }
      }
      break;
    }
    case Family::kAniso: {
      const rmt::AnisoSpec spec = aniso_spec(cfg);
      const rmt::AnisoPeakHeight ev(spec, numerics::RandomStream(cfg.seed, 0), cfg.samples.value_or(200'000));
      if (ev.kappa().near_critical) {
        err << "warning: kappa^2 is within 1e-6 of (N+2)/N; importance weights are poorly conditioned\n";
      }
      const bool subcritical = ev.kappa().branch == rmt::KappaBranch::kSubcritical;
      t.deterministic = false;
      t.has_tail_se = true;
      t.has_density = t.has_density_se = subcritical;
      for (Row& r : t.rows) {
        const auto f = ev.tail(r.u);
        r.tail = f.value;
        r.tail_se = f.std_error;
        if (subcritical) {
          const auto h = ev.density(r.u);
          r.density = h.value;
          r.density_se = h.std_error;
        }
      }
      break;
    }
  }
  return t;
}

std::vector<std::string> columns(const Table& t) {
  std::vector<std::string> c{"u", "F"};
  if (t.has_tail_se) c.push_back("F_stderr");
  if (t.has_density) c.push_back("h");
  if (t.has_density_se) c.push_back("h_stderr");
  return c;
}

std::vector<double> values(const Table& t, const Row& r) {
  std::vector<double> v{r.u, r.tail};
  if (t.has_tail_se) v.push_back(*r.tail_se);
  if (t.has_density) v.push_back(*r.density);
  if (t.has_density_se) v.push_back(*r.density_se);
  return v;
}

ordered_json config_echo(const RunConfig& cfg) {
  ordered_json c;
  c["family"] = to_string(cfg.family);
  c["grid"] = cfg.grid.to_string();
  c["format"] = to_string(cfg.format);
  c["seed"] = cfg.seed;
  if (cfg.samples) c["samples"] = *cfg.samples;
  c["abs_tol"] = cfg.quad.abs_tol;
  c["rel_tol"] = cfg.quad.rel_tol;
  switch (cfg.family) {
    case Family::kProcess1d:
      if (cfg.rho) c["rho"] = *cfg.rho;
      if (cfg.kappa) c["kappa"] = *cfg.kappa;
      break;
    case Family::kPlanar:
      c["sigma1_sq"] = cfg.sigma1_sq.value_or(NAN);
      c["sigma2_sq"] = cfg.sigma2_sq.value_or(NAN);
      c["sigma3_sq"] = cfg.sigma3_sq.value_or(NAN);
      c["gamma1"] = cfg.gamma1;
      c["gamma2"] = cfg.gamma2;
      break;
    case Family::kCosine:
      c["n"] = cfg.n_dim.value_or(0);
      if (!cfg.omegas.empty()) c["omegas"] = cfg.omegas;
      break;
    case Family::kAniso:
      c["n"] = cfg.n_dim.value_or(0);
      if (cfg.kappa) c["kappa"] = *cfg.kappa;
      if (cfg.phi1) c["phi1"] = *cfg.phi1;
      if (cfg.phi2) c["phi2"] = *cfg.phi2;
      if (!cfg.a_matrix.empty()) c["a_matrix"] = cfg.a_matrix;
      break;
  }
  return c;
}

ordered_json versions() {
  ordered_json v;
  v["peakheight"] = PEAKHEIGHT_VERSION;
  v["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
               std::to_string(EIGEN_MINOR_VERSION);
  v["compiler"] = __VERSION__;
  return v;
}

void write_table(const RunConfig& cfg, const Table& t, std::ostream& out) {
  const auto cols = columns(t);
  if (cfg.format == OutputFormat::kCsv) {
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const Row& r : t.rows) {
      const auto v = values(t, r);
      for (std::size_t i = 0; i < v.size(); ++i) out << (i ? "," : "") << format_number(v[i]);
      out << '\n';
    }
    return;
  }
  ordered_json doc;
  doc["meta"]["config"] = config_echo(cfg);
  doc["meta"]["seed"] = cfg.seed;
  doc["meta"]["versions"] = versions();
  doc["meta"]["columns"] = cols;
  doc["rows"] = ordered_json::array();
  for (const Row& r : t.rows) {
    const auto v = values(t, r);
    ordered_json row;
    for (std::size_t i = 0; i < v.size(); ++i) row[cols[i]] = v[i];
    doc["rows"].push_back(row);
  }
  out << doc.dump(2) << '\n';
}

// first index where F rises beyond its tolerance, or npos
std::size_t monotonicity_violation(const Table& t, const RunConfig& cfg) {
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const Row& a = t.rows[i - 1];
    const Row& b = t.rows[i];
    double tol = 1e-12 + cfg.quad.abs_tol;
    if (!t.deterministic) {
      const double sa = a.tail_se.value_or(0.0), sb = b.tail_se.value_or(0.0);
      tol = 3.0 * std::sqrt(sa * sa + sb * sb) + 1e-12;
    }
    if (b.tail > a.tail + tol) return i;
  }
  return std::string::npos;
}

template <class Writer>
void emit(const std::optional<std::string>& path, std::ostream& out, Writer&& write) {
  if (!path) {
    write(out);
    return;
  }
  std::ofstream file(*path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file " + *path);
  write(file);
  if (!file) throw std::runtime_error("failed writing " + *path);
}

ordered_json report_json(const validate::CampaignReport& r) {
  ordered_json j;
  j["campaign"] = r.name;
  j["n_peaks"] = r.n_peaks;
  j["ks"] = r.ks;
  j["threshold"] = r.threshold;
  j["pass"] = r.passed;
  j["grid"] = r.grid;
  j["seed"] = r.seed;
  j["replications"] = r.replications;
  if (!r.bins.empty()) {
    j["bins"] = ordered_json::array();
    for (const auto& b : r.bins) {
      j["bins"].push_back({{"t_lo", b.t_lo},
                           {"t_hi", b.t_hi},
                           {"rho", b.rho},
                           {"n_peaks", b.n_peaks},
                           {"ks", b.ks},
                           {"threshold", b.threshold},
                           {"pass", b.passed}});
    }
  }
  j["notes"] = r.notes;
  return j;
}

}  // namespace

int cmd_eval(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  cfg.validate();
  const Table t = evaluate(cfg, err);
  emit(cfg.out_path, out, [&](std::ostream& os) { write_table(cfg, t, os); });
  const std::size_t bad = monotonicity_violation(t, cfg);
  if (bad != std::string::npos) {
    err << "error: F increases between u = " << format_number(t.rows[bad - 1].u) << " and "
        << format_number(t.rows[bad].u) << "\n";
    return kExitNotMonotone;
  }
  return kExitOk;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  validate::CampaignOptions opt;
  opt.seed = cfg.seed;
  opt.replications = cfg.samples.value_or(0);
  opt.step = cfg.step.value_or(0.0);
  opt.keep_peaks = cfg.peaks_csv.has_value();
  validate::CampaignReport report;
  switch (cfg.family) {
    case Family::kProcess1d:
      if (cfg.field == "se") {
        if (cfg.rho) throw ConfigError("validate process1d: the squared-exponential field takes --kappa, not --rho");
        const double kappa = cfg.kappa.value_or(1.0);
        process1d::StationaryKappa k = [&] {
          try {
            return process1d::StationaryKappa(kappa);
          } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
          }
        }();
        report = validate::campaign_stationary_1d(opt, k.value() - 1.0);
      } else if (cfg.field == "warp") {
        report = validate::campaign_time_warp(opt);
      } else if (cfg.field == "mixture") {
        report = validate::campaign_amplitude_mixture(opt);
      } else {
        throw ConfigError("validate process1d: --field must be se | warp | mixture");
      }
      break;
    case Family::kPlanar: report = validate::campaign_planar(opt); break;
    case Family::kCosine: {
      const cosine::CosineSpec spec = cosine_spec(cfg);
      if (spec.n_dim > 2) throw ConfigError("validate cosine: simulation supports N in {1, 2}");
      report = validate::campaign_cosine(spec.n_dim, spec.omegas, opt);
      break;
    }
    case Family::kAniso:
      throw ConfigError("validate: no simulator for the aniso family; use eval or selftest cross-checks");
  }
  if (cfg.peaks_csv) {
    std::ofstream f(*cfg.peaks_csv, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + *cfg.peaks_csv);
    validate::write_peaks_csv(f, report.peaks, report.dims);
  }
  emit(cfg.out_path, out, [&](std::ostream& os) { os << report_json(report).dump(2) << '\n'; });
  try {
    validate::require_enough_peaks(report, validate::kMinKsSamples);
  } catch (const validate::InsufficientPeaksError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInsufficientPeaks;
  }
  return report.passed ? kExitOk : kExitFailed;
}

namespace {

struct Flags {
  std::string config_path, family, grid, format, out, omegas, a_matrix, field, peaks_csv;
  double u = 0, rho = 0, kappa = 0, s1 = 0, s2 = 0, s3 = 0, g1 = 1, g2 = 1, phi1 = 0, phi2 = 0, abs_tol = 0,
         rel_tol = 0, step = 0;
  std::uint64_t seed = 1;
  std::size_t samples = 0;
  int n = 0;
  std::map<std::string, CLI::Option*> opts;

  void attach(CLI::App* app, bool for_validate) {
    opts["config"] = app->add_option("--config", config_path, "JSON config file; flags win on conflict");
    opts["family"] = app->add_option("--family", family, "process1d | planar | cosine | aniso");
    if (!for_validate) {
      opts["grid"] = app->add_option("--grid", grid, "evaluation grid MIN:MAX:STEP");
      opts["u"] = app->add_option("--u", u, "single evaluation point");
      opts["format"] = app->add_option("--format", format, "csv | json");
      opts["abs-tol"] = app->add_option("--abs-tol", abs_tol, "quadrature absolute tolerance");
      opts["rel-tol"] = app->add_option("--rel-tol", rel_tol, "quadrature relative tolerance");
    } else {
      opts["field"] = app->add_option("--field", field, "process1d field: se | warp | mixture");
      opts["step"] = app->add_option("--step", step, "simulation grid step");
      opts["peaks-csv"] = app->add_option("--peaks-csv", peaks_csv, "write simulated peaks as CSV");
    }
    opts["seed"] = app->add_option("--seed", seed, "random seed");
    opts["samples"] = app->add_option("--samples", samples,
                                      for_validate ? "replications" : "Monte-Carlo sample count");
    opts["out"] = app->add_option("--out", out, "output file (default stdout)");
    opts["rho"] = app->add_option("--rho", rho, "process1d conditional correlation");
    opts["kappa"] = app->add_option("--kappa", kappa, "curvature ratio kappa");
    opts["sigma1-sq"] = app->add_option("--sigma1-sq", s1, "planar Var X11");
    opts["sigma2-sq"] = app->add_option("--sigma2-sq", s2, "planar Var X22");
    opts["sigma3-sq"] = app->add_option("--sigma3-sq", s3, "planar Var X12");
    opts["gamma1"] = app->add_option("--gamma1", g1, "planar gradient standard deviation, axis 1");
    opts["gamma2"] = app->add_option("--gamma2", g2, "planar gradient standard deviation, axis 2");
    opts["n"] = app->add_option("--n", n, "dimension N");
    opts["omegas"] = app->add_option("--omegas", omegas, "cosine frequencies, comma separated");
    opts["phi1"] = app->add_option("--phi1", phi1, "phi'(0)");
    opts["phi2"] = app->add_option("--phi2", phi2, "phi''(0)");
    opts["a-matrix"] = app->add_option("--a-matrix", a_matrix, "N x N matrix, rows separated by ';'");
  }

  bool has(const std::string& k) const {
    const auto it = opts.find(k);
    return it != opts.end() && it->second->count() > 0;
  }

  RunConfig build() const {
    RunConfig cfg;
    if (has("config")) {
      std::ifstream f(config_path);
      if (!f) throw ConfigError("cannot read config file " + config_path);
      std::stringstream ss;
      ss << f.rdbuf();
      apply_json(cfg, ss.str());
    }
    if (has("family")) cfg.family = parse_family(family);
    if (has("grid") && has("u")) throw ConfigError("give either --grid or --u");
    if (has("grid")) cfg.grid = GridSpec::parse(grid);
    if (has("u")) cfg.grid = GridSpec::single(u);
    if (has("format")) cfg.format = parse_format(format);
    if (has("abs-tol")) cfg.quad.abs_tol = abs_tol;
    if (has("rel-tol")) cfg.quad.rel_tol = rel_tol;
    if (has("field")) cfg.field = field;
    if (has("step")) cfg.step = step;
    if (has("peaks-csv")) cfg.peaks_csv = peaks_csv;
    if (has("seed")) cfg.seed = seed;
    if (has("samples")) cfg.samples = samples;
    if (has("out")) cfg.out_path = out;
    if (has("rho")) cfg.rho = rho;
    if (has("kappa")) cfg.kappa = kappa;
    if (has("sigma1-sq")) cfg.sigma1_sq = s1;
    if (has("sigma2-sq")) cfg.sigma2_sq = s2;
    if (has("sigma3-sq")) cfg.sigma3_sq = s3;
    if (has("gamma1")) cfg.gamma1 = g1;
    if (has("gamma2")) cfg.gamma2 = g2;
    if (has("n")) cfg.n_dim = n;
    if (has("omegas")) cfg.omegas = parse_list(omegas);
    if (has("phi1")) cfg.phi1 = phi1;
    if (has("phi2")) cfg.phi2 = phi2;
    if (has("a-matrix")) cfg.a_matrix = parse_list(a_matrix);
    return cfg;
  }
};

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Peak height distributions of smooth Gaussian random fields", "peakheight"};
  app.set_version_flag("--version", std::string(PEAKHEIGHT_VERSION));
  app.require_subcommand(1);
  Flags eval_flags, validate_flags;
  CLI::App* eval = app.add_subcommand("eval", "tabulate F(u) and h(x) over a grid");
  eval_flags.attach(eval, false);
  CLI::App* val = app.add_subcommand("validate", "simulate, count peaks and compare by KS distance");
  validate_flags.attach(val, true);
  CLI::App* self = app.add_subcommand("selftest", "closed-form and cross-family checks");
  bool tamper = false;
  self->add_flag("--tamper", tamper, "perturb one reference constant (negative control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalidArgs;
  }

  try {
    if (eval->parsed()) return cmd_eval(eval_flags.build(), out, err);
    if (val->parsed()) return cmd_validate(validate_flags.build(), out, err);
    return cmd_selftest(out, tamper);
  } catch (const ConfigError& e) {
    err << "error: invalid argument: " << e.what() << "\n";
    return kExitInvalidArgs;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }
}

}  // namespace peakheight::cli
