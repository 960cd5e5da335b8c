#pragma once

// Sweep engine behind the command-line front end: flat key=value
// configuration, deterministic CSV emission over (omega, z, theta, beam)
// grids, the analytic-vs-numeric comparison report, and the length-scale
// report.  Frequencies are configured in units of gamma and positions in
// units of gamma/C (the display units of all outputs).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "eit/analytic.hpp"
#include "eit/langevin.hpp"
#include "eit/model.hpp"
#include "eit/propagate.hpp"
#include "eit/steady_state.hpp"
#include "eit/transfer.hpp"

namespace eit {

enum class SweepMode { analytic, numeric, compare, decoherence };

inline std::vector<double> linspace(double a, double b, size_t n) {
  if (n == 0) return {};
  if (n == 1) return {a};
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i)
    out[i] = a + static_cast<double>(i) * (b - a) / static_cast<double>(n - 1);
  return out;
}

struct SweepConfig {
  double gamma1 = 0.5;
  double gamma2 = 0.5;
  double g1 = 1.0 / 60;
  double g2 = 1.0 / 60;
  double n_atoms = 1e6;
  double gamma12 = 0.0;
  double alpha1 = 60.0;
  double alpha2 = 60.0;
  double xi2 = -3.0;
  double omega = 0.25;                           // single frequency for `scales` [gamma]
  std::vector<double> theta_list{0.0};
  std::vector<double> omega_grid = linspace(0.05, 1.0, 20);   // [gamma]
  std::vector<double> z_grid = linspace(0.0, 200.0, 100);     // [gamma/C]
  SweepMode mode = SweepMode::compare;
  std::string out;                               // empty = standard output
  double tolerance = 1e-3;                       // compare gate on |dS|/max(1,S)
  int threads = 1;
  double corrupt_diffusion = 0.0;                // test hook: perturbs one D pair
};

inline SweepMode parse_mode(const std::string& text) {
  if (text == "analytic") return SweepMode::analytic;
  if (text == "numeric") return SweepMode::numeric;
  if (text == "compare") return SweepMode::compare;
  if (text == "decoherence") return SweepMode::decoherence;
  throw std::invalid_argument("mode must be analytic|numeric|compare|decoherence, got '" + text +
                              "'");
}

inline const char* mode_name(SweepMode mode) {
  switch (mode) {
    case SweepMode::analytic: return "analytic";
    case SweepMode::numeric: return "numeric";
    case SweepMode::compare: return "compare";
    case SweepMode::decoherence: return "decoherence";
  }
  return "?";
}

namespace detail {

inline double parse_double(const std::string& key, const std::string& text) {
  try {
    size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': cannot parse number '" + text + "'");
  }
}

inline int parse_int(const std::string& key, const std::string& text) {
  try {
    size_t pos = 0;
    const int v = std::stoi(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config key '" + key + "': cannot parse integer '" + text + "'");
  }
}

// Grid syntax: "a:b:n" (n evenly spaced points from a to b) or a comma list.
inline std::vector<double> parse_grid(const std::string& key, const std::string& text) {
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() != 3)
      throw std::invalid_argument("config key '" + key + "': grid must be start:stop:count");
    const double a = parse_double(key, parts[0]);
    const double b = parse_double(key, parts[1]);
    const int n = parse_int(key, parts[2]);
    if (n < 1) throw std::invalid_argument("config key '" + key + "': count must be >= 1");
    return linspace(a, b, static_cast<size_t>(n));
  }
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(parse_double(key, tok));
  if (out.empty()) throw std::invalid_argument("config key '" + key + "': empty list");
  return out;
}

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string format_value(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

}  // namespace detail

// Applies one key=value assignment to the configuration.
inline void apply_setting(SweepConfig& config, const std::string& key, const std::string& value) {
  if (key == "gamma1") config.gamma1 = detail::parse_double(key, value);
  else if (key == "gamma2") config.gamma2 = detail::parse_double(key, value);
  else if (key == "g1") config.g1 = detail::parse_double(key, value);
  else if (key == "g2") config.g2 = detail::parse_double(key, value);
  else if (key == "n_atoms") config.n_atoms = detail::parse_double(key, value);
  else if (key == "gamma12") config.gamma12 = detail::parse_double(key, value);
  else if (key == "alpha1") config.alpha1 = detail::parse_double(key, value);
  else if (key == "alpha2") config.alpha2 = detail::parse_double(key, value);
  else if (key == "xi2") config.xi2 = detail::parse_double(key, value);
  else if (key == "omega") config.omega = detail::parse_double(key, value);
  else if (key == "theta") config.theta_list = detail::parse_grid(key, value);
  else if (key == "omega_grid") config.omega_grid = detail::parse_grid(key, value);
  else if (key == "z_grid") config.z_grid = detail::parse_grid(key, value);
  else if (key == "mode") config.mode = parse_mode(value);
  else if (key == "out") config.out = value;
  else if (key == "tolerance") config.tolerance = detail::parse_double(key, value);
  else if (key == "threads") config.threads = detail::parse_int(key, value);
  else if (key == "corrupt_diffusion") config.corrupt_diffusion = detail::parse_double(key, value);
  else throw std::invalid_argument("unknown config key '" + key + "'");
}

// Parses "key=value" (used by --set and by config-file lines).
inline void apply_assignment(SweepConfig& config, const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("expected key=value, got '" + text + "'");
  apply_setting(config, detail::trim(text.substr(0, eq)), detail::trim(text.substr(eq + 1)));
}

// Loads a flat key=value config file ('#' starts a comment, blank lines ok).
inline void load_config_file(SweepConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    apply_assignment(config, line);
  }
}

inline void validate_config(const SweepConfig& config) {
  auto check_grid = [](const std::vector<double>& grid, const char* name) {
    if (grid.empty()) throw std::invalid_argument(std::string(name) + " must be nonempty");
    for (double v : grid)
      if (!std::isfinite(v)) throw std::invalid_argument(std::string(name) + " must be finite");
    for (size_t i = 1; i < grid.size(); ++i)
      if (!(grid[i] > grid[i - 1]))
        throw std::invalid_argument(std::string(name) + " must be strictly ascending");
  };
  check_grid(config.omega_grid, "omega_grid");
  check_grid(config.z_grid, "z_grid");
  if (config.z_grid.front() < 0.0) throw std::invalid_argument("z_grid must start at z >= 0");
  if (config.theta_list.empty()) throw std::invalid_argument("theta list must be nonempty");
  for (double t : config.theta_list)
    if (!std::isfinite(t)) throw std::invalid_argument("theta values must be finite");
  if (!(config.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (config.threads < 1) throw std::invalid_argument("threads must be >= 1");
  if (!std::isfinite(config.omega)) throw std::invalid_argument("omega must be finite");
}

namespace detail {

struct Problem {
  MediumParams<double> params;
  DriveState<double> drive;
  ClosedFormContext<double> ctx;
  MeanValues<double> means;
  FluctuationBlock<double> block;
};

inline Problem build_problem(const SweepConfig& config) {
  Problem p;
  p.params = make_medium(config.gamma1, config.gamma2, config.g1, config.g2, config.n_atoms,
                         config.gamma12);
  p.drive = build_drive(p.params, config.alpha1, config.alpha2, config.xi2,
                        config.theta_list.front());
  p.ctx = make_context(p.drive, p.params);
  p.means = stationary_means(p.params, p.drive);
  p.block = fluctuation_block(p.means, p.drive, p.params);
  if (config.corrupt_diffusion != 0.0) {
    p.block.diff(atom_index::sigma_1e, atom_index::sigma_e1) += config.corrupt_diffusion;
    p.block.diff(atom_index::sigma_e1, atom_index::sigma_1e) += config.corrupt_diffusion;
  }
  return p;
}

struct OmegaRows {
  std::string csv;
  double max_abs = 0.0;
  double sum_abs = 0.0;
  double max_rel = 0.0;
  double sum_rel = 0.0;
  size_t count = 0;
  double min_uncertainty = std::numeric_limits<double>::infinity();
  double eigen_rel_absorption = 0.0;
  double eigen_rel_oscillation = 0.0;
};

// All rows for one sideband frequency (display value omega_disp, in gamma).
inline OmegaRows sweep_one_omega(const SweepConfig& config, const Problem& p, double omega_disp) {
  OmegaRows rows;
  const bool want_numeric = config.mode != SweepMode::analytic;
  const bool want_analytic = config.mode != SweepMode::numeric;
  const double omega_internal = omega_disp * p.params.gamma;
  const double z_unit = z_display_unit(p.drive, p.params);
  constexpr double half_pi = std::numbers::pi_v<double> / 2;

  std::optional<CovarianceMap<double>> cov;
  if (want_numeric) {
    const FieldGenerator<double> gen = field_generator(p.block, p.drive, p.params, omega_internal);
    cov = propagate_covariance(input_covariance(p.drive), gen, config.z_grid,
                               config.theta_list.front());
    const EigenReport<double> rep = eigen_report(gen);
    const double absorb = p.params.gamma * resonance_p(omega_internal, 0.0, p.ctx);
    const double rotate = resonance_p(omega_internal, p.drive.omega_total, p.ctx) * omega_internal;
    rows.eigen_rel_absorption = absorb > 0.0 ? std::abs(rep.absorption_rate - absorb) / absorb
                                             : std::abs(rep.absorption_rate);
    rows.eigen_rel_oscillation = rotate > 0.0 ? std::abs(rep.oscillation_rate - rotate) / rotate
                                              : std::abs(rep.oscillation_rate);
  }

  std::string& csv = rows.csv;
  for (size_t iz = 0; iz < config.z_grid.size(); ++iz) {
    const double z_disp = config.z_grid[iz];
    const double z_internal = z_disp * z_unit;
    for (double theta : config.theta_list) {
      std::pair<double, double> analytic{0, 0};
      if (want_analytic) analytic = closed_form_spectra(z_internal, omega_internal, p.ctx, theta);
      for (int beam = 1; beam <= 2; ++beam) {
        double numeric = 0;
        if (want_numeric) {
          numeric = spectrum(cov->sigma[iz], theta, beam);
          const double conj_quad = spectrum(cov->sigma[iz], theta + half_pi, beam);
          rows.min_uncertainty = std::min(rows.min_uncertainty, numeric * conj_quad);
        }
        const double s_analytic = beam == 1 ? analytic.first : analytic.second;
        csv += format_value(omega_disp);
        csv += ',';
        csv += format_value(z_disp);
        csv += ',';
        csv += format_value(theta);
        csv += ',';
        csv += std::to_string(beam);
        csv += ',';
        if (want_analytic) csv += format_value(s_analytic);
        csv += ',';
        if (want_numeric) csv += format_value(numeric);
        csv += ',';
        if (want_analytic && want_numeric) {
          const double diff = std::abs(numeric - s_analytic);
          csv += format_value(diff);
          rows.max_abs = std::max(rows.max_abs, diff);
          rows.sum_abs += diff;
          const double rel = diff / std::max(1.0, std::abs(s_analytic));
          rows.max_rel = std::max(rows.max_rel, rel);
          rows.sum_rel += rel;
          ++rows.count;
        }
        csv += '\n';
      }
    }
  }
  return rows;
}

// Deterministic parallel map over the frequency grid.
inline std::vector<OmegaRows> sweep_all(const SweepConfig& config, const Problem& p) {
  const size_t n = config.omega_grid.size();
  std::vector<OmegaRows> results(n);
  const size_t workers =
      std::min<size_t>(static_cast<size_t>(config.threads), n > 0 ? n : size_t(1));
  if (workers <= 1) {
    for (size_t i = 0; i < n; ++i) results[i] = sweep_one_omega(config, p, config.omega_grid[i]);
    return results;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        results[i] = sweep_one_omega(config, p, config.omega_grid[i]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

}  // namespace detail

inline constexpr const char* sweep_header =
    "omega_over_gamma,z_C_over_gamma,theta,beam,s_analytic,s_numeric,abs_diff\n";

// Computes the full sweep table (header + rows, omega-major then z).
inline std::string sweep_table(const SweepConfig& config) {
  validate_config(config);
  const detail::Problem p = detail::build_problem(config);
  const std::vector<detail::OmegaRows> results = detail::sweep_all(config, p);
  std::string table = sweep_header;
  for (const auto& r : results) table += r.csv;
  return table;
}

// Writes the sweep table to config.out (or the fallback stream).  Returns 0.
inline int run_sweep(const SweepConfig& config, std::ostream& fallback) {
  const std::string table = sweep_table(config);
  if (config.out.empty()) {
    fallback << table;
    fallback.flush();
  } else {
    std::ofstream file(config.out, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output file '" + config.out + "'");
    file << table;
    if (!file) throw std::runtime_error("failed writing output file '" + config.out + "'");
  }
  return 0;
}

struct CompareReport {
  double max_abs = 0.0;
  double mean_abs = 0.0;
  double max_rel = 0.0;
  double mean_rel = 0.0;
  double eigen_max_rel_absorption = 0.0;
  double eigen_max_rel_oscillation = 0.0;
  double min_uncertainty = std::numeric_limits<double>::infinity();
  size_t points = 0;
  double tolerance = 0.0;
  bool pass = false;
};

// Analytic-vs-numeric deviation summary over the configured grid.
inline CompareReport compare_report(const SweepConfig& config, std::string* table = nullptr) {
  SweepConfig cfg = config;
  cfg.mode = SweepMode::compare;
  validate_config(cfg);
  const detail::Problem p = detail::build_problem(cfg);
  const std::vector<detail::OmegaRows> results = detail::sweep_all(cfg, p);
  CompareReport rep;
  rep.tolerance = cfg.tolerance;
  double sum_abs = 0.0, sum_rel = 0.0;
  if (table) *table = sweep_header;
  for (const auto& r : results) {
    rep.max_abs = std::max(rep.max_abs, r.max_abs);
    rep.max_rel = std::max(rep.max_rel, r.max_rel);
    rep.eigen_max_rel_absorption = std::max(rep.eigen_max_rel_absorption, r.eigen_rel_absorption);
    rep.eigen_max_rel_oscillation =
        std::max(rep.eigen_max_rel_oscillation, r.eigen_rel_oscillation);
    rep.min_uncertainty = std::min(rep.min_uncertainty, r.min_uncertainty);
    sum_abs += r.sum_abs;
    sum_rel += r.sum_rel;
    rep.points += r.count;
    if (table) *table += r.csv;
  }
  if (rep.points > 0) {
    rep.mean_abs = sum_abs / static_cast<double>(rep.points);
    rep.mean_rel = sum_rel / static_cast<double>(rep.points);
  }
  rep.pass = rep.max_rel <= rep.tolerance;
  return rep;
}

inline std::string format_report(const CompareReport& rep) {
  std::string out;
  out += "points                    " + std::to_string(rep.points) + "\n";
  out += "max_abs_deviation         " + detail::format_value(rep.max_abs) + "\n";
  out += "mean_abs_deviation        " + detail::format_value(rep.mean_abs) + "\n";
  out += "max_rel_deviation         " + detail::format_value(rep.max_rel) + "\n";
  out += "mean_rel_deviation        " + detail::format_value(rep.mean_rel) + "\n";
  out += "eigen_max_rel_absorption  " + detail::format_value(rep.eigen_max_rel_absorption) + "\n";
  out += "eigen_max_rel_oscillation " + detail::format_value(rep.eigen_max_rel_oscillation) + "\n";
  out += "min_uncertainty_product   " + detail::format_value(rep.min_uncertainty) + "\n";
  out += "tolerance                 " + detail::format_value(rep.tolerance) + "\n";
  out += std::string("verdict                   ") + (rep.pass ? "pass" : "fail") + "\n";
  return out;
}

// Length scales and response peaks at the configured single frequency,
// reported in display units (positions in gamma/C, frequencies in gamma).
inline std::string scales_report(const SweepConfig& config) {
  validate_config(config);
  const auto params = make_medium(config.gamma1, config.gamma2, config.g1, config.g2,
                                  config.n_atoms, config.gamma12);
  const auto drive =
      build_drive(params, config.alpha1, config.alpha2, config.xi2, config.theta_list.front());
  const auto ctx = make_context(drive, params);
  const double omega_internal = config.omega * params.gamma;
  const LengthScales<double> ls = length_scales(omega_internal, ctx);
  const auto peaks = peak_positions(ctx);
  const double to_display = ctx.c_prefactor / params.gamma;  // z -> z C / gamma
  std::string out;
  out += "omega_over_gamma          " + detail::format_value(config.omega) + "\n";
  out += "z_abs_C_over_gamma        " + detail::format_value(ls.z_abs * to_display) + "\n";
  out += "z_osc_C_over_gamma        " + detail::format_value(ls.z_osc * to_display) + "\n";
  out += "z_max_transfer_C_over_gamma " +
         detail::format_value(ls.z_max_transfer * to_display) + "\n";
  out += "mean_value_peak_over_gamma  " +
         detail::format_value(peaks.first / params.gamma) + "\n";
  out += "fluctuation_peak_over_gamma " +
         detail::format_value(peaks.second / params.gamma) + "\n";
  return out;
}

}  // namespace eit
