// Command-line front end: every pipeline is a subcommand writing CSV data
// files plus a JSON manifest with checksums, suitable for external
// plotting and exact re-runs.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "output.hpp"
#include "spinthermal/ensemble.hpp"
#include "spinthermal/entanglement.hpp"
#include "spinthermal/hamiltonians.hpp"
#include "spinthermal/prng.hpp"
#include "spinthermal/thermal.hpp"
#include "spinthermal/version.hpp"

namespace {

using namespace spinthermal;
using cli::ConfigEcho;
using cli::CsvFile;
using cli::format_bool;
using cli::format_double;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [parsed, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || parsed != end) {
    throw UsageError("cannot parse number '" + text + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& text, char delim) {
  std::vector<std::string> parts;
  std::string::size_type begin = 0;
  while (begin <= text.size()) {
    const auto pos = text.find(delim, begin);
    parts.push_back(text.substr(begin, pos - begin));
    if (pos == std::string::npos) break;
    begin = pos + 1;
  }
  return parts;
}

// Tokens hold comma-separated pieces; each piece is a bare number or an
// inclusive "a:b:step" sweep. A descending sweep is empty, not an error
// by itself; commands reject empty grids.
std::vector<double> expand_range(const std::vector<std::string>& tokens) {
  std::vector<double> values;
  for (const auto& token : tokens) {
    for (const auto& piece : split(token, ',')) {
      const auto parts = split(piece, ':');
      if (parts.size() == 1) {
        values.push_back(parse_double(parts[0]));
        continue;
      }
      if (parts.size() != 3) {
        throw UsageError("range must be start:stop:step, got '" + piece + "'");
      }
      const double start = parse_double(parts[0]);
      const double stop = parse_double(parts[1]);
      const double step = parse_double(parts[2]);
      if (!(step > 0.0)) {
        throw UsageError("range step must be positive in '" + piece + "'");
      }
      const double span = (stop - start) / step + 1e-9;
      if (span < 0.0) continue;
      for (int k = 0; k <= static_cast<int>(span); ++k) {
        values.push_back(start + k * step);
      }
    }
  }
  return values;
}

std::vector<int> expand_int_range(const std::vector<std::string>& tokens) {
  std::vector<int> values;
  for (double v : expand_range(tokens)) {
    values.push_back(static_cast<int>(std::lround(v)));
  }
  return values;
}

int max_sites_from_env() {
  if (const char* raw = std::getenv("SPINTHERMAL_MAX_L")) {
    const int value = std::atoi(raw);
    if (value < 2 || value > kDefaultMaxSites) {
      throw UsageError("SPINTHERMAL_MAX_L must lie in [2, 16]");
    }
    return value;
  }
  return kDefaultMaxSites;
}

std::uint64_t random_seed() {
  std::random_device device;
  return (static_cast<std::uint64_t>(device()) << 32) ^ device();
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

std::string join(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  return n % 2 == 1 ? values[n / 2]
                    : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::filesystem::path prepare_out_dir(const std::string& out) {
  std::filesystem::path dir(out);
  std::filesystem::create_directories(dir);
  return dir;
}

// Flags shared by the chain-based commands.
struct RunFlags {
  int sites = 12;
  double gamma = 0.4;
  double J = 1.0;
  std::vector<std::string> lambda_tokens;
  std::vector<std::string> beta_tokens;
  int realizations = 0;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int threads = 1;
  std::vector<int> pair;
  std::string out = ".";
};

void add_run_flags(CLI::App* cmd, RunFlags& flags, int default_realizations,
                   const std::string& default_lambdas,
                   const std::string& default_betas) {
  flags.realizations = default_realizations;
  flags.lambda_tokens = {default_lambdas};
  flags.beta_tokens = {default_betas};
  cmd->add_option("--L", flags.sites, "chain length")
      ->capture_default_str();
  cmd->add_option("--gamma", flags.gamma, "z-anisotropy gamma")
      ->capture_default_str();
  cmd->add_option("--J", flags.J, "coupling constant")->capture_default_str();
  cmd->add_option("--lambda", flags.lambda_tokens,
                  "disorder intensity (repeatable, or a:b:step)")
      ->capture_default_str();
  cmd->add_option("--beta", flags.beta_tokens,
                  "inverse temperature (repeatable, or a:b:step)")
      ->capture_default_str();
  if (default_realizations > 0) {
    cmd->add_option("--realizations", flags.realizations,
                    "disorder realizations per lambda")
        ->capture_default_str();
  }
  cmd->add_option("--seed", flags.seed, "master seed (default: random)")
      ->each([&flags](const std::string&) { flags.seed_given = true; });
  cmd->add_option("--threads", flags.threads, "worker threads")
      ->capture_default_str();
  cmd->add_option("--pair", flags.pair,
                  "explicit pair sites i j (default: middle pair)")
      ->expected(2);
  cmd->add_option("--out", flags.out, "output directory")
      ->capture_default_str();
}

EnsembleConfig make_config(RunFlags& flags) {
  if (!flags.seed_given) flags.seed = random_seed();
  EnsembleConfig config;
  config.sites = flags.sites;
  config.gamma = flags.gamma;
  config.J = flags.J;
  config.lambdas = expand_range(flags.lambda_tokens);
  config.betas = expand_range(flags.beta_tokens);
  config.realizations = flags.realizations > 0 ? flags.realizations : 1;
  config.master_seed = flags.seed;
  if (!flags.pair.empty()) {
    config.pair_sites = std::pair<int, int>{flags.pair[0], flags.pair[1]};
  }
  config.max_sites = max_sites_from_env();
  config.threads = flags.threads;
  if (config.betas.empty()) throw UsageError("beta grid is empty");
  if (config.lambdas.empty()) throw UsageError("lambda list is empty");
  config.validate();
  return config;
}

ConfigEcho echo_config(const EnsembleConfig& config, bool with_realizations) {
  ConfigEcho echo;
  echo.emplace_back("prng", kPrngVersion);
  echo.emplace_back("L", std::to_string(config.sites));
  echo.emplace_back("gamma", format_double(config.gamma));
  echo.emplace_back("J", format_double(config.J));
  echo.emplace_back("lambda", join(config.lambdas));
  echo.emplace_back("beta", join(config.betas));
  if (with_realizations) {
    echo.emplace_back("realizations", std::to_string(config.realizations));
  }
  echo.emplace_back("seed", std::to_string(config.master_seed));
  const auto pair =
      config.pair_sites.value_or(centered_pair(config.sites, 0));
  echo.emplace_back("pair",
                    std::to_string(pair.first) + "," +
                        std::to_string(pair.second));
  echo.emplace_back("max_L", std::to_string(config.max_sites));
  return echo;
}

// ---------------------------------------------------------------------------

int cmd_two_spin(double gamma, double j, double h_sum,
                 const std::vector<std::string>& dh_tokens,
                 const std::vector<std::string>& beta_tokens,
                 const std::string& out) {
  const std::vector<double> dhs = expand_range(dh_tokens);
  const std::vector<double> betas = expand_range(beta_tokens);
  if (dhs.empty()) throw UsageError("field grid is empty");
  if (betas.empty()) throw UsageError("beta grid is empty");
  if (j == 0.0) throw UsageError("J must be nonzero");

  ConfigEcho echo;
  echo.emplace_back("gamma", format_double(gamma));
  echo.emplace_back("J", format_double(j));
  echo.emplace_back("hsum", format_double(h_sum));
  echo.emplace_back("dh", join(dhs));
  echo.emplace_back("beta", join(betas));

  const auto dir = prepare_out_dir(out);
  CsvFile csv(dir / "two_spin.csv", echo,
              {"delta_h", "beta", "concurrence", "eof"});
  for (const auto& p : two_spin_phase_map(gamma, h_sum, j, dhs, betas)) {
    csv.add_row({format_double(p.delta_h), format_double(p.beta),
                 format_double(p.concurrence), format_double(p.eof_value)});
  }
  csv.write();
  cli::write_manifest(dir, "two-spin", echo, 1, {csv.path()});
  return 0;
}

int cmd_threshold(const std::vector<double>& gammas,
                  const std::vector<std::string>& dh_tokens, double h_sum,
                  double j, const std::string& out) {
  const std::vector<double> dhs = expand_range(dh_tokens);
  if (gammas.empty() || dhs.empty()) throw UsageError("empty parameter grid");
  if (j == 0.0) throw UsageError("J must be nonzero");

  ConfigEcho echo;
  echo.emplace_back("gamma", join(gammas));
  echo.emplace_back("dh", join(dhs));
  echo.emplace_back("hsum", format_double(h_sum));
  echo.emplace_back("J", format_double(j));

  const auto dir = prepare_out_dir(out);
  CsvFile csv(dir / "threshold.csv", echo,
              {"gamma", "delta_h", "h_sum", "J", "status", "beta_c",
               "residual", "beta_delta_e_c", "beta_c_times_delta_e",
               "consistent"});
  for (double gamma : gammas) {
    for (double dh : dhs) {
      PairSpec spec{j, gamma, 0.5 * (h_sum + j * dh), 0.5 * (h_sum - j * dh)};
      std::string status, beta_c, residual;
      try {
        const ThresholdResult r = threshold_beta(spec);
        if (r.kind == ThresholdResult::Kind::Finite) {
          status = "finite";
          beta_c = format_double(r.beta_c);
        } else {
          status = "none";
        }
        residual = format_double(r.residual);
      } catch (const IndeterminateThresholdError&) {
        status = "indeterminate";
      }
      std::string x, cross, consistent;
      if (h_sum == 0.0) {
        const DeltaEThresholdResult r = threshold_beta_delta_e(gamma, dh);
        if (r.root.kind == ThresholdResult::Kind::Finite) {
          x = format_double(r.root.beta_c);
          cross = format_double(r.beta_c_times_delta_e);
        }
        consistent = format_bool(r.consistent);
      }
      csv.add_row({format_double(gamma), format_double(dh),
                   format_double(h_sum), format_double(j), status, beta_c,
                   residual, x, cross, consistent});
    }
  }
  csv.write();
  cli::write_manifest(dir, "threshold", echo, 1, {csv.path()});
  return 0;
}

int cmd_chain(RunFlags& flags) {
  EnsembleConfig config = make_config(flags);
  ConfigEcho echo = echo_config(config, false);
  echo.emplace_back("fields", join(sample_disorder(
                                  derive_seed(config.master_seed, 0),
                                  config.sites)));

  const auto dir = prepare_out_dir(flags.out);
  CsvFile csv(dir / "chain.csv", echo,
              {"lambda", "beta", "seed", "e0", "emax", "einf", "ebar",
               "energy_norm", "purity", "concurrence", "eof"});
  for (double lambda : config.lambdas) {
    RealizationTask task;
    task.sites = config.sites;
    task.gamma = config.gamma;
    task.J = config.J;
    task.lambda = lambda;
    task.betas = config.betas;
    task.pair = config.pair_sites.value_or(std::pair<int, int>{0, 0});
    task.max_sites = config.max_sites;
    task.diag_threads = config.threads;
    const std::uint64_t seed = derive_seed(config.master_seed, 0);
    const RealizationRecord record = run_realization(task, seed);
    for (const auto& point : record.points) {
      csv.add_row({format_double(lambda), format_double(point.beta),
                   std::to_string(seed), format_double(point.e0),
                   format_double(point.emax), format_double(point.einf),
                   format_double(point.ebar),
                   format_double(point.energy_norm),
                   format_double(point.purity),
                   format_double(point.concurrence),
                   format_double(point.eof_value)});
    }
  }
  csv.write();
  cli::write_manifest(dir, "chain", echo, config.threads, {csv.path()});
  return 0;
}

void report_failures(const EnsembleResult& result) {
  for (const auto& outcome : result.outcomes) {
    if (!outcome.record) {
      std::cerr << "warning: " << outcome.error << "\n";
    }
  }
}

int cmd_fit(RunFlags& flags, FitConfig fit) {
  EnsembleConfig config = make_config(flags);
  config.fit_enabled = true;
  config.fit = fit;
  ConfigEcho echo = echo_config(config, true);
  echo.emplace_back("grid", format_double(fit.grid_lo) + ":" +
                                format_double(fit.grid_hi) + ":" +
                                format_double(fit.grid_step));

  const EnsembleResult result = run_ensemble(config);
  report_failures(result);

  const auto dir = prepare_out_dir(flags.out);
  CsvFile rows(dir / "fit_realizations.csv", echo,
               {"lambda", "realization", "seed", "beta", "d_unfitted",
                "d_fitted", "alpha1", "alpha2", "iterations", "converged"});
  for (const auto& outcome : result.outcomes) {
    if (!outcome.record) continue;
    for (const auto& point : outcome.record->points) {
      const FitResult& fitted = *point.fit;
      rows.add_row({format_double(outcome.lambda),
                    std::to_string(outcome.index),
                    std::to_string(outcome.seed), format_double(point.beta),
                    format_double(fitted.d_unfitted),
                    format_double(fitted.d_fitted),
                    format_double(fitted.alpha1), format_double(fitted.alpha2),
                    std::to_string(fitted.iterations),
                    format_bool(fitted.converged)});
    }
  }
  rows.write();

  CsvFile stats(dir / "fit_stats.csv", echo,
                {"lambda", "beta", "count", "median_d_unfitted",
                 "median_d_fitted", "mean_d_unfitted", "mean_d_fitted"});
  for (double lambda : config.lambdas) {
    for (std::size_t bi = 0; bi < config.betas.size(); ++bi) {
      std::vector<double> unfitted, fitted;
      for (const auto& outcome : result.outcomes) {
        if (!outcome.record || outcome.lambda != lambda) continue;
        unfitted.push_back(outcome.record->points[bi].fit->d_unfitted);
        fitted.push_back(outcome.record->points[bi].fit->d_fitted);
      }
      const double n = static_cast<double>(unfitted.size());
      const double mean_unfitted =
          n > 0 ? std::accumulate(unfitted.begin(), unfitted.end(), 0.0) / n
                : 0.0;
      const double mean_fitted =
          n > 0 ? std::accumulate(fitted.begin(), fitted.end(), 0.0) / n : 0.0;
      stats.add_row({format_double(lambda), format_double(config.betas[bi]),
                     std::to_string(unfitted.size()),
                     format_double(median(unfitted)),
                     format_double(median(fitted)),
                     format_double(mean_unfitted),
                     format_double(mean_fitted)});
    }
  }
  stats.write();
  cli::write_manifest(dir, "fit", echo, config.threads,
                      {rows.path(), stats.path()});
  return 0;
}

int cmd_ensemble(RunFlags& flags) {
  const EnsembleConfig config = make_config(flags);
  const ConfigEcho echo = echo_config(config, true);

  const EnsembleResult result = run_ensemble(config);
  report_failures(result);

  const auto dir = prepare_out_dir(flags.out);
  CsvFile stats(dir / "ensemble_stats.csv", echo,
                {"lambda", "beta", "count", "mean_concurrence", "mean_eof",
                 "var_eof", "stderr_eof", "mean_energy_norm", "mean_purity"});
  for (const auto& cell : result.stats) {
    stats.add_row({format_double(cell.lambda), format_double(cell.beta),
                   std::to_string(cell.count),
                   format_double(cell.mean_concurrence),
                   format_double(cell.mean_eof), format_double(cell.var_eof),
                   format_double(cell.stderr_eof),
                   format_double(cell.mean_energy_norm),
                   format_double(cell.mean_purity)});
  }
  stats.write();

  CsvFile rows(dir / "ensemble_realizations.csv", echo,
               {"lambda", "realization", "seed", "beta", "concurrence", "eof",
                "ebar", "energy_norm", "purity"});
  for (const auto& outcome : result.outcomes) {
    if (!outcome.record) continue;
    for (const auto& point : outcome.record->points) {
      rows.add_row({format_double(outcome.lambda),
                    std::to_string(outcome.index),
                    std::to_string(outcome.seed), format_double(point.beta),
                    format_double(point.concurrence),
                    format_double(point.eof_value), format_double(point.ebar),
                    format_double(point.energy_norm),
                    format_double(point.purity)});
    }
  }
  rows.write();

  std::vector<std::string> field_columns = {"lambda", "realization", "seed"};
  for (int i = 1; i <= config.sites; ++i) {
    field_columns.push_back("h" + std::to_string(i));
  }
  CsvFile fields(dir / "ensemble_fields.csv", echo, field_columns);
  for (const auto& outcome : result.outcomes) {
    if (!outcome.record) continue;
    std::vector<std::string> cells = {format_double(outcome.lambda),
                                      std::to_string(outcome.index),
                                      std::to_string(outcome.seed)};
    for (double h : outcome.record->fields) cells.push_back(format_double(h));
    fields.add_row(cells);
  }
  fields.write();

  cli::write_manifest(dir, "ensemble", echo, config.threads,
                      {stats.path(), rows.path(), fields.path()});
  return 0;
}

int cmd_distance(RunFlags& flags, const std::vector<std::string>& sep_tokens) {
  EnsembleConfig config = make_config(flags);
  config.separations = expand_int_range(sep_tokens);
  if (config.separations.empty()) throw UsageError("separation list is empty");
  config.validate();

  ConfigEcho echo = echo_config(config, true);
  echo.emplace_back("separations", join(config.separations));

  const DistanceSweepResult sweep = distance_sweep(config);
  report_failures(sweep.ensemble);

  const auto dir = prepare_out_dir(flags.out);
  CsvFile stats(dir / "distance_stats.csv", echo,
                {"lambda", "beta", "separation", "count", "mean_concurrence",
                 "mean_eof", "var_eof", "stderr_eof"});
  for (const auto& cell : sweep.ensemble.stats) {
    if (cell.separation < 0) continue;
    stats.add_row({format_double(cell.lambda), format_double(cell.beta),
                   std::to_string(cell.separation), std::to_string(cell.count),
                   format_double(cell.mean_concurrence),
                   format_double(cell.mean_eof), format_double(cell.var_eof),
                   format_double(cell.stderr_eof)});
  }
  stats.write();

  CsvFile nstar(dir / "distance_nstar.csv", echo,
                {"lambda", "beta", "n_star"});
  for (const auto& entry : sweep.vanishing) {
    nstar.add_row({format_double(entry.lambda), format_double(entry.beta),
                   entry.n_star >= 0 ? std::to_string(entry.n_star)
                                     : std::string()});
  }
  nstar.write();

  CsvFile rows(dir / "distance_realizations.csv", echo,
               {"lambda", "realization", "seed", "beta", "separation",
                "concurrence", "eof"});
  for (const auto& outcome : sweep.ensemble.outcomes) {
    if (!outcome.record) continue;
    for (const auto& point : outcome.record->points) {
      for (std::size_t s = 0; s < config.separations.size(); ++s) {
        rows.add_row({format_double(outcome.lambda),
                      std::to_string(outcome.index),
                      std::to_string(outcome.seed), format_double(point.beta),
                      std::to_string(config.separations[s]),
                      format_double(point.concurrence_by_separation[s]),
                      format_double(point.eof_by_separation[s])});
      }
    }
  }
  rows.write();

  cli::write_manifest(dir, "distance", echo, config.threads,
                      {stats.path(), nstar.path(), rows.path()});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal pair entanglement in disordered XXZ chains"};
  app.set_config("--config", "", "read options from an INI file");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  // two-spin
  double ts_gamma = 0.4, ts_j = 1.0, ts_hsum = 0.0;
  std::vector<std::string> ts_dh = {"0:3:0.1"};
  std::vector<std::string> ts_beta;
  std::string ts_out = ".";
  auto* two_spin = app.add_subcommand(
      "two-spin", "closed-form pair entanglement over a (field, beta) grid");
  two_spin->add_option("--gamma", ts_gamma)->capture_default_str();
  two_spin->add_option("--J", ts_j)->capture_default_str();
  two_spin->add_option("--hsum", ts_hsum, "h1 + h2")->capture_default_str();
  two_spin->add_option("--dh", ts_dh, "detuning grid (a:b:step or values)")
      ->capture_default_str();
  two_spin->add_option("--beta", ts_beta, "beta grid (a:b:step or values)")
      ->required();
  two_spin->add_option("--out", ts_out)->capture_default_str();

  // threshold
  std::vector<double> th_gammas = {1.0};
  std::vector<std::string> th_dh = {"0"};
  double th_hsum = 0.0, th_j = 1.0;
  std::string th_out = ".";
  auto* threshold = app.add_subcommand(
      "threshold", "entanglement threshold temperatures per parameter row");
  threshold->add_option("--gamma", th_gammas)->capture_default_str();
  threshold->add_option("--dh", th_dh)->capture_default_str();
  threshold->add_option("--hsum", th_hsum)->capture_default_str();
  threshold->add_option("--J", th_j)->capture_default_str();
  threshold->add_option("--out", th_out)->capture_default_str();

  // chain / fit / ensemble / distance
  RunFlags chain_flags, fit_flags, ensemble_flags, distance_flags;
  auto* chain = app.add_subcommand(
      "chain", "single-realization chain diagnostics per (lambda, beta)");
  add_run_flags(chain, chain_flags, 0, "1", "0.2,1,5");

  auto* fit = app.add_subcommand(
      "fit", "fit the corrected pair Hamiltonian to induced states");
  add_run_flags(fit, fit_flags, 20, "0.3,4", "0.2,1,5");
  FitConfig fit_config;
  fit->add_option("--grid-lo", fit_config.grid_lo)->capture_default_str();
  fit->add_option("--grid-hi", fit_config.grid_hi)->capture_default_str();
  fit->add_option("--grid-step", fit_config.grid_step)->capture_default_str();

  auto* ensemble = app.add_subcommand(
      "ensemble", "disorder-averaged entanglement statistics");
  add_run_flags(ensemble, ensemble_flags, 200, "0.5,4", "0.2,1,5");

  auto* distance = app.add_subcommand(
      "distance", "entanglement decay with pair separation");
  add_run_flags(distance, distance_flags, 200, "4", "1,2,5");
  std::vector<std::string> sep_tokens = {"0:5:1"};
  distance->add_option("--sep", sep_tokens,
                       "separations (a:b:step or values)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (two_spin->parsed()) {
      return cmd_two_spin(ts_gamma, ts_j, ts_hsum, ts_dh, ts_beta, ts_out);
    }
    if (threshold->parsed()) {
      return cmd_threshold(th_gammas, th_dh, th_hsum, th_j, th_out);
    }
    if (chain->parsed()) return cmd_chain(chain_flags);
    if (fit->parsed()) return cmd_fit(fit_flags, fit_config);
    if (ensemble->parsed()) return cmd_ensemble(ensemble_flags);
    if (distance->parsed()) return cmd_distance(distance_flags, sep_tokens);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceLimitError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
