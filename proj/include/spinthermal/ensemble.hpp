#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinthermal/effective_fit.hpp"
#include "spinthermal/types.hpp"

namespace spinthermal {

/// One disorder-averaged experiment: chain geometry, disorder intensities,
/// temperatures, realization count and seeding. Separations are the number
/// of spins between the traced-out pair (0 = adjacent).
struct EnsembleConfig {
  int sites = 12;
  double gamma = 0.4;
  double J = 1.0;
  std::vector<double> lambdas = {0.5};
  std::vector<double> betas = {1.0};
  int realizations = 200;
  std::uint64_t master_seed = 1;
  std::optional<std::pair<int, int>> pair_sites;  // 1-based; default centered
  std::vector<int> separations;                   // empty = adjacent pair only
  bool fit_enabled = false;
  FitConfig fit;
  int max_sites = kDefaultMaxSites;
  int threads = 1;

  void validate() const;
};

/// Pair placement for separation n, centered in the chain:
/// (ceil((L - n) / 2), ceil((L - n) / 2) + n + 1).
std::pair<int, int> centered_pair(int sites, int separation);

/// L i.i.d. uniform [-1, 1] fields from the named Philox stream; identical
/// on every platform for a given seed.
std::vector<double> sample_disorder(std::uint64_t seed, int sites);

/// Per-temperature observables of one realization.
struct BetaPoint {
  double beta = 0.0;
  double concurrence = 0.0;
  double eof_value = 0.0;
  double e0 = 0.0, emax = 0.0, einf = 0.0, ebar = 0.0;  // chain spectrum
  double energy_norm = 0.0;   // ebar / (einf - e0)
  double purity = 0.0;        // induced-state purity
  std::optional<FitResult> fit;
  std::vector<double> concurrence_by_separation;  // aligned with separations
  std::vector<double> eof_by_separation;
};

struct RealizationRecord {
  std::uint64_t seed = 0;
  std::vector<double> fields;
  std::vector<BetaPoint> points;  // aligned with the beta list
};

/// Single-(lambda) realization task; everything run_realization needs.
struct RealizationTask {
  int sites = 12;
  double gamma = 0.4;
  double J = 1.0;
  double lambda = 0.0;
  std::vector<double> betas;
  std::pair<int, int> pair = {0, 0};   // 0 = use centered placement
  std::vector<int> separations;
  bool fit_enabled = false;
  FitConfig fit;
  int max_sites = kDefaultMaxSites;
  int diag_threads = 1;   // sector-level workers; ensembles keep this at 1
};

/// Builds the chain from (task, seed), diagonalizes once, and evaluates
/// every beta (and separation) point. Bit-identical given the same inputs.
RealizationRecord run_realization(const RealizationTask& task,
                                  std::uint64_t seed);

/// Disorder-averaged cell. n = -1 marks the configured pair (no separation
/// sweep); variance is the population variance across realizations.
struct CellStats {
  double lambda = 0.0;
  double beta = 0.0;
  int separation = -1;
  int count = 0;
  double mean_concurrence = 0.0;
  double mean_eof = 0.0;
  double var_eof = 0.0;
  double stderr_eof = 0.0;
  double mean_energy_norm = 0.0;
  double mean_purity = 0.0;
};

struct RealizationOutcome {
  int index = -1;
  double lambda = 0.0;
  std::uint64_t seed = 0;
  std::optional<RealizationRecord> record;  // empty on failure
  std::string error;
};

struct EnsembleResult {
  std::vector<RealizationOutcome> outcomes;  // lambda-major, then index
  std::vector<CellStats> stats;              // lambda-major, beta, separation
};

/// Runs realizations (possibly on several workers), then aggregates in
/// realization order so the statistics are independent of scheduling.
/// Failures are collected per realization; stats cover the successes.
EnsembleResult run_ensemble(const EnsembleConfig& config);

/// Smallest separation from which the mean entanglement stays exactly zero.
struct VanishingSeparation {
  double lambda = 0.0;
  double beta = 0.0;
  int n_star = -1;   // -1 = no such separation within the sweep
};

/// Separation sweep: run_ensemble over config.separations plus the
/// vanishing-separation summary per (lambda, beta).
struct DistanceSweepResult {
  EnsembleResult ensemble;
  std::vector<VanishingSeparation> vanishing;
};

DistanceSweepResult distance_sweep(const EnsembleConfig& config);

/// Closed-form pair entanglement over a (detuning, beta) grid at fixed
/// gamma and field sum.
struct PhaseMapPoint {
  double delta_h = 0.0;
  double beta = 0.0;
  double concurrence = 0.0;
  double eof_value = 0.0;
};

std::vector<PhaseMapPoint> two_spin_phase_map(double gamma, double h_sum,
                                              double J,
                                              const std::vector<double>& delta_hs,
                                              const std::vector<double>& betas);

}  // namespace spinthermal
