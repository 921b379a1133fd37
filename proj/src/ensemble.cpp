#include "spinthermal/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "spinthermal/entanglement.hpp"
#include "spinthermal/hamiltonians.hpp"
#include "spinthermal/parallel.hpp"
#include "spinthermal/prng.hpp"
#include "spinthermal/thermal.hpp"

namespace spinthermal {

namespace {

// Concurrence below this is treated as an exact zero so separability
// statements stay crisp.
constexpr double kZeroConcurrence = 1e-12;

double eof_of(double concurrence) {
  return concurrence < kZeroConcurrence ? 0.0 : eof(concurrence);
}

}  // namespace

std::pair<int, int> centered_pair(int sites, int separation) {
  const int left = (sites - separation + 1) / 2;  // ceil((L - n) / 2)
  return {left, left + separation + 1};
}

void EnsembleConfig::validate() const {
  if (sites < 2 || sites > max_sites) {
    throw ResourceLimitError("site count outside the configured limit");
  }
  if (realizations < 1) throw ValidationError("need at least one realization");
  if (lambdas.empty()) throw ValidationError("lambda list is empty");
  for (double l : lambdas) {
    if (!(l >= 0.0) || !std::isfinite(l)) {
      throw ValidationError("lambda must be finite and >= 0");
    }
  }
  if (betas.empty()) throw ValidationError("beta list is empty");
  for (double b : betas) {
    if (std::isnan(b) || b < 0.0) throw ValidationError("beta must be >= 0");
  }
  auto check_pair = [&](std::pair<int, int> p) {
    if (p.first < 1 || p.second <= p.first || p.second > sites) {
      throw ValidationError("pair sites must satisfy 1 <= i < j <= L");
    }
  };
  if (pair_sites) check_pair(*pair_sites);
  for (int n : separations) {
    if (n < 0) throw ValidationError("separation must be >= 0");
    check_pair(centered_pair(sites, n));
  }
  if (fit_enabled) fit.validate();
  if (threads < 1) throw ValidationError("threads must be >= 1");
}

std::vector<double> sample_disorder(std::uint64_t seed, int sites) {
  if (sites < 2) throw ValidationError("chain needs at least 2 sites");
  PhiloxRng rng(seed);
  std::vector<double> fields(sites);
  for (double& h : fields) h = rng.next_symmetric();
  return fields;
}

RealizationRecord run_realization(const RealizationTask& task,
                                  std::uint64_t seed) {
  RealizationRecord record;
  record.seed = seed;
  record.fields = sample_disorder(seed, task.sites);

  ChainSpec chain;
  chain.sites = task.sites;
  chain.J = task.J;
  chain.gamma = task.gamma;
  chain.lambda = task.lambda;
  chain.fields = record.fields;

  const SpectralDecomposition decomp =
      diagonalize(chain_hamiltonian(chain, task.max_sites), task.diag_threads);
  const std::pair<int, int> pair =
      task.pair.first > 0 ? task.pair : centered_pair(task.sites, 0);

  record.points.reserve(task.betas.size());
  for (double beta : task.betas) {
    BetaPoint point;
    point.beta = beta;

    const EnergyScales scales = energy_scales(decomp, beta);
    point.e0 = scales.e0;
    point.emax = scales.emax;
    point.einf = scales.einf;
    point.ebar = scales.ebar;
    point.energy_norm = scales.ebar / (scales.einf - scales.e0);

    const DensityMatrix4 induced =
        partial_trace_pair(decomp, beta, pair.first, pair.second);
    point.purity = purity(induced);
    point.concurrence = concurrence(induced).concurrence;
    point.eof_value = eof_of(point.concurrence);

    if (task.fit_enabled) {
      PairSpec base;
      base.J = task.J;
      base.gamma = task.gamma;
      base.h1 = task.lambda * record.fields[pair.first - 1];
      base.h2 = task.lambda * record.fields[pair.second - 1];
      point.fit = fit_alphas(induced, base, beta, task.fit);
    }

    for (int n : task.separations) {
      const auto [i, j] = centered_pair(task.sites, n);
      const DensityMatrix4 rho = partial_trace_pair(decomp, beta, i, j);
      const double c = concurrence(rho).concurrence;
      point.concurrence_by_separation.push_back(c);
      point.eof_by_separation.push_back(eof_of(c));
    }
    record.points.push_back(std::move(point));
  }
  return record;
}

namespace {

struct Accumulator {
  int count = 0;
  double sum_c = 0.0, sum_e = 0.0, sum_e2 = 0.0;
  double sum_energy = 0.0, sum_purity = 0.0;

  void add(double c, double e, double energy_norm, double purity_value) {
    ++count;
    sum_c += c;
    sum_e += e;
    sum_e2 += e * e;
    sum_energy += energy_norm;
    sum_purity += purity_value;
  }

  CellStats finish(double lambda, double beta, int separation) const {
    CellStats cell;
    cell.lambda = lambda;
    cell.beta = beta;
    cell.separation = separation;
    cell.count = count;
    if (count > 0) {
      const double n = count;
      cell.mean_concurrence = sum_c / n;
      cell.mean_eof = sum_e / n;
      // Population variance, clipped against rounding.
      cell.var_eof =
          std::max(0.0, sum_e2 / n - (sum_e / n) * (sum_e / n));
      cell.stderr_eof = std::sqrt(cell.var_eof / n);
      cell.mean_energy_norm = sum_energy / n;
      cell.mean_purity = sum_purity / n;
    }
    return cell;
  }
};

}  // namespace

EnsembleResult run_ensemble(const EnsembleConfig& config) {
  config.validate();
  const std::size_t per_lambda = config.realizations;
  const std::size_t total = config.lambdas.size() * per_lambda;

  EnsembleResult result;
  result.outcomes.resize(total);

  parallel_for_index(total, config.threads, [&](std::size_t flat) {
    const std::size_t lambda_index = flat / per_lambda;
    const std::size_t realization = flat % per_lambda;

    RealizationTask task;
    task.sites = config.sites;
    task.gamma = config.gamma;
    task.J = config.J;
    task.lambda = config.lambdas[lambda_index];
    task.betas = config.betas;
    task.pair = config.pair_sites.value_or(std::pair<int, int>{0, 0});
    task.separations = config.separations;
    task.fit_enabled = config.fit_enabled;
    task.fit = config.fit;
    task.max_sites = config.max_sites;

    RealizationOutcome& outcome = result.outcomes[flat];
    outcome.index = static_cast<int>(realization);
    outcome.lambda = task.lambda;
    outcome.seed = derive_seed(config.master_seed, realization);
    try {
      outcome.record = run_realization(task, outcome.seed);
    } catch (const std::exception& e) {
      outcome.error = "realization " + std::to_string(realization) +
                      " (seed " + std::to_string(outcome.seed) +
                      "): " + e.what();
    }
  });

  // Aggregate in (lambda, beta, separation) order over realization index;
  // the result is independent of how the workers were scheduled.
  for (std::size_t li = 0; li < config.lambdas.size(); ++li) {
    for (std::size_t bi = 0; bi < config.betas.size(); ++bi) {
      Accumulator direct;
      std::vector<Accumulator> by_sep(config.separations.size());
      for (std::size_t r = 0; r < per_lambda; ++r) {
        const auto& outcome = result.outcomes[li * per_lambda + r];
        if (!outcome.record) continue;
        const BetaPoint& point = outcome.record->points[bi];
        direct.add(point.concurrence, point.eof_value, point.energy_norm,
                   point.purity);
        for (std::size_t s = 0; s < config.separations.size(); ++s) {
          by_sep[s].add(point.concurrence_by_separation[s],
                        point.eof_by_separation[s], point.energy_norm,
                        point.purity);
        }
      }
      result.stats.push_back(
          direct.finish(config.lambdas[li], config.betas[bi], -1));
      for (std::size_t s = 0; s < config.separations.size(); ++s) {
        result.stats.push_back(by_sep[s].finish(
            config.lambdas[li], config.betas[bi], config.separations[s]));
      }
    }
  }
  return result;
}

DistanceSweepResult distance_sweep(const EnsembleConfig& config) {
  if (config.separations.empty()) {
    throw ValidationError("distance sweep needs a separation list");
  }
  DistanceSweepResult result;
  result.ensemble = run_ensemble(config);

  // Largest separation from which the mean entanglement stays exactly zero
  // for every larger separation in the sweep.
  std::vector<int> sorted_seps = config.separations;
  std::sort(sorted_seps.begin(), sorted_seps.end());
  for (double lambda : config.lambdas) {
    for (double beta : config.betas) {
      VanishingSeparation entry;
      entry.lambda = lambda;
      entry.beta = beta;
      for (auto it = sorted_seps.rbegin(); it != sorted_seps.rend(); ++it) {
        const auto cell = std::find_if(
            result.ensemble.stats.begin(), result.ensemble.stats.end(),
            [&](const CellStats& c) {
              return c.lambda == lambda && c.beta == beta &&
                     c.separation == *it;
            });
        if (cell == result.ensemble.stats.end() || cell->mean_eof > 0.0) break;
        entry.n_star = *it;
      }
      result.vanishing.push_back(entry);
    }
  }
  return result;
}

std::vector<PhaseMapPoint> two_spin_phase_map(
    double gamma, double h_sum, double J, const std::vector<double>& delta_hs,
    const std::vector<double>& betas) {
  if (J == 0.0) throw std::domain_error("phase map requires J != 0");
  std::vector<PhaseMapPoint> points;
  points.reserve(delta_hs.size() * betas.size());
  for (double dh : delta_hs) {
    PairSpec spec;
    spec.J = J;
    spec.gamma = gamma;
    spec.h1 = 0.5 * (h_sum + J * dh);
    spec.h2 = 0.5 * (h_sum - J * dh);
    for (double beta : betas) {
      PhaseMapPoint point;
      point.delta_h = dh;
      point.beta = beta;
      point.concurrence = analytic_concurrence(spec, beta);
      if (point.concurrence < kZeroConcurrence) point.concurrence = 0.0;
      point.eof_value = eof_of(point.concurrence);
      points.push_back(point);
    }
  }
  return points;
}

}  // namespace spinthermal
