#include "spinthermal/effective_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "spinthermal/hamiltonians.hpp"
#include "spinthermal/thermal.hpp"

namespace spinthermal {

void FitConfig::validate() const {
  if (!(grid_step > 0.0) || !(grid_hi >= grid_lo)) {
    throw ValidationError("fit grid must be non-empty with positive step");
  }
  if (!(descent_step > 0.0) || !(shrink > 0.0 && shrink < 1.0) ||
      !(fd_step > 0.0) || !(tol_d > 0.0) || !(grad_tol > 0.0) ||
      max_iterations < 1) {
    throw ValidationError("fit descent settings must be positive");
  }
}

double state_difference(const DensityMatrix4& rho1,
                        const DensityMatrix4& rho2) {
  validate_density_matrix(rho1);
  validate_density_matrix(rho2);
  return (rho1 - rho2).norm() / rho1.norm();
}

namespace {

std::vector<double> grid_axis(const FitConfig& config) {
  std::vector<double> axis;
  const int steps =
      static_cast<int>(std::floor((config.grid_hi - config.grid_lo) /
                                      config.grid_step +
                                  1e-9));
  axis.reserve(steps + 2);
  for (int k = 0; k <= steps; ++k) {
    axis.push_back(config.grid_lo + k * config.grid_step);
  }
  // The origin is always a candidate, exactly.
  const bool has_zero =
      std::any_of(axis.begin(), axis.end(),
                  [](double v) { return v == 0.0; });
  if (!has_zero) {
    axis.push_back(0.0);
    std::sort(axis.begin(), axis.end());
  }
  return axis;
}

}  // namespace

FitResult fit_alphas(const DensityMatrix4& induced, const PairSpec& base,
                     double beta, const FitConfig& config) {
  config.validate();
  base.validate();
  validate_density_matrix(induced);

  auto objective = [&](double a1, double a2) {
    if (!std::isfinite(a1) || !std::isfinite(a2)) {
      throw ValidationError("fit objective evaluated at a non-finite point");
    }
    const EffectiveSpec spec{base, a1, a2};
    const DensityMatrix4 model =
        gibbs_state(diagonalize(effective_hamiltonian(spec)), beta)
            .cast<std::complex<double>>();
    return state_difference(model, induced);
  };

  FitResult result;

  // Stage one: coarse grid, scanned in lexicographic order so ties break
  // toward the smallest (alpha1, alpha2). The axis always carries an exact
  // zero, so the origin is part of the scan.
  const std::vector<double> axis = grid_axis(config);
  double best1 = 0.0, best2 = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (double a1 : axis) {
    for (double a2 : axis) {
      const double d = objective(a1, a2);
      if (a1 == 0.0 && a2 == 0.0) result.d_unfitted = d;
      if (d < best) {
        best = d;
        best1 = a1;
        best2 = a2;
      }
    }
  }

  // Stage two: normalized-gradient descent with step halving; only strict
  // improvements are accepted, so the D sequence is non-increasing.
  double step = config.descent_step;
  int iterations = 0;
  bool converged = false;
  while (iterations < config.max_iterations) {
    const double g1 = (objective(best1 + config.fd_step, best2) -
                       objective(best1 - config.fd_step, best2)) /
                      (2.0 * config.fd_step);
    const double g2 = (objective(best1, best2 + config.fd_step) -
                       objective(best1, best2 - config.fd_step)) /
                      (2.0 * config.fd_step);
    const double norm = std::hypot(g1, g2);
    if (norm < config.grad_tol) {
      converged = true;
      break;
    }
    bool accepted = false;
    while (step > 1e-15) {
      const double c1 = best1 - step * g1 / norm;
      const double c2 = best2 - step * g2 / norm;
      const double d = objective(c1, c2);
      if (d < best) {
        const double gain = best - d;
        best = d;
        best1 = c1;
        best2 = c2;
        accepted = true;
        ++iterations;
        if (gain < config.tol_d) converged = true;
        break;
      }
      step *= config.shrink;
    }
    if (!accepted || converged) {
      converged = true;
      break;
    }
  }

  result.alpha1 = best1;
  result.alpha2 = best2;
  result.d_fitted = best;
  result.iterations = iterations;
  result.converged = converged;
  return result;
}

}  // namespace spinthermal
