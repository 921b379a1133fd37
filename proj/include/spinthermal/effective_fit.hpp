#pragma once

#include "spinthermal/types.hpp"

namespace spinthermal {

/// Two-stage search settings: coarse grid in (alpha1, alpha2), then a
/// normalized-gradient descent with step halving. The origin (0, 0) is
/// always evaluated even if the grid would miss it.
struct FitConfig {
  double grid_lo = -0.9;
  double grid_hi = 0.9;
  double grid_step = 0.1;
  double descent_step = 0.05;
  double shrink = 0.5;
  double fd_step = 1e-5;       // central-difference step for the gradient
  double tol_d = 1e-12;        // stop when an accepted step improves less
  double grad_tol = 1e-10;     // stop when the gradient norm falls below
  int max_iterations = 500;

  void validate() const;
};

struct FitResult {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double d_unfitted = 0.0;   // objective at alpha = 0
  double d_fitted = 0.0;     // objective at the returned alphas
  int iterations = 0;        // accepted descent steps
  bool converged = false;
};

/// Relative Frobenius difference D = |rho1 - rho2|_F / |rho1|_F. Not
/// symmetric: the denominator is the first argument's norm.
double state_difference(const DensityMatrix4& rho1, const DensityMatrix4& rho2);

/// Minimizes D(alpha1, alpha2) between the corrected-pair Gibbs state and
/// the induced state. `base` carries the pair couplings and the
/// lambda-scaled fields of the two chain sites. Grid ties break toward the
/// lexicographically smallest (alpha1, alpha2); the descent accepts only
/// strict improvements, so the returned D never exceeds the value at the
/// origin.
FitResult fit_alphas(const DensityMatrix4& induced, const PairSpec& base,
                     double beta, const FitConfig& config = {});

}  // namespace spinthermal
