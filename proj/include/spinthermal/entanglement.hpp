#pragma once

#include <array>

#include "spinthermal/types.hpp"

namespace spinthermal {

struct ConcurrenceResult {
  double concurrence = 0.0;            // in [0, 1]
  std::array<double, 4> lambdas{};     // decreasing, all >= 0
};

struct ThresholdResult {
  enum class Kind { Finite, None };
  Kind kind = Kind::None;
  double beta_c = 0.0;     // meaningful for Finite
  double residual = 0.0;   // defining equation evaluated at the root;
                           // for None, an upper bound on it (always < 0)
};

/// Root of the threshold equation in the beta*DeltaE variable (zero-mean
/// field case), with the cross-check against the plain beta threshold.
struct DeltaEThresholdResult {
  ThresholdResult root;              // beta_c * DeltaE when finite
  double beta_c_times_delta_e = 0.0; // from the beta solver + pair spectrum
  bool consistent = false;           // the two routes agree within 1e-8
};

struct IndeterminateThresholdError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Spin-flipped state (sigma_y x sigma_y) rho* (sigma_y x sigma_y),
/// conjugation in the standard basis.
DensityMatrix4 spin_flip(const DensityMatrix4& rho);

/// Wootters concurrence of an arbitrary two-qubit state. The lambdas are
/// computed through the Hermitian product sqrt(rho) rho~ sqrt(rho); tiny
/// negative eigenvalues of rho (>= -1e-12) are clipped before the square
/// roots.
ConcurrenceResult concurrence(const DensityMatrix4& rho);

/// Fast path for states with zero corner coherences (the X shape thermal
/// pair states take): C = 2 max(0, |z| - sqrt(u v)).
ConcurrenceResult concurrence_x_state(const DensityMatrix4& rho);

/// Entanglement of formation from the concurrence:
/// E = h((1 + sqrt(1 - C^2)) / 2), h the binary entropy in bits.
double eof(double concurrence);

/// Closed-form thermal concurrence of the pair Hamiltonian. Requires
/// J != 0 and finite beta >= 0.
double analytic_concurrence(const PairSpec& spec, double beta);

/// Inverse threshold temperature beta_c: above it (beta > beta_c) the pair
/// thermal state is entangled, below it separable. Returns None when the
/// threshold equation provably has no root (e.g. the ferromagnetic XXX
/// case); throws IndeterminateThresholdError when the asymptotic growth
/// rate is positive but too close to zero to locate a root numerically.
ThresholdResult threshold_beta(const PairSpec& spec);

/// Threshold in the dimensionless beta*DeltaE variable for h1 + h2 = 0,
/// solved directly and cross-validated against threshold_beta via the pair
/// spectrum. Mismatches beyond 1e-8 are flagged, not hidden.
DeltaEThresholdResult threshold_beta_delta_e(double gamma, double delta_h);

}  // namespace spinthermal
