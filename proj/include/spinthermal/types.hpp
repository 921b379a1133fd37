#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinthermal {

// Computational basis state of an L-site chain. Site k (1-based) lives on
// bit k-1; a set bit means spin up. For a pair of spins this puts the
// states in the order {down-down, up-down, down-up, up-up} = {0,1,2,3},
// where the first arrow is site 1 (the low bit).
using BasisState = std::uint32_t;

// 4x4 reduced density matrix of a spin pair, in the basis order above.
// Kept complex so general two-qubit states can be handled, even though
// thermal states of the models here have real entries.
using DensityMatrix4 = Eigen::Matrix4cd;

struct ValidationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ResourceLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Site count above which chain construction refuses to run. Overridable
// per call; the CLI maps SPINTHERMAL_MAX_L onto it.
inline constexpr int kDefaultMaxSites = 16;

// Largest chain for which full 2^L x 2^L matrices may be materialized.
inline constexpr int kDenseMaxSites = 12;

/// XXZ spin pair in an inhomogeneous z field:
///   H = J (Sx Sx + Sy Sy + gamma Sz Sz) + h1 S1z + h2 S2z, with S = sigma/2.
struct PairSpec {
  double J = 1.0;
  double gamma = 1.0;
  double h1 = 0.0;
  double h2 = 0.0;

  /// Field detuning (h1 - h2) / J. Requires J != 0.
  double delta_h() const;

  /// xi = sqrt(1 + delta_h^2) / 2, the detuning-renormalized flip-flop
  /// scale. Requires J != 0.
  double xi() const;

  void validate() const;
};

/// Open XXZ chain with a disordered z field:
///   H = J sum_i (SxSx + SySy + gamma SzSz)_{i,i+1} + lambda sum_i h_i S_i^z.
struct ChainSpec {
  int sites = 2;                // L
  double J = 1.0;
  double gamma = 1.0;
  double lambda = 0.0;          // disorder intensity, >= 0
  std::vector<double> fields;   // h_i in [-1, 1], length L

  void validate(int max_sites = kDefaultMaxSites) const;
};

/// Pair Hamiltonian with adjustable corrections:
/// coupling scaled by (1 + alpha0), site fields by (1 + alpha1), (1 + alpha2).
/// alpha0 is always (alpha1 + alpha2) / 2 and is not independently settable.
struct EffectiveSpec {
  PairSpec base;    // J, gamma and the two (already lambda-scaled) fields
  double alpha1 = 0.0;
  double alpha2 = 0.0;

  double alpha0() const { return 0.5 * (alpha1 + alpha2); }

  /// PairSpec with the corrections folded in.
  PairSpec scaled() const;

  void validate() const;
};

}  // namespace spinthermal
