#pragma once

#include <Eigen/Dense>

#include <utility>
#include <vector>

#include "spinthermal/hamiltonians.hpp"
#include "spinthermal/types.hpp"

namespace spinthermal {

/// Eigenvalues and orthonormal eigenvectors of a real symmetric matrix,
/// kept in block form. A dense input becomes a single block; sector-blocked
/// input keeps one block per sector plus a globally merged ascending
/// spectrum with (block, column) tags.
struct SpectralDecomposition {
  struct Block {
    int sector = -1;                 // up-spin count, -1 for dense input
    std::vector<BasisState> basis;   // global basis labels, ascending
    Eigen::VectorXd values;          // ascending within the block
    Eigen::MatrixXd vectors;         // orthonormal columns
  };

  std::vector<Block> blocks;
  std::vector<double> eigenvalues;              // merged, ascending
  std::vector<std::pair<int, int>> order;       // merged index -> (block, col)
  int dim = 0;
  int sites = 0;   // log2(dim) when dim is a power of two, else 0

  double min_eigenvalue() const { return eigenvalues.front(); }
  double max_eigenvalue() const { return eigenvalues.back(); }
};

/// Gibbs weights w_i = exp(-beta (e_i - e_min)) / Z_shifted per block
/// column. beta = +infinity selects a uniform mixture over the ground
/// multiplet (energy window 1e-10 * max(1, |E0|)).
struct ThermalWeights {
  double beta = 0.0;
  double energy_shift = 0.0;                 // e_min subtracted before exp
  double log_z = 0.0;                        // log of the shifted partition sum
  std::vector<Eigen::VectorXd> block_weights;

  double total() const;
};

struct EnergyScales {
  double e0 = 0.0;      // ground energy
  double emax = 0.0;    // top of the spectrum
  double einf = 0.0;    // spectral mean = thermal energy at infinite T
  double ebar = 0.0;    // thermal mean energy at beta
  double delta_e = 0.0; // (emax - e0) / 3
};

SpectralDecomposition diagonalize(const Eigen::MatrixXd& matrix);

/// Blocked diagonalization; sectors may run on up to `threads` workers
/// (each sector solve is independent, so results do not depend on the
/// worker count).
SpectralDecomposition diagonalize(const SectorBlocks& blocks, int threads = 1);

ThermalWeights thermal_weights(const SpectralDecomposition& decomp,
                               double beta);

/// Dense Gibbs state sum_i w_i |v_i><v_i| in the full basis. Refuses to
/// materialize matrices beyond 2^kDenseMaxSites.
Eigen::MatrixXd gibbs_state(const SpectralDecomposition& decomp, double beta);

/// Closed-form Gibbs matrix elements of the pair Hamiltonian: u, v are the
/// corner populations, w, wp the middle populations and z the flip-flop
/// coherence (real, negative for J > 0). Requires J != 0.
struct PairGibbsElements {
  double u, w, wp, v, z;
};
PairGibbsElements two_spin_gibbs_elements(const PairSpec& spec, double beta);

/// Gibbs state of the pair Hamiltonian as a DensityMatrix4 (numeric path).
DensityMatrix4 two_spin_gibbs_state(const PairSpec& spec, double beta);

/// Reduced state of sites (i, j), 1-based, i < j, from the eigenvector /
/// weight form; never materializes the full Gibbs matrix.
DensityMatrix4 partial_trace_pair(const SpectralDecomposition& decomp,
                                  double beta, int site_i, int site_j);

/// Same reduction from an explicit full density matrix (L <= kDenseMaxSites).
DensityMatrix4 partial_trace_pair(const Eigen::MatrixXd& rho_full, int sites,
                                  int site_i, int site_j);

EnergyScales energy_scales(const SpectralDecomposition& decomp, double beta);

/// tr(rho^2) of the Gibbs state, computed from the weights.
double gibbs_purity(const ThermalWeights& weights);

/// Purity of a two-spin state.
double purity(const DensityMatrix4& rho);

/// Checks the Hermiticity / unit-trace / positivity contract of a reduced
/// pair state; throws ValidationError when violated beyond tolerance.
void validate_density_matrix(const DensityMatrix4& rho);

}  // namespace spinthermal
