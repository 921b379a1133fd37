#pragma once

#include <Eigen/Dense>

#include <vector>

#include "spinthermal/types.hpp"

namespace spinthermal {

/// Chain Hamiltonian split into total-Sz blocks. Sector m collects the
/// basis states with m up spins; the full basis is partitioned across
/// sectors and each block is dense real symmetric of dimension C(L, m).
struct SectorBlocks {
  int sites = 0;
  std::vector<std::vector<BasisState>> basis;   // basis[m], ascending
  std::vector<Eigen::MatrixXd> blocks;          // blocks[m]
};

/// 4x4 pair Hamiltonian in the basis {dd, ud, du, uu}:
/// corners gamma*J/4 -/+ (h1+h2)/2, middle -gamma*J/4 +/- (h1-h2)/2,
/// flip-flop J/2 between ud and du.
Eigen::Matrix4d two_spin_hamiltonian(const PairSpec& spec);

/// Pair Hamiltonian with the alpha corrections applied.
Eigen::Matrix4d effective_hamiltonian(const EffectiveSpec& spec);

/// For each up-spin count m in 0..L, the ascending list of basis states
/// with popcount m.
std::vector<std::vector<BasisState>> sz_sector_index(int sites);

/// Open-chain XXZ Hamiltonian assembled per Sz sector.
SectorBlocks chain_hamiltonian(const ChainSpec& spec,
                               int max_sites = kDefaultMaxSites);

/// Full 2^L x 2^L assembly via Kronecker products. Cross-check path,
/// L <= 12 only.
Eigen::MatrixXd chain_hamiltonian_dense(const ChainSpec& spec);

}  // namespace spinthermal
