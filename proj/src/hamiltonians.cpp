#include "spinthermal/hamiltonians.hpp"

#include <bit>

namespace spinthermal {

Eigen::Matrix4d two_spin_hamiltonian(const PairSpec& spec) {
  spec.validate();
  const double zz = 0.25 * spec.gamma * spec.J;
  const double sum = 0.5 * (spec.h1 + spec.h2);
  const double dif = 0.5 * (spec.h1 - spec.h2);
  Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
  h(0, 0) = zz - sum;
  h(1, 1) = -zz + dif;
  h(2, 2) = -zz - dif;
  h(3, 3) = zz + sum;
  h(1, 2) = h(2, 1) = 0.5 * spec.J;
  return h;
}

Eigen::Matrix4d effective_hamiltonian(const EffectiveSpec& spec) {
  spec.validate();
  return two_spin_hamiltonian(spec.scaled());
}

std::vector<std::vector<BasisState>> sz_sector_index(int sites) {
  if (sites < 2 || sites > kDefaultMaxSites) {
    throw ValidationError("sector index supports 2..16 sites");
  }
  std::vector<std::vector<BasisState>> sectors(sites + 1);
  const BasisState dim = BasisState{1} << sites;
  for (BasisState s = 0; s < dim; ++s) {
    sectors[std::popcount(s)].push_back(s);
  }
  return sectors;
}

SectorBlocks chain_hamiltonian(const ChainSpec& spec, int max_sites) {
  spec.validate(max_sites);
  const int L = spec.sites;

  SectorBlocks out;
  out.sites = L;
  out.basis = sz_sector_index(L);
  out.blocks.resize(L + 1);

  // Position of each basis state inside its sector.
  std::vector<int> pos(std::size_t{1} << L);
  for (const auto& sector : out.basis) {
    for (std::size_t t = 0; t < sector.size(); ++t) {
      pos[sector[t]] = static_cast<int>(t);
    }
  }

  const double flip = 0.5 * spec.J;
  const double zz = 0.25 * spec.gamma * spec.J;
  for (int m = 0; m <= L; ++m) {
    const auto& sector = out.basis[m];
    const int dim = static_cast<int>(sector.size());
    Eigen::MatrixXd& block = out.blocks[m];
    block = Eigen::MatrixXd::Zero(dim, dim);
    for (int t = 0; t < dim; ++t) {
      const BasisState s = sector[t];
      double diag = 0.0;
      for (int i = 0; i < L - 1; ++i) {
        const BasisState mask = BasisState{0b11} << i;
        const BasisState bond = (s >> i) & 0b11;
        // Same bits: aligned Sz pair (+1/4); opposite: anti-aligned plus a
        // flip-flop matrix element to the exchanged configuration.
        if (bond == 0b00 || bond == 0b11) {
          diag += zz;
        } else {
          diag -= zz;
          block(pos[s ^ mask], t) += flip;
        }
      }
      for (int i = 0; i < L; ++i) {
        const double sz = (s >> i) & 1 ? 0.5 : -0.5;
        diag += spec.lambda * spec.fields[i] * sz;
      }
      block(t, t) = diag;
    }
  }
  return out;
}

namespace {

Eigen::MatrixXd kronecker(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd chain_hamiltonian_dense(const ChainSpec& spec) {
  spec.validate(kDenseMaxSites);
  const int L = spec.sites;
  const Eigen::Index dim = Eigen::Index{1} << L;

  // Single-site operators in the (down, up) basis.
  Eigen::MatrixXd sz(2, 2), sp(2, 2), sm(2, 2);
  sz << -0.5, 0.0, 0.0, 0.5;
  sp << 0.0, 0.0, 1.0, 0.0;   // raises down to up
  sm = sp.transpose();

  // Two-site bond operator; the left factor acts on the higher site.
  const Eigen::MatrixXd bond =
      0.5 * spec.J * (kronecker(sp, sm) + kronecker(sm, sp)) +
      spec.gamma * spec.J * kronecker(sz, sz);

  auto identity = [](Eigen::Index n) {
    return Eigen::MatrixXd::Identity(n, n);
  };

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 1; i < L; ++i) {  // bond between sites i and i+1, 1-based
    const Eigen::Index lo = Eigen::Index{1} << (i - 1);
    const Eigen::Index hi = Eigen::Index{1} << (L - i - 1);
    h += kronecker(identity(hi), kronecker(bond, identity(lo)));
  }
  for (int i = 1; i <= L; ++i) {
    const Eigen::Index lo = Eigen::Index{1} << (i - 1);
    const Eigen::Index hi = Eigen::Index{1} << (L - i);
    h += spec.lambda * spec.fields[i - 1] *
         kronecker(identity(hi), kronecker(sz, identity(lo)));
  }
  return h;
}

}  // namespace spinthermal
