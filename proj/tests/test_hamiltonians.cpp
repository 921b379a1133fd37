#include "spinthermal/hamiltonians.hpp"

#include <Eigen/Dense>

#include <bit>

#include "doctest.h"
#include "spinthermal/prng.hpp"
#include "spinthermal/types.hpp"

using namespace spinthermal;

namespace {

Eigen::Vector4d spectrum4(const Eigen::Matrix4d& h) {
  return Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(h).eigenvalues();
}

}  // namespace

TEST_CASE("isotropic pair has the singlet/triplet spectrum") {
  const Eigen::Vector4d e = spectrum4(two_spin_hamiltonian({1.0, 1.0, 0, 0}));
  CHECK(e[0] == doctest::Approx(-0.75).epsilon(1e-14));
  CHECK(e[1] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(e[2] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(e[3] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("fields-only pair is diagonal") {
  const double a = 0.7, b = -0.3;
  const Eigen::Matrix4d h = two_spin_hamiltonian({0.0, 1.0, a, b});
  Eigen::Matrix4d expected = Eigen::Matrix4d::Zero();
  expected.diagonal() << -(a + b) / 2, (a - b) / 2, -(a - b) / 2, (a + b) / 2;
  CHECK((h - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("anisotropic pair spectrum") {
  const Eigen::Vector4d e =
      spectrum4(two_spin_hamiltonian({1.0, 0.4, 0.0, 0.0}));
  // Direct 4x4 diagonalization: {-gamma/4 - 1/2, gamma/4, gamma/4,
  // -gamma/4 + 1/2} at J = 1.
  CHECK(e[0] == doctest::Approx(-0.6).epsilon(1e-14));
  CHECK(e[1] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(e[2] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(e[3] == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("pair matrix is traceless and symmetric for random specs") {
  PhiloxRng rng(11);
  for (int k = 0; k < 200; ++k) {
    PairSpec spec;
    spec.J = 4.0 * rng.next_symmetric();
    spec.gamma = 2.0 * rng.next_symmetric();
    spec.h1 = 3.0 * rng.next_symmetric();
    spec.h2 = 3.0 * rng.next_symmetric();
    const Eigen::Matrix4d h = two_spin_hamiltonian(spec);
    CHECK(std::abs(h.trace()) < 1e-12);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("pair spec rejects non-finite input") {
  CHECK_THROWS_AS(
      two_spin_hamiltonian({std::numeric_limits<double>::infinity(), 1, 0, 0}),
      ValidationError);
  CHECK_THROWS_AS(
      two_spin_hamiltonian({1, std::numeric_limits<double>::quiet_NaN(), 0, 0}),
      ValidationError);
}

TEST_CASE("effective corrections") {
  const PairSpec base{1.3, 0.4, 0.5, -0.2};

  SUBCASE("zero alphas reproduce the base matrix") {
    CHECK((effective_hamiltonian({base, 0.0, 0.0}) -
           two_spin_hamiltonian(base))
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }

  SUBCASE("equal alphas scale every term") {
    const double a = 0.25;
    const Eigen::Matrix4d h = effective_hamiltonian({base, a, a});
    const PairSpec scaled{(1 + a) * base.J, base.gamma, (1 + a) * base.h1,
                          (1 + a) * base.h2};
    CHECK((h - two_spin_hamiltonian(scaled)).cwiseAbs().maxCoeff() < 1e-15);
  }

  SUBCASE("antisymmetric alphas leave the coupling untouched") {
    const EffectiveSpec spec{base, 0.2, -0.2};
    CHECK(spec.alpha0() == 0.0);
    const Eigen::Matrix4d h = effective_hamiltonian(spec);
    CHECK(h(1, 2) == doctest::Approx(0.5 * base.J).epsilon(1e-15));
    const PairSpec scaled{base.J, base.gamma, 1.2 * base.h1, 0.8 * base.h2};
    CHECK((h - two_spin_hamiltonian(scaled)).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("effective spectrum varies smoothly over the alpha grid") {
  const PairSpec base{1.0, 0.4, 0.3, -0.6};
  const double step = 1e-6;
  for (double a1 = -0.9; a1 <= 0.9; a1 += 0.3) {
    for (double a2 = -0.9; a2 <= 0.9; a2 += 0.3) {
      const Eigen::Vector4d up =
          spectrum4(effective_hamiltonian({base, a1 + step, a2}));
      const Eigen::Vector4d down =
          spectrum4(effective_hamiltonian({base, a1 - step, a2}));
      const double rate = (up - down).cwiseAbs().maxCoeff() / (2 * step);
      CHECK(rate < 10.0);  // bounded derivative, not a tight bound
    }
  }
}

TEST_CASE("sector tables") {
  SUBCASE("two sites") {
    const auto sectors = sz_sector_index(2);
    REQUIRE(sectors.size() == 3);
    CHECK(sectors[0] == std::vector<BasisState>{0b00});
    CHECK(sectors[1] == std::vector<BasisState>{0b01, 0b10});
    CHECK(sectors[2] == std::vector<BasisState>{0b11});
  }

  SUBCASE("three sites, one up spin") {
    const auto sectors = sz_sector_index(3);
    CHECK(sectors[1] == std::vector<BasisState>{0b001, 0b010, 0b100});
  }

  SUBCASE("four sites partition the full basis") {
    const auto sectors = sz_sector_index(4);
    std::vector<bool> seen(16, false);
    for (const auto& sector : sectors) {
      for (BasisState s : sector) {
        CHECK(!seen[s]);
        seen[s] = true;
      }
    }
    for (bool b : seen) CHECK(b);
  }
}

namespace {

ChainSpec random_chain(int sites, double lambda, std::uint64_t seed) {
  ChainSpec spec;
  spec.sites = sites;
  spec.J = 1.0;
  spec.gamma = 0.4;
  spec.lambda = lambda;
  PhiloxRng rng(seed);
  spec.fields.resize(sites);
  for (double& h : spec.fields) h = rng.next_symmetric();
  return spec;
}

}  // namespace

TEST_CASE("two-site chain reduces to the pair Hamiltonian") {
  ChainSpec spec = random_chain(2, 0.8, 5);
  const SectorBlocks blocks = chain_hamiltonian(spec);

  Eigen::Matrix4d assembled = Eigen::Matrix4d::Zero();
  for (std::size_t m = 0; m < blocks.basis.size(); ++m) {
    for (std::size_t r = 0; r < blocks.basis[m].size(); ++r) {
      for (std::size_t c = 0; c < blocks.basis[m].size(); ++c) {
        assembled(blocks.basis[m][r], blocks.basis[m][c]) =
            blocks.blocks[m](r, c);
      }
    }
  }
  const Eigen::Matrix4d pair = two_spin_hamiltonian(
      {spec.J, spec.gamma, spec.lambda * spec.fields[0],
       spec.lambda * spec.fields[1]});
  CHECK((assembled - pair).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("three-site sector dimensions and symmetry") {
  ChainSpec spec = random_chain(3, 0.0, 1);
  const SectorBlocks blocks = chain_hamiltonian(spec);
  const std::vector<int> dims = {1, 3, 3, 1};
  for (int m = 0; m <= 3; ++m) {
    CHECK(static_cast<int>(blocks.basis[m].size()) == dims[m]);
    CHECK((blocks.blocks[m] - blocks.blocks[m].transpose())
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  }
}

TEST_CASE("blocked and dense assemblies agree after reordering") {
  ChainSpec spec = random_chain(10, 1.7, 99);
  const SectorBlocks blocks = chain_hamiltonian(spec);
  const Eigen::MatrixXd dense = chain_hamiltonian_dense(spec);

  double worst = 0.0;
  for (std::size_t m = 0; m < blocks.basis.size(); ++m) {
    const auto& basis = blocks.basis[m];
    for (std::size_t r = 0; r < basis.size(); ++r) {
      for (std::size_t c = 0; c < basis.size(); ++c) {
        worst = std::max(worst, std::abs(blocks.blocks[m](r, c) -
                                         dense(basis[r], basis[c])));
      }
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("dense assembly conserves total magnetization") {
  ChainSpec spec = random_chain(6, 2.5, 17);
  const Eigen::MatrixXd dense = chain_hamiltonian_dense(spec);
  for (int s = 0; s < 64; ++s) {
    for (int sp = 0; sp < 64; ++sp) {
      if (std::popcount(unsigned(s)) != std::popcount(unsigned(sp))) {
        CHECK(dense(s, sp) == 0.0);
      }
    }
  }
}

TEST_CASE("resource limits are enforced up front") {
  ChainSpec spec = random_chain(10, 1.0, 3);
  spec.sites = 17;
  spec.fields.resize(17, 0.0);
  CHECK_THROWS_AS(chain_hamiltonian(spec), ResourceLimitError);
  CHECK_THROWS_AS(chain_hamiltonian(spec, 20), ValidationError);  // via index

  ChainSpec big = random_chain(10, 1.0, 3);
  big.sites = 13;
  big.fields.resize(13, 0.0);
  CHECK_THROWS_AS(chain_hamiltonian_dense(big), ResourceLimitError);
}

TEST_CASE("chain fields are validated") {
  ChainSpec spec = random_chain(4, 1.0, 9);
  spec.fields[2] = 1.5;
  CHECK_THROWS_AS(chain_hamiltonian(spec), ValidationError);
  spec.fields[2] = 0.5;
  spec.fields.pop_back();
  CHECK_THROWS_AS(chain_hamiltonian(spec), ValidationError);
  spec.fields.push_back(0.0);
  spec.lambda = -1.0;
  CHECK_THROWS_AS(chain_hamiltonian(spec), ValidationError);
}
