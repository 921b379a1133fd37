#include "spinthermal/thermal.hpp"

#include <cmath>

#include "doctest.h"
#include "spinthermal/entanglement.hpp"
#include "spinthermal/hamiltonians.hpp"
#include "test_support.hpp"

using namespace spinthermal;
namespace st = spinthermal::testing;

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

TEST_CASE("diagonal matrices pass through") {
  Eigen::MatrixXd h = Eigen::Vector4d(1, 2, 3, 4).asDiagonal();
  const SpectralDecomposition decomp = diagonalize(h);
  for (int i = 0; i < 4; ++i) {
    CHECK(decomp.eigenvalues[i] == doctest::Approx(i + 1).epsilon(1e-15));
  }
  CHECK((decomp.blocks[0].vectors.cwiseAbs() - Eigen::Matrix4d::Identity())
            .cwiseAbs()
            .maxCoeff() < 1e-14);
}

TEST_CASE("isotropic pair eigenvalues") {
  const SpectralDecomposition decomp =
      diagonalize(two_spin_hamiltonian({1.0, 1.0, 0, 0}));
  CHECK(decomp.eigenvalues[0] == doctest::Approx(-0.75).epsilon(1e-14));
  CHECK(decomp.eigenvalues[3] == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("non-symmetric input is rejected") {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(3, 3);
  h(0, 1) = 1.0;
  CHECK_THROWS_AS(diagonalize(h), ValidationError);
}

TEST_CASE("blocked spectrum satisfies the trace identity") {
  const ChainSpec spec = random_chain(8, 1.3, 21);
  const SectorBlocks blocks = chain_hamiltonian(spec);
  double trace = 0.0;
  for (const auto& block : blocks.blocks) trace += block.trace();

  const SpectralDecomposition decomp = diagonalize(blocks);
  double sum = 0.0;
  for (double e : decomp.eigenvalues) sum += e;
  CHECK(sum == doctest::Approx(trace).epsilon(1e-9));
  CHECK(decomp.dim == 256);
}

TEST_CASE("blocked decomposition reconstructs every sector") {
  const ChainSpec spec = random_chain(6, 0.9, 33);
  const SectorBlocks blocks = chain_hamiltonian(spec);
  const SpectralDecomposition decomp = diagonalize(blocks, 2);
  for (std::size_t m = 0; m < blocks.blocks.size(); ++m) {
    const auto& block = decomp.blocks[m];
    const Eigen::MatrixXd gram = block.vectors.transpose() * block.vectors;
    CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols()))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
    const Eigen::MatrixXd rebuilt =
        block.vectors * block.values.asDiagonal() * block.vectors.transpose();
    CHECK((rebuilt - blocks.blocks[m]).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("thermal weights") {
  const SpectralDecomposition decomp =
      diagonalize(two_spin_hamiltonian({1.0, 1.0, 0, 0}));

  SUBCASE("sum to one") {
    for (double beta : {0.0, 0.5, 3.0, 40.0}) {
      CHECK(std::abs(thermal_weights(decomp, beta).total() - 1.0) < 1e-14);
    }
  }

  SUBCASE("negative and NaN beta are rejected") {
    CHECK_THROWS_AS(thermal_weights(decomp, -0.1), ValidationError);
    CHECK_THROWS_AS(
        thermal_weights(decomp, std::numeric_limits<double>::quiet_NaN()),
        ValidationError);
  }

  SUBCASE("infinite beta selects the ground multiplet") {
    const auto tw = thermal_weights(
        decomp, std::numeric_limits<double>::infinity());
    CHECK(std::abs(tw.total() - 1.0) < 1e-14);
    // Unique singlet ground state: exactly one nonzero weight.
    int nonzero = 0;
    for (const auto& w : tw.block_weights) {
      nonzero += (w.array() > 0.0).count();
    }
    CHECK(nonzero == 1);
  }
}

TEST_CASE("Gibbs states of the pair") {
  const SpectralDecomposition decomp =
      diagonalize(two_spin_hamiltonian({1.0, 1.0, 0, 0}));

  SUBCASE("infinite temperature is maximally mixed") {
    const Eigen::MatrixXd rho = gibbs_state(decomp, 0.0);
    CHECK((rho - 0.25 * Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() <
          1e-15);
  }

  SUBCASE("zero temperature is the singlet projector") {
    const Eigen::MatrixXd rho =
        gibbs_state(decomp, std::numeric_limits<double>::infinity());
    const DensityMatrix4 expected = st::projector(st::bell_psi_minus());
    CHECK((rho.cast<std::complex<double>>() - expected).cwiseAbs().maxCoeff() <
          1e-14);
  }

  SUBCASE("the threshold temperature state is exactly separable") {
    const DensityMatrix4 rho =
        two_spin_gibbs_state({1.0, 1.0, 0, 0}, std::log(3.0));
    CHECK(concurrence(rho).concurrence < 1e-12);
  }
}

TEST_CASE("closed-form pair Gibbs elements") {
  SUBCASE("infinite temperature gives quarters") {
    const auto e = two_spin_gibbs_elements({1.0, 0.7, 0.2, -0.4}, 0.0);
    CHECK(e.u == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(e.v == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(e.w == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(e.wp == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(e.z == 0.0);
  }

  SUBCASE("anisotropic symmetric point") {
    // gamma = 0.4, h1 = h2 = 0, beta J = 2: |z| =
    // e^{0.4} sinh(1) / (2 (e^{0.4} cosh(1) + 1)), with the coherence
    // negative for antiferromagnetic coupling (singlet-leaning state).
    const auto e = two_spin_gibbs_elements({1.0, 0.4, 0.0, 0.0}, 2.0);
    const double expected =
        std::exp(0.4) * std::sinh(1.0) /
        (2.0 * (std::exp(0.4) * std::cosh(1.0) + 1.0));
    CHECK(std::abs(e.z) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(e.z < 0.0);
    CHECK(std::abs(expected - 0.2654) < 5e-4);
  }

  SUBCASE("elements always sum to one") {
    PhiloxRng rng(3);
    for (int k = 0; k < 100; ++k) {
      const auto [spec, beta] = st::random_pair_spec(rng);
      const auto e = two_spin_gibbs_elements(spec, beta);
      CHECK(std::abs(e.u + e.v + e.w + e.wp - 1.0) < 1e-12);
    }
  }

  SUBCASE("closed form matches the numeric Gibbs matrix elementwise") {
    PhiloxRng rng(17);
    for (int k = 0; k < 1000; ++k) {
      const auto [spec, beta] = st::random_pair_spec(rng);
      const auto e = two_spin_gibbs_elements(spec, beta);
      const DensityMatrix4 rho = two_spin_gibbs_state(spec, beta);
      CHECK(std::abs(e.u - rho(0, 0).real()) < 1e-12);
      CHECK(std::abs(e.w - rho(1, 1).real()) < 1e-12);
      CHECK(std::abs(e.wp - rho(2, 2).real()) < 1e-12);
      CHECK(std::abs(e.v - rho(3, 3).real()) < 1e-12);
      CHECK(std::abs(e.z - rho(1, 2).real()) < 1e-12);
      CHECK(std::abs(rho(0, 3)) < 1e-15);
    }
  }

  SUBCASE("J = 0 is routed to the diagonal formula") {
    CHECK_THROWS_AS(two_spin_gibbs_elements({0.0, 1.0, 0.5, 0.2}, 1.0),
                    std::domain_error);
  }
}

TEST_CASE("pair reduction of a two-site chain is the state itself") {
  const ChainSpec spec = random_chain(2, 0.6, 4);
  const SpectralDecomposition decomp = diagonalize(chain_hamiltonian(spec));
  const DensityMatrix4 reduced = partial_trace_pair(decomp, 1.2, 1, 2);
  const Eigen::MatrixXd full = gibbs_state(decomp, 1.2);
  CHECK((reduced - full.cast<std::complex<double>>()).cwiseAbs().maxCoeff() <
        1e-14);
}

TEST_CASE("pure product state reduces to a pure pair state") {
  const int sites = 5;
  const int dim = 1 << sites;
  // All spins up.
  Eigen::MatrixXd rho = Eigen::MatrixXd::Zero(dim, dim);
  rho(dim - 1, dim - 1) = 1.0;
  const DensityMatrix4 reduced = partial_trace_pair(rho, sites, 2, 4);
  DensityMatrix4 expected = DensityMatrix4::Zero();
  expected(3, 3) = 1.0;
  CHECK((reduced - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("blocked reduction matches the brute-force index sum") {
  for (std::uint64_t seed : {100, 200}) {
    const ChainSpec spec = random_chain(8, 2.0, seed);
    const SpectralDecomposition decomp = diagonalize(chain_hamiltonian(spec));
    const Eigen::MatrixXd dense_h = chain_hamiltonian_dense(spec);
    for (double beta : {0.0, 1.0, 5.0}) {
      for (auto [i, j] : {std::pair{1, 2}, std::pair{4, 5}, std::pair{2, 7}}) {
        const DensityMatrix4 fast = partial_trace_pair(decomp, beta, i, j);
        const DensityMatrix4 slow = st::brute_force_pair_reduction(
            st::brute_force_gibbs(dense_h, beta), spec.sites, i, j);
        CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-13);
        validate_density_matrix(fast);
        CHECK(std::abs(fast(0, 3)) < 1e-12);
        CHECK(std::abs(fast(3, 0)) < 1e-12);
      }
    }
  }
}

TEST_CASE("site bounds are validated") {
  const ChainSpec spec = random_chain(4, 1.0, 8);
  const SpectralDecomposition decomp = diagonalize(chain_hamiltonian(spec));
  CHECK_THROWS_AS(partial_trace_pair(decomp, 1.0, 0, 2), ValidationError);
  CHECK_THROWS_AS(partial_trace_pair(decomp, 1.0, 2, 2), ValidationError);
  CHECK_THROWS_AS(partial_trace_pair(decomp, 1.0, 3, 5), ValidationError);
}

TEST_CASE("energy scales") {
  const SpectralDecomposition decomp =
      diagonalize(two_spin_hamiltonian({1.0, 0.4, 0.0, 0.0}));

  SUBCASE("anisotropic pair values") {
    const EnergyScales s = energy_scales(decomp, 1.0);
    CHECK(s.e0 == doctest::Approx(-0.6).epsilon(1e-14));
    CHECK(s.emax == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(s.delta_e == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(std::abs(s.einf) < 1e-15);
    CHECK(s.e0 <= s.ebar);
    CHECK(s.ebar <= s.emax);
  }

  SUBCASE("infinite temperature mean is the spectral mean") {
    const EnergyScales s = energy_scales(decomp, 0.0);
    CHECK(s.ebar == s.einf);
  }

  SUBCASE("low temperature mean collapses to the ground energy") {
    const EnergyScales s = energy_scales(decomp, 50.0);
    CHECK(s.ebar - s.e0 < 1e-8);
  }

  SUBCASE("mean energy decreases with beta") {
    double previous = energy_scales(decomp, 0.0).ebar;
    for (double beta = 0.25; beta < 20.0; beta += 0.25) {
      const double current = energy_scales(decomp, beta).ebar;
      CHECK(current <= previous + 1e-12);
      previous = current;
    }
  }
}

TEST_CASE("Gibbs purity is non-decreasing in beta") {
  const ChainSpec spec = random_chain(6, 1.5, 77);
  const SpectralDecomposition decomp = diagonalize(chain_hamiltonian(spec));
  double previous = 0.0;
  for (double beta = 0.0; beta <= 10.0; beta += 0.5) {
    const double p = gibbs_purity(thermal_weights(decomp, beta));
    CHECK(p >= previous - 1e-14);
    previous = p;
  }
}

TEST_CASE("density matrix validation catches defects") {
  DensityMatrix4 rho = 0.25 * DensityMatrix4::Identity();
  validate_density_matrix(rho);

  DensityMatrix4 skew = rho;
  skew(0, 1) = 1e-3;
  CHECK_THROWS_AS(validate_density_matrix(skew), ValidationError);

  DensityMatrix4 off_trace = 0.3 * DensityMatrix4::Identity();
  CHECK_THROWS_AS(validate_density_matrix(off_trace), ValidationError);

  DensityMatrix4 negative = rho;
  negative(0, 0) = -0.05;
  negative(1, 1) = 0.55;
  CHECK_THROWS_AS(validate_density_matrix(negative), ValidationError);
}
