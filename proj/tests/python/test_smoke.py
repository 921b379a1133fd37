"""Smoke tests for the Python bindings: a few known values per operation."""

import math

import numpy as np
import pytest

import spinthermal as st


def test_version_metadata():
    assert st.__version__
    assert st.PRNG_VERSION.startswith("philox4x32-10")


def test_two_spin_hamiltonian_spectrum():
    h = st.two_spin_hamiltonian(st.PairSpec(J=1.0, gamma=1.0))
    eigs = np.linalg.eigvalsh(h)
    assert np.allclose(eigs, [-0.75, 0.25, 0.25, 0.25], atol=1e-14)
    assert abs(np.trace(h)) < 1e-14


def test_effective_hamiltonian_identity():
    base = st.PairSpec(J=1.3, gamma=0.4, h1=0.5, h2=-0.2)
    same = st.effective_hamiltonian(st.EffectiveSpec(base, 0.0, 0.0))
    assert np.allclose(same, st.two_spin_hamiltonian(base), atol=0)


def test_sector_index_partitions_the_basis():
    sectors = st.sz_sector_index(4)
    states = sorted(s for sector in sectors for s in sector)
    assert states == list(range(16))
    assert [len(s) for s in sectors] == [1, 4, 6, 4, 1]


def test_gibbs_state_limits():
    spec = st.PairSpec(J=1.0, gamma=1.0)
    hot = st.two_spin_gibbs_state(spec, 0.0)
    assert np.allclose(hot, np.eye(4) / 4, atol=1e-15)
    elements = st.two_spin_gibbs_elements(spec, 2.0)
    assert elements.u + elements.v + elements.w + elements.wp == pytest.approx(
        1.0, abs=1e-14
    )
    assert elements.z < 0  # antiferromagnetic coupling leans on the singlet


def test_concurrence_of_bell_state():
    bell = np.zeros((4, 4), dtype=complex)
    bell[0, 0] = bell[0, 3] = bell[3, 0] = bell[3, 3] = 0.5
    result = st.concurrence(bell)
    assert result.concurrence == pytest.approx(1.0, abs=1e-12)
    assert st.eof(result.concurrence) == pytest.approx(1.0, abs=1e-12)


def test_analytic_concurrence_threshold():
    xxx = st.PairSpec(J=1.0, gamma=1.0)
    assert st.analytic_concurrence(xxx, math.log(3.0)) < 1e-12
    assert st.analytic_concurrence(xxx, 2.0) > 0.0

    root = st.threshold_beta(xxx)
    assert root.kind == "finite"
    assert root.beta_c == pytest.approx(math.log(3.0), abs=1e-9)
    assert st.threshold_beta(st.PairSpec(J=-1.0, gamma=1.0)).kind == "none"


def test_threshold_delta_e_consistency():
    result = st.threshold_beta_delta_e(0.4, 0.5)
    assert result.root.kind == "finite"
    assert result.consistent
    assert result.root.beta_c == pytest.approx(
        result.beta_c_times_delta_e, abs=1e-8
    )


def test_induced_pair_state_matches_pair_gibbs_at_l2():
    fields = st.sample_disorder(9, 2)
    chain = st.ChainSpec(L=2, J=1.0, gamma=0.4, lambda_=0.8, fields=fields)
    induced = st.induced_pair_state(chain, 1.5, 1, 2)
    pair = st.two_spin_gibbs_state(
        st.PairSpec(J=1.0, gamma=0.4, h1=0.8 * fields[0], h2=0.8 * fields[1]),
        1.5,
    )
    assert np.allclose(induced, pair, atol=1e-13)
    assert np.trace(induced).real == pytest.approx(1.0, abs=1e-12)


def test_induced_state_is_x_shaped():
    fields = st.sample_disorder(11, 8)
    chain = st.ChainSpec(L=8, J=1.0, gamma=0.4, lambda_=2.0, fields=fields)
    rho = st.induced_pair_state(chain, 2.0, 4, 5)
    assert abs(rho[0, 3]) < 1e-12
    fast = st.concurrence_x_state(rho).concurrence
    general = st.concurrence(rho).concurrence
    assert fast == pytest.approx(general, abs=1e-11)


def test_disorder_sampling_is_deterministic():
    a = st.sample_disorder(123, 10)
    assert a == st.sample_disorder(123, 10)
    assert all(-1.0 <= h < 1.0 for h in a)
    assert st.derive_seed(1, 0) != st.derive_seed(1, 1)


def test_fit_identity_case():
    fields = st.sample_disorder(5, 2)
    chain = st.ChainSpec(L=2, J=1.0, gamma=0.4, lambda_=0.5, fields=fields)
    induced = st.induced_pair_state(chain, 3.0, 1, 2)
    base = st.PairSpec(
        J=1.0, gamma=0.4, h1=0.5 * fields[0], h2=0.5 * fields[1]
    )
    result = st.fit_alphas(induced, base, 3.0)
    assert result.d_fitted < 1e-8
    assert abs(result.alpha1) < 1e-3 and abs(result.alpha2) < 1e-3
    assert result.d_fitted <= result.d_unfitted


def test_ensemble_stats_deterministic_across_threads():
    config = st.EnsembleConfig()
    config.L = 6
    config.gamma = 0.4
    config.lambdas = [1.5]
    config.betas = [0.0, 2.0]
    config.realizations = 3
    config.master_seed = 42

    config.threads = 1
    serial = st.ensemble_stats(config)
    config.threads = 4
    parallel = st.ensemble_stats(config)

    assert len(serial) == len(parallel) == 2
    for a, b in zip(serial, parallel):
        assert a.mean_eof == b.mean_eof
        assert a.var_eof == b.var_eof
    # Infinite temperature cell is exactly separable.
    assert serial[0].beta == 0.0
    assert serial[0].mean_eof == 0.0
