"""Thermal pair entanglement in disordered XXZ chains.

Thin Python layer over the C++ core: pair/chain Hamiltonians, Gibbs
states and pair reductions, Wootters concurrence and entanglement of
formation, threshold solvers, the two-parameter Hamiltonian fit and
seeded disorder ensembles.
"""

from ._core import (  # noqa: F401
    PRNG_VERSION,
    CellStats,
    ChainSpec,
    ConcurrenceResult,
    DeltaEThresholdResult,
    EffectiveSpec,
    EnsembleConfig,
    FitConfig,
    FitResult,
    IndeterminateThresholdError,
    PairGibbsElements,
    PairSpec,
    ResourceLimitError,
    ThresholdResult,
    ValidationError,
    __version__,
    analytic_concurrence,
    centered_pair,
    chain_hamiltonian_dense,
    concurrence,
    concurrence_x_state,
    derive_seed,
    effective_hamiltonian,
    ensemble_stats,
    eof,
    fit_alphas,
    induced_pair_state,
    sample_disorder,
    spin_flip,
    state_difference,
    sz_sector_index,
    threshold_beta,
    threshold_beta_delta_e,
    two_spin_gibbs_elements,
    two_spin_gibbs_state,
    two_spin_hamiltonian,
)

__all__ = [name for name in dir() if not name.startswith("_")]
