"""Dynamical decoupling toolkit: sequence generators, decoupling
diagnostics, and three independent decoherence engines backed by the C++
core."""

from ._core import (
    OVERLAP_EXPONENT_FACTOR,
    BosonMode,
    GeneralizedModulation,
    HarmonicsReport,
    NoiseSpectrum,
    OrderFitResult,
    ProtectedSystem,
    PulseSequence,
    QubitBathHamiltonian,
    __version__,
    analytic_coherence,
    cdd_dephasing,
    cdd_general,
    coherence_exponent,
    coherence_trace,
    cpmg,
    cudd,
    delta_final,
    dephasing_error,
    error_metrics,
    filter_function,
    filter_taylor_check,
    fit_order,
    free_evolution,
    lambda_moment,
    lambda_moments,
    make_time_grid,
    mc_coherence,
    modulation_values,
    odd_harmonics_check,
    projector_pulse,
    protected_propagator,
    protection_error,
    qdd,
    random_hamiltonian,
    random_protected_system,
    run_experiment,
    udd,
    udd_fractions,
)

__all__ = [
    "OVERLAP_EXPONENT_FACTOR",
    "BosonMode",
    "GeneralizedModulation",
    "HarmonicsReport",
    "NoiseSpectrum",
    "OrderFitResult",
    "ProtectedSystem",
    "PulseSequence",
    "QubitBathHamiltonian",
    "__version__",
    "analytic_coherence",
    "cdd_dephasing",
    "cdd_general",
    "coherence_exponent",
    "coherence_trace",
    "cpmg",
    "cudd",
    "delta_final",
    "dephasing_error",
    "error_metrics",
    "filter_function",
    "filter_taylor_check",
    "fit_order",
    "free_evolution",
    "lambda_moment",
    "lambda_moments",
    "make_time_grid",
    "mc_coherence",
    "modulation_values",
    "odd_harmonics_check",
    "projector_pulse",
    "protected_propagator",
    "protection_error",
    "qdd",
    "random_hamiltonian",
    "random_protected_system",
    "run_experiment",
    "udd",
    "udd_fractions",
]
