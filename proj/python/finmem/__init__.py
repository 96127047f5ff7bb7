"""Coherence decay of a two-state system coupled to an exponentially correlated bath."""

from ._core import (
    INVERSE_E,
    CoherenceSeries,
    DecoherenceTime,
    HorizonExceeded,
    NumericalError,
    PhysicalParams,
    damping_regime,
    dephasing_oracle,
    eval_eq16,
    evolve,
    extract_tau_dec,
    gamma_rate,
    integrate_volterra,
    log_grid,
    markov_limit_study,
    sweep,
    tau_dec_formula,
    tegmark_decay,
    tegmark_time,
)

__all__ = [
    "INVERSE_E",
    "CoherenceSeries",
    "DecoherenceTime",
    "HorizonExceeded",
    "NumericalError",
    "PhysicalParams",
    "damping_regime",
    "dephasing_oracle",
    "eval_eq16",
    "evolve",
    "extract_tau_dec",
    "gamma_rate",
    "integrate_volterra",
    "log_grid",
    "markov_limit_study",
    "sweep",
    "tau_dec_formula",
    "tegmark_decay",
    "tegmark_time",
]
