"""Multi-qubit concurrence lower bounds under local decoherence."""
from ._backend import BACKEND
from .channels import (
    ChannelFamily,
    KrausChannel,
    amplitude_damping,
    apply,
    generalized_amplitude_damping,
    phase_damping,
)
from .evolution import (
    channel_factor,
    sudden_death_time,
    verify_mixed_bound,
    verify_mixture,
    verify_pure_evolution,
    verify_two_sided,
)
from .measures import (
    classify,
    convex_roof_estimate,
    cut_concurrence,
    pure_concurrence,
    tau_lower_bound,
    three_tangle,
    wootters_concurrence,
)
from .states import DensityMatrix, PureState, ghz, ghz_w_mixture, w

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ChannelFamily",
    "DensityMatrix",
    "KrausChannel",
    "PureState",
    "amplitude_damping",
    "apply",
    "channel_factor",
    "classify",
    "convex_roof_estimate",
    "cut_concurrence",
    "generalized_amplitude_damping",
    "ghz",
    "ghz_w_mixture",
    "phase_damping",
    "pure_concurrence",
    "sudden_death_time",
    "tau_lower_bound",
    "three_tangle",
    "verify_mixed_bound",
    "verify_mixture",
    "verify_pure_evolution",
    "verify_two_sided",
    "w",
    "wootters_concurrence",
]
