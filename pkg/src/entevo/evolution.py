"""Both sides of the entanglement evolution laws, evaluated numerically.

Every law compares ``E(channel applied to the state)`` against
``factor(channel) * E(state)``, where the factor is the relative decay of the
concurrence bound of a maximally entangled GHZ or W state under the same
channel.  ``measure`` selects the monotone ``E``:

``"tau"``        the lower bound over all one-vs-rest cuts (default);
``"noisy_cut"``  the cut concurrence of the cut separating the noisy qubit.
"""
from dataclasses import dataclass

import numpy as np

from .channels import apply
from .measures import (
    GHZ_CLASS,
    UNENTANGLED,
    W_CLASS,
    classify,
    cut_concurrence,
    tau_lower_bound,
)
from .states import PureState, as_density, ghz, ghz_w_mixture, w

GHZ = "GHZ"
W = "W"
MEASURES = ("tau", "noisy_cut")
GAP_TOL = 1e-8

_CLASS_TO_STATE = {GHZ_CLASS: GHZ, W_CLASS: W}
# Reference-state factors keyed by channel operators; they recur across every sweep point.
_FACTOR_CACHE = {}


@dataclass(frozen=True)
class EvolutionReport:
    lhs: float
    rhs: float
    gap: float
    class_used: str
    channel_label: str
    t: float
    p: float = None
    rhs_ghz: float = None
    rhs_w: float = None


@dataclass(frozen=True)
class ChannelFactor:
    value: float
    raw: float
    maximally_entangled_class: str
    channel_label: str
    t: float


def _report(lhs, rhs, cls, channel, p=None, rhs_ghz=None, rhs_w=None):
    return EvolutionReport(float(lhs), float(rhs), float(rhs - lhs), cls, channel.label,
                           channel.t, p, rhs_ghz, rhs_w)


def measure_value(rho, measure="tau", noisy_qubit=None):
    if measure == "tau":
        return tau_lower_bound(rho)
    if measure == "noisy_cut":
        if noisy_qubit is None:
            raise ValueError("noisy_cut measure needs the noisy qubit")
        return cut_concurrence(rho, noisy_qubit)
    raise ValueError(f"unknown measure {measure!r}; expected one of {MEASURES}")


def _reference_state(cls, n_qubits):
    if cls in (GHZ, GHZ_CLASS):
        return ghz(n_qubits), GHZ
    if cls in (W, W_CLASS):
        return w(n_qubits), W
    raise ValueError(f"no maximally entangled reference state for class {cls!r}")


def channel_factor(channel, cls, n_qubits, qubit=None, measure="tau", renormalize=True):
    """Relative decay of the GHZ or W state when ``channel`` hits ``qubit``.

    ``qubit`` defaults to the last one; both reference states are symmetric
    under qubit permutations so the position only matters for ``noisy_cut``.
    """
    tag = _reference_state(cls, n_qubits)[1]
    qubit = n_qubits if qubit is None else qubit
    key = (tuple(k.tobytes() for k in channel.operators), tag, n_qubits, qubit, measure, renormalize)
    hit = _FACTOR_CACHE.get(key)
    if hit is None:
        rho = _reference_state(tag, n_qubits)[0].density()
        before = measure_value(rho, measure, qubit)
        after = measure_value(apply(channel, rho, qubit, renormalize), measure, qubit)
        if len(_FACTOR_CACHE) > 8192:
            _FACTOR_CACHE.clear()
        hit = _FACTOR_CACHE[key] = (after / before, after)
    return ChannelFactor(hit[0], hit[1], tag, channel.label, channel.t)


def verify_pure_evolution(psi, channel, qubit, cls=None, measure="tau"):
    """Pure-state factorisation ``E(S psi) = factor(S) * E(psi)``.

    For three qubits the class is found from the 3-tangle; for more qubits the
    caller names it (``"GHZ"`` or ``"W"``).
    """
    if not isinstance(psi, PureState):
        raise TypeError("verify_pure_evolution takes a PureState")
    n = psi.n_qubits
    if cls is None:
        if n != 3:
            raise ValueError("class must be given explicitly for registers other than 3 qubits")
        tag = classify(psi).tag
        if tag == UNENTANGLED:
            return _report(0.0, 0.0, UNENTANGLED, channel)
        cls = _CLASS_TO_STATE[tag]
    rho = psi.density()
    lhs = measure_value(apply(channel, rho, qubit), measure, qubit)
    factor = channel_factor(channel, cls, n, qubit, measure)
    rhs = factor.value * measure_value(rho, measure, qubit)
    return _report(lhs, rhs, factor.maximally_entangled_class, channel)


def cut_independence_check(psi, channel):
    """Spread of the noisy-cut concurrence as the channel moves across qubits.

    Compares cut 12|3 with the channel on qubit 3, 13|2 with it on qubit 2 and
    23|1 with it on qubit 1; returns the largest pairwise difference.
    """
    if not isinstance(psi, PureState) or psi.n_qubits != 3:
        raise ValueError("cut independence is defined for three-qubit pure states")
    rho = psi.density()
    vals = [cut_concurrence(apply(channel, rho, q), q) for q in (3, 2, 1)]
    return float(max(vals) - min(vals))


def verify_mixed_bound(rho0, channel, qubit, class_override=None, measure="tau", p=None,
                       renormalize=True):
    """Mixed-state inequality ``E(S rho0) <= factor(S) * E(rho0)``.

    Without an override both reference classes are evaluated and the larger
    right-hand side is reported; both values are kept in the report.
    """
    rho0 = as_density(rho0)
    n = rho0.n_qubits
    lhs = measure_value(apply(channel, rho0, qubit, renormalize), measure, qubit)
    base = measure_value(rho0, measure, qubit)
    rhs_ghz = channel_factor(channel, GHZ, n, qubit, measure, renormalize).value * base
    rhs_w = channel_factor(channel, W, n, qubit, measure, renormalize).value * base
    if class_override is None:
        cls = GHZ if rhs_ghz >= rhs_w else W
    else:
        cls = _reference_state(class_override, n)[1]
    rhs = rhs_ghz if cls == GHZ else rhs_w
    return _report(lhs, rhs, cls, channel, p, rhs_ghz, rhs_w)


def mixture_class(p):
    """Reference class used for the GHZ-W mixture: GHZ above p = 1/2."""
    return GHZ if p > 0.5 else W


def verify_mixture(p, channel, qubit=3, measure="tau", renormalize=True):
    return verify_mixed_bound(ghz_w_mixture(p), channel, qubit, mixture_class(p), measure, p,
                              renormalize)


def verify_two_sided(rho0, ch1, ch2, qubits, class_override=None):
    """Two local channels: ``tau(S1 S2 rho0) <= f(S1) f(S2) tau(rho0)``."""
    rho0 = as_density(rho0)
    q1, q2 = qubits
    if q1 == q2:
        raise ValueError("two-sided channels need distinct qubits")
    n = rho0.n_qubits
    lhs = tau_lower_bound(apply(ch2, apply(ch1, rho0, q1), q2))
    base = tau_lower_bound(rho0)
    rhs = {}
    for cls in (GHZ, W):
        f1 = channel_factor(ch1, cls, n, q1).value
        f2 = channel_factor(ch2, cls, n, q2).value
        rhs[cls] = f1 * f2 * base
    if class_override is None:
        cls = GHZ if rhs[GHZ] >= rhs[W] else W
    else:
        cls = _reference_state(class_override, n)[1]
    label = f"{ch1.label}+{ch2.label}"
    t = (ch1.t, ch2.t)
    return EvolutionReport(lhs, rhs[cls], rhs[cls] - lhs, cls, label, t, None, rhs[GHZ], rhs[W])


def sudden_death_time(rho0, family, qubit, t_max, tol=1e-6, measure="tau",
                      n_grid=256, resolution=1e-4, renormalize=True):
    """Earliest time after which the evolved bound stays at or below ``tol``.

    ``family`` maps a time to a :class:`~entevo.channels.KrausChannel`.  The
    bound is scanned on ``n_grid`` points of ``[0, t_max]`` and the last
    crossing is bisected down to ``resolution``.  Returns ``None`` when the
    bound is still above ``tol`` at ``t_max``.
    """
    if t_max <= 0 or tol <= 0:
        raise ValueError("t_max and tol must be positive")
    rho0 = as_density(rho0)

    def value(t):
        return measure_value(apply(family(t), rho0, qubit, renormalize), measure, qubit)

    grid = np.linspace(0.0, t_max, n_grid)
    vals = np.array([value(t) for t in grid])
    if vals[-1] > tol:
        return None
    alive = np.nonzero(vals > tol)[0]
    if alive.size == 0:
        return float(grid[0])
    lo, hi = grid[alive[-1]], grid[alive[-1] + 1]
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if value(mid) > tol:
            lo = mid
        else:
            hi = mid
    return float(hi)
