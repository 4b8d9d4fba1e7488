"""Single-qubit Kraus channels and their action on one qubit of a register."""
from dataclasses import dataclass, field

import numpy as np

from .linalg import eig_hermitian
from .states import SUB_NORMALIZED, UNIT_TRACE, DensityMatrix, as_density

PHASE_DAMPING = "phase_damping"
AMPLITUDE_DAMPING = "amplitude_damping"
GENERALIZED_AMPLITUDE_DAMPING = "generalized_amplitude_damping"
CUSTOM = "custom"

TRACE_PRESERVING = "trace_preserving"
SUB_NORMALIZED_CHANNEL = "sub_normalized"

COMPLETENESS_TOL = 1e-10

SHORT_NAMES = {
    "pd": PHASE_DAMPING,
    "ad": AMPLITUDE_DAMPING,
    "gad": GENERALIZED_AMPLITUDE_DAMPING,
}


@dataclass(frozen=True, eq=False)
class KrausChannel:
    label: str
    operators: tuple
    completeness: str = TRACE_PRESERVING
    gamma: float = None
    t: float = None

    def __post_init__(self):
        ops = []
        for k in self.operators:
            k = np.array(k, dtype=np.complex128)
            if k.shape != (2, 2):
                raise ValueError(f"Kraus operators must be 2x2, got {k.shape}")
            k.setflags(write=False)
            ops.append(k)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        object.__setattr__(self, "operators", tuple(ops))
        top = eig_hermitian(self.effect())[0]
        if top > 1.0 + COMPLETENESS_TOL:
            raise ValueError(f"sum K^dag K has eigenvalue {top!r} > 1")
        if self.completeness == TRACE_PRESERVING and completeness_defect(self) > COMPLETENESS_TOL:
            raise ValueError("operators are not trace preserving")
        if self.completeness not in (TRACE_PRESERVING, SUB_NORMALIZED_CHANNEL):
            raise ValueError(f"unknown completeness {self.completeness!r}")

    @property
    def gamma_t(self):
        if self.gamma is None or self.t is None:
            return None
        return self.gamma * self.t

    def effect(self):
        """``sum_i K_i^dag K_i``."""
        return sum(k.conj().T @ k for k in self.operators)


def _decay(params):
    gamma, t = params
    if gamma < 0 or t < 0:
        raise ValueError("coupling constant and time must be non-negative")
    return float(np.exp(-gamma * t)), float(np.sqrt(-np.expm1(-2.0 * gamma * t)))


def identity_channel():
    return KrausChannel(CUSTOM, (np.eye(2),), TRACE_PRESERVING, 0.0, 0.0)


def phase_damping(gamma, t):
    e, s = _decay((gamma, t))
    return KrausChannel(
        PHASE_DAMPING, (np.diag([e, 1.0]), np.diag([s, 0.0])), TRACE_PRESERVING, gamma, t
    )


def amplitude_damping(gamma, t):
    e, s = _decay((gamma, t))
    k2 = np.array([[0.0, s], [0.0, 0.0]])
    return KrausChannel(AMPLITUDE_DAMPING, (np.diag([1.0, e]), k2), TRACE_PRESERVING, gamma, t)


def generalized_amplitude_damping(gamma, t, mode="trace_preserving"):
    """Two opposed amplitude-damping branches.

    ``mode="literal"`` keeps the 1/2 prefactors on all four operators,
    which sums the effects to I/2; ``"trace_preserving"`` uses 1/sqrt(2).
    """
    e, s = _decay((gamma, t))
    if mode in ("literal", "verbatim"):
        c, completeness = 0.5, SUB_NORMALIZED_CHANNEL
    elif mode in ("trace_preserving", "tp"):
        c, completeness = 1.0 / np.sqrt(2.0), TRACE_PRESERVING
    else:
        raise ValueError(f"unknown GAD mode {mode!r}")
    ops = (
        c * np.diag([1.0, e]),
        c * np.array([[0.0, s], [0.0, 0.0]]),
        c * np.diag([e, 1.0]),
        c * np.array([[0.0, 0.0], [s, 0.0]]),
    )
    return KrausChannel(GENERALIZED_AMPLITUDE_DAMPING, ops, completeness, gamma, t)


def completeness_defect(channel):
    """Spectral norm of ``sum K^dag K - I``."""
    w = eig_hermitian(channel.effect() - np.eye(2))
    return float(np.abs(w).max())


def apply(channel, rho, qubit, renormalize=True):
    """Act with ``channel`` on the 1-based ``qubit`` of ``rho``."""
    rho = as_density(rho)
    n = rho.n_qubits
    if not 1 <= qubit <= n:
        raise IndexError(f"qubit {qubit} out of range 1..{n}")
    left, right = 2 ** (qubit - 1), 2 ** (n - qubit)
    t = rho.mat.reshape(left, 2, right, left, 2, right)
    out = np.zeros_like(t)
    for k in channel.operators:
        out += np.einsum("ab,ibjkcl,dc->iajkdl", k, t, k.conj(), optimize=False)
    mat = out.reshape(rho.mat.shape)
    mat = 0.5 * (mat + mat.conj().T)
    tr = np.trace(mat).real
    if renormalize:
        if tr <= 0:
            raise ValueError("channel output has zero trace; cannot renormalize")
        return DensityMatrix(n, mat / tr, UNIT_TRACE)
    sub = channel.completeness == SUB_NORMALIZED_CHANNEL or rho.trace_convention == SUB_NORMALIZED
    if sub or abs(tr - 1.0) > 1e-10:
        return DensityMatrix(n, mat, SUB_NORMALIZED)
    return DensityMatrix(n, mat, UNIT_TRACE)


@dataclass(frozen=True)
class ChannelFamily:
    """A channel label and coupling constant, evaluated at a time ``t``."""

    label: str
    gamma: float = 1.0
    mode: str = "trace_preserving"
    custom: tuple = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "label", SHORT_NAMES.get(self.label, self.label))
        if self.label not in (PHASE_DAMPING, AMPLITUDE_DAMPING, GENERALIZED_AMPLITUDE_DAMPING, CUSTOM):
            raise ValueError(f"unknown channel {self.label!r}")
        if self.gamma < 0:
            raise ValueError("coupling constant must be non-negative")
        if self.label == CUSTOM and not self.custom:
            raise ValueError("custom channel needs explicit operators")

    def __call__(self, t):
        if self.label == PHASE_DAMPING:
            return phase_damping(self.gamma, t)
        if self.label == AMPLITUDE_DAMPING:
            return amplitude_damping(self.gamma, t)
        if self.label == GENERALIZED_AMPLITUDE_DAMPING:
            return generalized_amplitude_damping(self.gamma, t, self.mode)
        ops = tuple(np.asarray(k) for k in self.custom)
        effect = sum(k.conj().T @ k for k in ops)
        tp = np.abs(effect - np.eye(2)).max() <= COMPLETENESS_TOL
        return KrausChannel(CUSTOM, ops, TRACE_PRESERVING if tp else SUB_NORMALIZED_CHANNEL)

    @property
    def short_name(self):
        inv = {v: k for k, v in SHORT_NAMES.items()}
        return inv.get(self.label, self.label)


def family_from_dict(desc):
    """Build a :class:`ChannelFamily` from its JSON description."""
    name = desc["channel"]
    gamma = float(desc.get("gamma", 1.0))
    mode = desc.get("mode", "tp")
    mode = "trace_preserving" if mode == "tp" else mode
    if name == "custom":
        ops = []
        for op in desc["operators"]:
            arr = np.asarray(op, dtype=float)
            ops.append(arr[..., 0] + 1j * arr[..., 1])
        return ChannelFamily(CUSTOM, gamma, mode, tuple(ops))
    if name not in SHORT_NAMES:
        raise ValueError(f"unknown channel {name!r}; expected pd, ad, gad or custom")
    return ChannelFamily(name, gamma, mode)


def family_to_dict(family):
    desc = {"channel": family.short_name, "gamma": family.gamma,
            "mode": "literal" if family.mode == "literal" else "tp"}
    if family.label == CUSTOM:
        desc["operators"] = [[[[z.real, z.imag] for z in row] for row in k] for k in family.custom]
    return desc
