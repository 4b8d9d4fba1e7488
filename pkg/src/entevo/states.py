"""Qubit register states: GHZ, W, their rank-2 mixture and seeded random states."""
import json
from dataclasses import dataclass

import numpy as np

from .linalg import (
    HERMITIAN_TOL,
    PSD_TOL,
    DimensionError,
    NotHermitianError,
    NotPSDError,
    as_matrix,
    eig_hermitian,
    max_qubits,
    n_qubits_of,
)

UNIT_TRACE = "unit-trace"
SUB_NORMALIZED = "sub-normalized"


def _frozen(a):
    a = np.array(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes).reshape(-1)
        object.__setattr__(self, "amplitudes", amps)
        if self.n_qubits < 1 or amps.size != 2**self.n_qubits:
            raise DimensionError(f"{amps.size} amplitudes do not form a {self.n_qubits}-qubit state")
        if self.n_qubits > max_qubits():
            raise ValueError(f"{self.n_qubits} qubits exceed the register cap {max_qubits()}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("non-finite amplitudes")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state norm^2 is {norm!r}, expected 1")

    def density(self):
        return DensityMatrix(self.n_qubits, np.outer(self.amplitudes, self.amplitudes.conj()))

    @classmethod
    def from_vector(cls, vec):
        vec = np.asarray(vec, dtype=np.complex128).reshape(-1)
        return cls(n_qubits_of(vec.size), vec / np.linalg.norm(vec))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    n_qubits: int
    mat: np.ndarray
    trace_convention: str = UNIT_TRACE

    def __post_init__(self):
        mat = _frozen(as_matrix(self.mat))
        object.__setattr__(self, "mat", mat)
        if mat.shape[0] != 2**self.n_qubits:
            raise DimensionError(f"matrix of dim {mat.shape[0]} is not a {self.n_qubits}-qubit state")
        if self.n_qubits > max_qubits():
            raise ValueError(f"{self.n_qubits} qubits exceed the register cap {max_qubits()}")
        if self.trace_convention not in (UNIT_TRACE, SUB_NORMALIZED):
            raise ValueError(f"unknown trace convention {self.trace_convention!r}")
        norm = np.linalg.norm(mat, 2)
        if np.abs(mat - mat.conj().T).max() > HERMITIAN_TOL * max(norm, 1.0):
            raise NotHermitianError("density matrix is not Hermitian")
        tr = np.trace(mat).real
        if self.trace_convention == UNIT_TRACE:
            if abs(tr - 1.0) > 1e-10:
                raise ValueError(f"trace {tr!r} is not 1")
        elif not 0.0 < tr <= 1.0 + 1e-10:
            raise ValueError(f"sub-normalized trace {tr!r} outside (0, 1]")
        if eig_hermitian(mat)[-1] < -PSD_TOL * tr:
            raise NotPSDError("density matrix is not positive semidefinite")

    @property
    def trace(self):
        return float(np.trace(self.mat).real)

    def normalized(self):
        return DensityMatrix(self.n_qubits, self.mat / self.trace)

    def scaled(self, alpha):
        conv = UNIT_TRACE if alpha == 1 and self.trace_convention == UNIT_TRACE else SUB_NORMALIZED
        return DensityMatrix(self.n_qubits, alpha * self.mat, conv)


def as_density(state):
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, PureState):
        return state.density()
    raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def basis_state(bits):
    """Computational basis ket from a label such as ``"010"``."""
    n = len(bits)
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[int(bits, 2)] = 1.0
    return PureState(n, amps)


def ghz(n):
    if n < 2:
        raise ValueError("GHZ state needs at least 2 qubits")
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[0] = amps[-1] = 1.0 / np.sqrt(2.0)
    return PureState(n, amps)


def w(n):
    if n < 2:
        raise ValueError("W state needs at least 2 qubits")
    amps = np.zeros(2**n, dtype=np.complex128)
    amps[[1 << k for k in range(n)]] = 1.0 / np.sqrt(n)
    return PureState(n, amps)


def ghz_w_mixture(p):
    """``p |GHZ><GHZ| + (1 - p) |W><W|`` on three qubits."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing weight {p} outside [0, 1]")
    g = ghz(3).amplitudes
    v = w(3).amplitudes
    mat = p * np.outer(g, g.conj()) + (1.0 - p) * np.outer(v, v.conj())
    return DensityMatrix(3, mat)


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_pure(n, seed):
    """Haar-random ``n``-qubit ket; ``seed`` may also be a ``Generator``."""
    rng = _rng(seed)
    z = rng.standard_normal(2**n) + 1j * rng.standard_normal(2**n)
    return PureState(n, z / np.linalg.norm(z))


def random_rank2(n, seed):
    """``q |a><a| + (1 - q) |b><b|`` with Haar ``a``, ``b`` and uniform ``q``."""
    if n < 2:
        raise ValueError("random_rank2 needs at least 2 qubits")
    rng = _rng(seed)
    a = random_pure(n, rng).amplitudes
    b = random_pure(n, rng).amplitudes
    q = rng.uniform()
    mat = q * np.outer(a, a.conj()) + (1.0 - q) * np.outer(b, b.conj())
    return DensityMatrix(n, mat)


def random_density(n, seed, rank=None):
    """Random mixed state from a Ginibre matrix of the given rank (full by default)."""
    rng = _rng(seed)
    d = 2**n
    rank = d if rank is None else rank
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    mat = g @ g.conj().T
    return DensityMatrix(n, mat / np.trace(mat).real)


def random_unitary(dim, seed):
    """Haar unitary via QR of a complex Ginibre matrix with phase fix."""
    rng = _rng(seed)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_local_unitary(n, seed):
    rng = _rng(seed)
    u = np.ones((1, 1), dtype=np.complex128)
    for _ in range(n):
        u = np.kron(u, random_unitary(2, rng))
    return u


# -- JSON state files -------------------------------------------------------

def _pairs(values):
    return [[float(z.real), float(z.imag)] for z in values]


def _complex(pairs):
    arr = np.asarray(pairs, dtype=float)
    if arr.shape[-1] != 2:
        raise ValueError("complex entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def state_to_json(state):
    if isinstance(state, PureState):
        return {"n_qubits": state.n_qubits, "kind": "pure", "amplitudes": _pairs(state.amplitudes)}
    rho = as_density(state)
    return {"n_qubits": rho.n_qubits, "kind": "density", "rho": [_pairs(row) for row in rho.mat]}


def state_from_json(obj):
    if "amplitudes" in obj and obj.get("kind", "pure") == "pure":
        amps = _complex(obj["amplitudes"])
        n = int(obj.get("n_qubits", n_qubits_of(amps.size)))
        return PureState(n, amps)
    if "rho" in obj:
        mat = _complex(obj["rho"])
        n = int(obj.get("n_qubits", n_qubits_of(mat.shape[0])))
        tr = np.trace(mat).real
        conv = UNIT_TRACE if abs(tr - 1.0) <= 1e-10 else SUB_NORMALIZED
        return DensityMatrix(n, mat, conv)
    raise ValueError("state JSON needs 'amplitudes' (pure) or 'rho' (density)")


def load_state(path):
    with open(path) as fh:
        return state_from_json(json.load(fh))


def save_state(state, path):
    with open(path, "w") as fh:
        json.dump(state_to_json(state), fh, indent=1)
