"""Entanglement quantities for qubit registers.

The lower bound to the N-qubit concurrence is assembled from one-vs-rest
bipartite cuts.  For the cut that separates qubit ``n``, the generator
``S_k = L_k (x) sigma_y`` built from the SO(2^(N-1)) generator ``L_k`` of the
pair ``(a, b)`` touches only the four basis states ``|a0>, |a1>, |b0>, |b1>``
(after moving qubit ``n`` last).  Each ``C_k`` is therefore the Wootters
concurrence of the matching 4x4 principal block of the density matrix, which
is what the compiled kernel evaluates.  ``method="dense"`` keeps the full
``S_k rho^* S_k`` construction for cross-checking.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize

from . import _kernels
from .linalg import (
    eig_hermitian,
    inverse_permutation,
    max_qubits,
    partial_trace,
    permute_qubits,
    psd_sqrt,
    singular_values,
)
from .states import PureState, as_density

log = logging.getLogger(__name__)

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
CLASS_THRESHOLD = 1e-8
FIFTH_EIGENVALUE_TOL = 1e-8
RANK_TOL = 1e-14

GHZ_CLASS = "GHZ_class"
W_CLASS = "W_class"
UNENTANGLED = "unentangled"


def generator_count(n_qubits):
    return 2 ** (n_qubits - 2) * (2 ** (n_qubits - 1) - 1)


@dataclass(frozen=True)
class BipartitionCut:
    separated_qubit: int
    n_qubits: int

    def __post_init__(self):
        if not 1 <= self.separated_qubit <= self.n_qubits:
            raise IndexError(f"cut qubit {self.separated_qubit} out of range 1..{self.n_qubits}")

    def to_last(self):
        """Permutation moving the separated qubit to the last position."""
        rest = [q for q in range(1, self.n_qubits + 1) if q != self.separated_qubit]
        return rest + [self.separated_qubit]

    def __str__(self):
        rest = "".join(str(q) for q in range(1, self.n_qubits + 1) if q != self.separated_qubit)
        return f"{rest}|{self.separated_qubit}"


@dataclass(frozen=True, eq=False)
class GeneratorSet:
    cut: BipartitionCut
    n_qubits: int
    operators: tuple


@dataclass(frozen=True, eq=False)
class ConcurrenceTerms:
    cut: BipartitionCut
    c_k: np.ndarray
    lambda_lists: np.ndarray
    fifth_eigenvalue: float = 0.0

    @property
    def cut_concurrence(self):
        return float(np.sqrt(np.sum(self.c_k**2)))


@dataclass(frozen=True)
class EntanglementClass:
    tag: str
    three_tangle: float


def _cut(rho, cut):
    if isinstance(cut, BipartitionCut):
        if cut.n_qubits != rho.n_qubits:
            raise ValueError("cut and state disagree on the number of qubits")
        return cut
    return BipartitionCut(int(cut), rho.n_qubits)


def _check_size(n):
    if n < 2:
        raise ValueError("entanglement measures need at least 2 qubits")
    if n > max_qubits():
        raise ValueError(f"{n} qubits exceed the register cap {max_qubits()}")


def pure_concurrence(psi):
    """``sqrt(1 - mean_i Tr rho_i^2)`` over single-qubit marginals."""
    if not isinstance(psi, PureState):
        raise TypeError("pure_concurrence takes a PureState")
    n = psi.n_qubits
    _check_size(n)
    rho = np.outer(psi.amplitudes, psi.amplitudes.conj())
    purity = 0.0
    for i in range(1, n + 1):
        r = partial_trace(rho, n, [q for q in range(1, n + 1) if q != i])
        purity += np.vdot(r, r).real
    return float(np.sqrt(max(0.0, 1.0 - purity / n)))


@lru_cache(maxsize=None)
def _so_generators(d):
    out = []
    for m, n in itertools.combinations(range(d), 2):
        g = np.zeros((d, d), dtype=np.complex128)
        g[m, n] = -1j
        g[n, m] = 1j
        g.setflags(write=False)
        out.append(g)
    return tuple(out)


def so_generators(d):
    """Generators ``-i(|m><n| - |n><m|)`` for pairs ``m < n`` in lexicographic order."""
    if d < 2:
        raise ValueError("SO(d) generators need d >= 2")
    return list(_so_generators(d))


@lru_cache(maxsize=None)
def _generator_set(n_qubits, separated):
    cut = BipartitionCut(separated, n_qubits)
    back = inverse_permutation(cut.to_last())
    ops = []
    for lk in _so_generators(2 ** (n_qubits - 1)):
        s = permute_qubits(np.kron(lk, SIGMA_Y), n_qubits, back)
        s.setflags(write=False)
        ops.append(s)
    return GeneratorSet(cut, n_qubits, tuple(ops))


def generator_set(n_qubits, cut):
    """``S_k = L_k (x) sigma_y`` positioned for ``cut`` in the original qubit order."""
    _check_size(n_qubits)
    separated = cut.separated_qubit if isinstance(cut, BipartitionCut) else int(cut)
    BipartitionCut(separated, n_qubits)
    return _generator_set(n_qubits, separated)


def psd_factor(rho, rank_tol=RANK_TOL):
    """``x`` with ``rho = x x^H``, dropping eigenvalues below ``rank_tol * max``.

    Rounding leaves eigenvalues of order 1e-17 in place of exact zeros; their
    square roots would otherwise inject spurious spin-flip values near 1e-9.
    """
    w, v = eig_hermitian(rho, vectors=True)
    keep = w > rank_tol * max(w[0], 0.0)
    if not np.any(keep):
        return np.zeros((rho.shape[0], 1), dtype=np.complex128)
    return v[:, keep] * np.sqrt(w[keep])


def _terms_from_lambdas(cut, lam, fifth=0.0):
    lam = np.clip(lam, 0.0, None)
    c = np.clip(lam[:, 0] - lam[:, 1] - lam[:, 2] - lam[:, 3], 0.0, None)
    return ConcurrenceTerms(cut, c, lam, float(fifth))


def _block_terms(x, n_qubits, cut):
    axes = [q - 1 for q in cut.to_last()]
    moved = x.reshape((2,) * n_qubits + (-1,)).transpose(axes + [n_qubits])
    lam = _kernels.block_lambdas(moved.reshape(x.shape), 2 ** (n_qubits - 1))
    return _terms_from_lambdas(cut, lam)


def _dense_lambdas(rho, gens):
    root = psd_sqrt(rho)
    lam, fifth = [], 0.0
    for s in gens.operators:
        sv = singular_values(root @ s @ root.conj())
        lam.append(sv[:4])
        if sv.size > 4:
            fifth = max(fifth, sv[4] ** 2)
    return np.array(lam), fifth


def c_k_terms(rho, cut, method="block"):
    """All ``C_k`` of one cut, with the four leading spin-flip roots per ``k``.

    The ``lambda`` values are the square roots of the leading eigenvalues of
    ``rho S_k rho^* S_k``.  They are obtained as singular values of
    ``x^T S_k x`` for a factor ``rho = x x^H`` (the dense route uses
    ``x = sqrt(rho)``, making the Gram matrix the Hermitian form
    ``sqrt(rho) S_k rho^* S_k sqrt(rho)``), so that near-zero values keep full
    absolute precision.
    """
    rho = as_density(rho)
    _check_size(rho.n_qubits)
    cut = _cut(rho, cut)
    if method == "block":
        return _block_terms(psd_factor(rho.mat), rho.n_qubits, cut)
    if method == "dense":
        lam, fifth = _dense_lambdas(rho.mat, generator_set(rho.n_qubits, cut))
        if fifth > FIFTH_EIGENVALUE_TOL * rho.trace**2:
            log.warning("cut %s: fifth eigenvalue %.3e of rho*rho_tilde is not negligible", cut, fifth)
        return _terms_from_lambdas(cut, lam, fifth)
    raise ValueError(f"unknown method {method!r}")


def cut_concurrence(rho, cut, method="block"):
    """``sqrt(sum_k C_k^2)`` for a single one-vs-rest cut."""
    return c_k_terms(rho, cut, method).cut_concurrence


def cut_breakdown(rho, method="block"):
    """:class:`ConcurrenceTerms` for every cut ``n = 1..N``."""
    rho = as_density(rho)
    _check_size(rho.n_qubits)
    n = rho.n_qubits
    if method == "block":
        x = psd_factor(rho.mat)
        return [_block_terms(x, n, BipartitionCut(q, n)) for q in range(1, n + 1)]
    return [c_k_terms(rho, q, method) for q in range(1, n + 1)]


def tau_lower_bound(rho, method="block"):
    """``sqrt((1/N) sum_n sum_k (C_k^n)^2)`` over all one-vs-rest cuts."""
    rho = as_density(rho)
    total = sum(np.sum(t.c_k**2) for t in cut_breakdown(rho, method))
    return float(np.sqrt(total / rho.n_qubits))


def wootters_concurrence(rho):
    rho = as_density(rho)
    if rho.n_qubits != 2:
        raise ValueError("Wootters concurrence is defined for two qubits")
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    root = psd_sqrt(rho.mat)
    lam = singular_values(root @ yy @ root.conj())
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def three_tangle(psi):
    """Coffman-Kundu-Wootters residual tangle from the amplitude hyperdeterminant."""
    if not isinstance(psi, PureState) or psi.n_qubits != 3:
        raise ValueError("three_tangle takes a three-qubit PureState")
    a = psi.amplitudes.reshape(2, 2, 2)
    d1 = (a[0, 0, 0] ** 2 * a[1, 1, 1] ** 2 + a[0, 0, 1] ** 2 * a[1, 1, 0] ** 2
          + a[0, 1, 0] ** 2 * a[1, 0, 1] ** 2 + a[1, 0, 0] ** 2 * a[0, 1, 1] ** 2)
    d2 = (a[0, 0, 0] * a[1, 1, 1] * a[0, 1, 1] * a[1, 0, 0]
          + a[0, 0, 0] * a[1, 1, 1] * a[1, 0, 1] * a[0, 1, 0]
          + a[0, 0, 0] * a[1, 1, 1] * a[1, 1, 0] * a[0, 0, 1]
          + a[0, 1, 1] * a[1, 0, 0] * a[1, 0, 1] * a[0, 1, 0]
          + a[0, 1, 1] * a[1, 0, 0] * a[1, 1, 0] * a[0, 0, 1]
          + a[1, 0, 1] * a[0, 1, 0] * a[1, 1, 0] * a[0, 0, 1])
    d3 = (a[0, 0, 0] * a[1, 1, 0] * a[1, 0, 1] * a[0, 1, 1]
          + a[1, 1, 1] * a[0, 0, 1] * a[0, 1, 0] * a[1, 0, 0])
    return float(min(1.0, 4.0 * abs(d1 - 2.0 * d2 + 4.0 * d3)))


def classify(psi):
    """GHZ class if the 3-tangle is nonzero, W class if otherwise entangled."""
    tangle = three_tangle(psi)
    if tangle > CLASS_THRESHOLD:
        return EntanglementClass(GHZ_CLASS, tangle)
    if pure_concurrence(psi) > CLASS_THRESHOLD:
        return EntanglementClass(W_CLASS, tangle)
    return EntanglementClass(UNENTANGLED, tangle)


# -- convex roof ------------------------------------------------------------

MAX_ROOF_RANK = 8


def _marginal_purities(vecs, n):
    """Sum over qubits of ``Tr(rho_i^2)`` for each (unnormalised) row vector."""
    t = vecs.reshape((vecs.shape[0],) + (2,) * n)
    total = np.zeros(vecs.shape[0])
    for i in range(n):
        m = np.moveaxis(t, i + 1, 1).reshape(vecs.shape[0], 2, -1)
        r = m @ np.conj(np.swapaxes(m, 1, 2))
        total += np.einsum("kab,kab->k", r, r.conj()).real
    return total


def _average_concurrence(unitary_params, m, r, basis, n):
    u = _unitary_from_params(unitary_params, m)[:, :r]
    vecs = u @ basis
    p = np.einsum("ki,ki->k", vecs, vecs.conj()).real
    c2 = p**2 - _marginal_purities(vecs, n) / n
    return float(np.sum(np.sqrt(np.clip(c2, 0.0, None))))


def _unitary_from_params(x, m):
    h = np.zeros((m, m), dtype=np.complex128)
    iu = np.triu_indices(m, 1)
    k = len(iu[0])
    h[iu] = x[:k] + 1j * x[k : 2 * k]
    h = h + h.conj().T + np.diag(x[2 * k :])
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def convex_roof_estimate(rho, restarts=64, seed=0):
    """Upper estimate of the convex roof of :func:`pure_concurrence`.

    Decompositions are ``|psi_i~> = sum_j U_ij sqrt(w_j) |e_j>`` over the
    eigenbasis of ``rho``, with ``U`` the leading ``r`` columns of an
    ``m x m`` unitary, ``m = 2r``.  Each restart draws a random unitary from
    its own child seed and refines it with L-BFGS; the best value seen is
    returned, so more restarts never give a larger estimate.
    """
    rho = as_density(rho).normalized()
    n = rho.n_qubits
    _check_size(n)
    w, v = eig_hermitian(rho.mat, vectors=True)
    keep = w > 1e-12 * w[0]
    r = int(np.count_nonzero(keep))
    if r > MAX_ROOF_RANK:
        raise ValueError(f"rank {r} exceeds the convex-roof cap {MAX_ROOF_RANK}")
    if r == 1:
        return pure_concurrence(PureState.from_vector(v[:, 0]))
    basis = (v[:, keep] * np.sqrt(w[keep])).T
    m = 2 * r
    n_params = m * m
    args = (m, r, basis, n)

    best = _average_concurrence(np.zeros(n_params), *args)
    children = np.random.SeedSequence(seed).spawn(restarts)
    for child in children:
        rng = np.random.default_rng(child)
        x0 = rng.normal(scale=np.pi, size=n_params)
        res = minimize(_average_concurrence, x0, args=args, method="L-BFGS-B", options={"maxiter": 300})
        best = min(best, float(res.fun), _average_concurrence(x0, *args))
    return best
