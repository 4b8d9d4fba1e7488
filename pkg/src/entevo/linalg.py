"""Dense complex matrix algebra for qubit registers.

Matrices are plain ``numpy`` complex arrays.  Qubits are numbered from 1 and
qubit 1 is the leftmost tensor factor, i.e. the most significant bit of the
computational-basis label.
"""
import os

import numpy as np

from . import _kernels
from ._backend import BACKEND

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-9
MAX_JACOBI_SWEEPS = 60
# Cyclic Jacobi beats LAPACK call overhead only on small matrices.
JACOBI_MAX_DIM = 8


class DimensionError(ValueError):
    pass


class NotHermitianError(ValueError):
    pass


class NotPSDError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


def max_qubits():
    """Register cap; ``CONCURRENCE_MAX_QUBITS`` overrides the default of 6."""
    return int(os.environ.get("CONCURRENCE_MAX_QUBITS", "6"))


def as_matrix(a):
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def n_qubits_of(dim):
    n = int(dim).bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


def _check_register(rho, n_qubits):
    rho = as_matrix(rho)
    if rho.shape[0] != 2**n_qubits:
        raise DimensionError(f"matrix of dim {rho.shape[0]} is not a {n_qubits}-qubit operator")
    return rho


def kron(a, b):
    a = as_matrix(a)
    b = as_matrix(b)
    dim = a.shape[0] * b.shape[0]
    if dim > 2 ** max_qubits():
        raise DimensionError(f"kron result of dim {dim} exceeds the {max_qubits()}-qubit cap")
    return np.kron(a, b)


def partial_trace(rho, n_qubits, traced):
    """Trace out the (1-based) qubits in ``traced``."""
    rho = _check_register(rho, n_qubits)
    traced = sorted(set(traced))
    for q in traced:
        if not 1 <= q <= n_qubits:
            raise IndexError(f"qubit {q} out of range 1..{n_qubits}")
    keep = [q for q in range(n_qubits) if q + 1 not in traced]
    t = rho.reshape([2] * (2 * n_qubits))
    gone = [q - 1 for q in traced]
    letters = list(range(2 * n_qubits))
    for q in gone:
        letters[n_qubits + q] = letters[q]
    out = [letters[q] for q in keep] + [letters[n_qubits + q] for q in keep]
    reduced = np.einsum(t, letters, out)
    d = 2 ** len(keep)
    return reduced.reshape(d, d)


def permute_qubits(rho, n_qubits, perm):
    """Relabel qubits: new position ``j`` (1-based) holds old qubit ``perm[j-1]``."""
    rho = _check_register(rho, n_qubits)
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(1, n_qubits + 1)):
        raise ValueError(f"{perm} is not a permutation of 1..{n_qubits}")
    axes = [p - 1 for p in perm]
    t = rho.reshape([2] * (2 * n_qubits)).transpose(axes + [n_qubits + a for a in axes])
    return t.reshape(rho.shape)


def inverse_permutation(perm):
    inv = [0] * len(perm)
    for j, p in enumerate(perm, start=1):
        inv[p - 1] = j
    return inv


def is_hermitian(h, tol=HERMITIAN_TOL):
    h = np.asarray(h)
    scale = max(np.linalg.norm(h, 2), 1.0) if h.size else 1.0
    return np.abs(h - h.conj().T).max() <= tol * scale


def eig_hermitian(h, vectors=False):
    """Eigenvalues of a Hermitian matrix in descending order.

    With ``vectors=True`` also returns the unitary whose columns are the
    matching eigenvectors.
    """
    h = as_matrix(h)
    if not is_hermitian(h):
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    if BACKEND == "numba" and h.shape[0] <= JACOBI_MAX_DIM:
        w, v, sweeps = _kernels.jacobi_eigh_nb(h, 1e-15, MAX_JACOBI_SWEEPS)
        if sweeps < 0:
            raise ConvergenceError(f"Jacobi did not converge in {MAX_JACOBI_SWEEPS} sweeps")
    else:
        w, v = _kernels.jacobi_eigh_np(h)
    return (w, v) if vectors else w


def psd_sqrt(rho):
    """Principal square root of a positive semidefinite matrix."""
    rho = as_matrix(rho)
    w, v = eig_hermitian(rho, vectors=True)
    scale = max(abs(np.trace(rho).real), np.abs(w).max(initial=0.0))
    if w.size and w[-1] < -PSD_TOL * max(scale, 1e-300):
        raise NotPSDError(f"eigenvalue {w[-1]:.3e} below -{PSD_TOL:g} * trace")
    s = np.sqrt(np.clip(w, 0.0, None))
    return (v * s) @ v.conj().T


def singular_values(a):
    """Singular values (descending), read off the Hermitian dilation.

    ``[[0, a], [a^H, 0]]`` has eigenvalues ``+-s_i`` so small singular values
    keep absolute accuracy instead of losing half their digits to a square root.
    """
    a = as_matrix(a)
    n = a.shape[0]
    dil = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    dil[:n, n:] = a
    dil[n:, :n] = a.conj().T
    w = eig_hermitian(dil)
    return np.clip(w[:n], 0.0, None)
