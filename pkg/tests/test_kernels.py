import os
import subprocess
import sys

import numpy as np
import pytest

from entevo import _kernels
from entevo._backend import HAS_NUMBA
from entevo.measures import psd_factor
from entevo.states import ghz, random_density, random_rank2, w

from conftest import hermitian

needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba not installed")


@needs_numba
@pytest.mark.parametrize("d", [2, 5, 8, 16])
def test_jacobi_matches_lapack(rng, d):
    h = hermitian(rng, d)
    w_nb, v_nb, sweeps = _kernels.jacobi_eigh_nb(h, 1e-15, 60)
    w_np, _ = _kernels.jacobi_eigh_np(h)
    assert sweeps >= 0
    assert np.allclose(w_nb, w_np, atol=1e-12 * np.abs(w_np).max())
    assert np.allclose((v_nb * w_nb) @ v_nb.conj().T, h, atol=1e-11)


@needs_numba
def test_jacobi_reports_non_convergence(rng):
    _, _, sweeps = _kernels.jacobi_eigh_nb(hermitian(rng, 8), 1e-15, 1)
    assert sweeps == -1


@needs_numba
@pytest.mark.parametrize(
    "state",
    [ghz(3), w(3), random_rank2(3, 1), random_density(3, 2), random_density(4, 3, rank=3)],
    ids=["ghz", "w", "rank2", "full", "n4"],
)
def test_block_lambdas_backends_agree(state):
    rho = state.density() if hasattr(state, "amplitudes") else state
    x = np.ascontiguousarray(psd_factor(rho.mat))
    d1 = rho.mat.shape[0] // 2
    a = _kernels.block_lambdas_nb(x, d1)
    b = _kernels.block_lambdas_np(x, d1)
    assert a.shape == b.shape == (d1 * (d1 - 1) // 2, 4)
    assert np.allclose(a, b, atol=1e-12)


def test_pair_index_order():
    idx = _kernels._pair_index(3)
    assert idx.tolist() == [[0, 1, 2, 3], [0, 1, 4, 5], [2, 3, 4, 5]]


def _tau_with_backend(backend):
    code = ("from entevo import BACKEND; from entevo.states import random_rank2;"
            "from entevo.measures import tau_lower_bound;"
            "print(BACKEND, repr(tau_lower_bound(random_rank2(3, 4))))")
    env = dict(os.environ, ENTEVO_BACKEND=backend)
    return subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)


@needs_numba
def test_backend_flag_switches_path_with_same_result():
    a = _tau_with_backend("numba")
    b = _tau_with_backend("numpy")
    assert a.returncode == b.returncode == 0
    name_a, val_a = a.stdout.split()
    name_b, val_b = b.stdout.split()
    assert (name_a, name_b) == ("numba", "numpy")
    assert abs(float(val_a) - float(val_b)) < 1e-12


def test_bad_backend_flag():
    r = _tau_with_backend("fortran")
    assert r.returncode != 0 and "ENTEVO_BACKEND" in r.stderr
