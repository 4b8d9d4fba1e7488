import json

import numpy as np
import pytest

from entevo.linalg import NotHermitianError, NotPSDError
from entevo.states import (
    SUB_NORMALIZED,
    UNIT_TRACE,
    DensityMatrix,
    PureState,
    basis_state,
    ghz,
    ghz_w_mixture,
    load_state,
    random_density,
    random_local_unitary,
    random_pure,
    random_rank2,
    random_unitary,
    save_state,
    state_from_json,
    state_to_json,
    w,
)


def test_basis_label_convention():
    # qubit 1 is the most significant bit
    psi = basis_state("100")
    assert psi.amplitudes[4] == 1.0


def test_ghz_and_w_amplitudes():
    g = ghz(3).amplitudes
    assert np.isclose(g[0], 2**-0.5) and np.isclose(g[7], 2**-0.5)
    v = w(3).amplitudes
    assert np.allclose(v[[1, 2, 4]], 3**-0.5)
    assert np.isclose(np.vdot(v, v).real, 1.0)


def test_mixture_endpoints():
    assert np.allclose(ghz_w_mixture(1.0).mat, ghz(3).density().mat)
    assert np.allclose(ghz_w_mixture(0.0).mat, w(3).density().mat)
    with pytest.raises(ValueError):
        ghz_w_mixture(1.5)


def test_pure_state_validation():
    with pytest.raises(ValueError):
        PureState(2, [1, 1, 0, 0])
    with pytest.raises(ValueError):
        PureState(2, [1, 0, 0])


def test_density_validation():
    with pytest.raises(NotHermitianError):
        DensityMatrix(1, [[0.5, 0.3], [0.0, 0.5]])
    with pytest.raises(NotPSDError):
        DensityMatrix(1, [[1.5, 0.0], [0.0, -0.5]])
    with pytest.raises(ValueError):
        DensityMatrix(1, [[0.5, 0], [0, 0.2]])
    sub = DensityMatrix(1, [[0.25, 0], [0, 0.25]], SUB_NORMALIZED)
    assert sub.normalized().trace_convention == UNIT_TRACE
    assert np.isclose(sub.normalized().trace, 1.0)


def test_states_are_immutable():
    rho = ghz(3).density()
    with pytest.raises(ValueError):
        rho.mat[0, 0] = 0


def test_register_cap(monkeypatch):
    monkeypatch.setenv("CONCURRENCE_MAX_QUBITS", "3")
    ghz(3)
    with pytest.raises(ValueError):
        ghz(4)


def test_random_states_are_seeded():
    assert np.array_equal(random_pure(3, 5).amplitudes, random_pure(3, 5).amplitudes)
    assert not np.array_equal(random_pure(3, 5).amplitudes, random_pure(3, 6).amplitudes)
    rho = random_rank2(3, 1)
    assert np.linalg.matrix_rank(rho.mat, tol=1e-10) == 2
    assert np.linalg.matrix_rank(random_density(2, 3, rank=3).mat, tol=1e-10) == 3


def test_random_unitaries(rng):
    u = random_unitary(4, rng)
    assert np.allclose(u.conj().T @ u, np.eye(4))
    v = random_local_unitary(3, rng)
    assert np.allclose(v.conj().T @ v, np.eye(8))


@pytest.mark.parametrize("state", [ghz(3), random_pure(2, 3), random_rank2(3, 2)], ids=["ghz", "pure", "mixed"])
def test_json_roundtrip(tmp_path, state):
    path = tmp_path / "state.json"
    save_state(state, path)
    back = load_state(path)
    assert type(back) is type(state)
    a = back.amplitudes if isinstance(back, PureState) else back.mat
    b = state.amplitudes if isinstance(state, PureState) else state.mat
    assert np.array_equal(a, b)
    assert json.loads(path.read_text())["n_qubits"] == state.n_qubits


def test_json_format_fields():
    obj = state_to_json(ghz(2))
    assert obj["kind"] == "pure" and np.allclose(obj["amplitudes"][0], [2**-0.5, 0.0])
    with pytest.raises(ValueError):
        state_from_json({"n_qubits": 1})


def test_ghz_w_orthogonal_and_mixture_spectrum():
    for n in (2, 3, 4, 5):
        assert np.vdot(ghz(n).amplitudes, w(n).amplitudes) == 0
    vals = np.sort(np.linalg.eigvalsh(ghz_w_mixture(0.3).mat))[::-1]
    assert np.allclose(vals, [0.7, 0.3] + [0] * 6, atol=1e-12)
