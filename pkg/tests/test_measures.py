import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entevo import measures as m
from entevo.linalg import partial_trace, permute_qubits, psd_sqrt, singular_values
from entevo.states import (
    DensityMatrix,
    PureState,
    basis_state,
    ghz,
    random_density,
    random_local_unitary,
    random_pure,
    random_rank2,
    w,
)

SQRT2 = np.sqrt(2.0)


def bell():
    return PureState(2, np.array([1, 0, 0, 1]) / SQRT2)


def werner(p):
    singlet = np.array([0, 1, -1, 0]) / SQRT2
    return DensityMatrix(2, p * np.outer(singlet, singlet) + (1 - p) * np.eye(4) / 4)


def marginal_purity(psi, keep):
    n = psi.n_qubits
    r = partial_trace(psi.density().mat, n, [q for q in range(1, n + 1) if q != keep])
    return np.vdot(r, r).real


def test_generator_counts():
    assert [m.generator_count(n) for n in (2, 3, 4, 5)] == [1, 6, 28, 120]
    for n in (2, 3, 4):
        for cut in range(1, n + 1):
            assert len(m.generator_set(n, cut).operators) == m.generator_count(n)


def test_so_generators_are_imaginary_antisymmetric():
    for d in (2, 4, 8):
        gens = m.so_generators(d)
        assert len(gens) == d * (d - 1) // 2
        for g in gens:
            assert np.array_equal(g.T, -g)
            assert not np.any(g.real)


def test_spin_flip_generators_are_real_symmetric():
    for op in m.generator_set(3, 2).operators:
        assert np.array_equal(op.T, op)
        assert not np.any(op.imag)


def test_cut_labels():
    assert str(m.BipartitionCut(1, 3)) == "23|1"
    assert m.BipartitionCut(2, 3).to_last() == [1, 3, 2]
    with pytest.raises(IndexError):
        m.BipartitionCut(4, 3)


def test_ghz_w_values():
    assert np.isclose(m.tau_lower_bound(ghz(3)), 1.0, atol=1e-14)
    assert np.isclose(m.tau_lower_bound(w(3)), 2 * SQRT2 / 3, atol=1e-14)
    assert m.tau_lower_bound(basis_state("000")) == 0.0


@pytest.mark.parametrize("seed", range(10))
def test_c_k_matches_pure_overlap_oracle(seed):
    psi = random_pure(3, seed)
    conj = psi.amplitudes.conj()
    for cut in (1, 2, 3):
        ops = m.generator_set(3, cut).operators
        oracle = np.array([abs(np.vdot(psi.amplitudes, s @ conj)) for s in ops])
        assert np.allclose(m.c_k_terms(psi, cut).c_k, oracle, atol=1e-12)


@pytest.mark.parametrize("seed", range(8))
def test_pure_cut_sum_equals_linear_entropy(seed):
    psi = random_pure(4, seed)
    for cut in range(1, 5):
        expected = np.sqrt(2.0 * (1.0 - marginal_purity(psi, cut)))
        assert np.isclose(m.cut_concurrence(psi, cut), expected, atol=1e-12)
    assert np.isclose(m.tau_lower_bound(psi), SQRT2 * m.pure_concurrence(psi), atol=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_three_tangle_against_ckw_residual(seed):
    # tau = C^2_{1|23} - C^2_{12} - C^2_{13}
    psi = random_pure(3, seed)
    rho = psi.density().mat
    c1_rest = 2.0 * (1.0 - marginal_purity(psi, 1))
    c12 = m.wootters_concurrence(DensityMatrix(2, partial_trace(rho, 3, [3])))
    c13 = m.wootters_concurrence(DensityMatrix(2, partial_trace(rho, 3, [2])))
    assert np.isclose(m.three_tangle(psi), c1_rest - c12**2 - c13**2, atol=1e-10)


def test_three_tangle_reference_values():
    assert np.isclose(m.three_tangle(ghz(3)), 1.0)
    assert m.three_tangle(w(3)) <= 1e-12


def test_classify():
    assert m.classify(ghz(3)).tag == m.GHZ_CLASS
    assert m.classify(w(3)).tag == m.W_CLASS
    assert m.classify(basis_state("010")).tag == m.UNENTANGLED
    # biseparable: zero tangle but entangled, lands in the W branch of the dichotomy
    bisep = PureState(3, np.kron(bell().amplitudes, [1, 0]))
    assert m.classify(bisep).tag == m.W_CLASS


@pytest.mark.parametrize("p,expected", [(1.0, 1.0), (0.6, 0.4), (1 / 3, 0.0), (0.1, 0.0)])
def test_werner_concurrence(p, expected):
    rho = werner(p)
    assert np.isclose(m.wootters_concurrence(rho), expected, atol=1e-12)
    assert np.isclose(m.tau_lower_bound(rho), expected, atol=1e-12)


def test_bell_state_two_qubit_values():
    assert np.isclose(m.tau_lower_bound(bell()), 1.0)
    assert np.isclose(m.pure_concurrence(bell()), 1 / SQRT2)


@pytest.mark.parametrize("seed", range(6))
def test_local_unitary_invariance_pure(seed):
    psi = random_pure(4, seed)
    u = random_local_unitary(4, seed + 100)
    moved = PureState(4, u @ psi.amplitudes)
    assert np.isclose(m.tau_lower_bound(moved), m.tau_lower_bound(psi), atol=1e-9)


@pytest.mark.parametrize("seed", range(6))
def test_local_unitary_invariance_two_qubit_mixed(seed):
    rho = random_density(2, seed)
    u = random_local_unitary(2, seed + 100)
    moved = DensityMatrix(2, u @ rho.mat @ u.conj().T)
    assert np.isclose(m.tau_lower_bound(moved), m.tau_lower_bound(rho), atol=1e-9)


def test_mixed_three_qubit_bound_depends_on_local_basis():
    # the fixed generator basis makes the mixed-state bound basis dependent
    rho = random_rank2(3, 0)
    u = random_local_unitary(3, 100)
    moved = DensityMatrix(3, u @ rho.mat @ u.conj().T)
    assert abs(m.tau_lower_bound(moved) - m.tau_lower_bound(rho)) > 1e-3


def test_mixed_bound_invariant_under_basis_permutation_of_the_rest():
    # bit flips on qubits 1 and 2 only permute the generator set
    rho = random_rank2(3, 3)
    x = np.kron(np.kron([[0, 1], [1, 0]], [[0, 1], [1, 0]]), np.eye(2))
    moved = DensityMatrix(3, x @ rho.mat @ x.T)
    assert np.isclose(m.tau_lower_bound(moved), m.tau_lower_bound(rho), atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_three_tangle_local_unitary_invariance(seed):
    psi = random_pure(3, seed)
    u = random_local_unitary(3, seed + 50)
    assert np.isclose(m.three_tangle(PureState(3, u @ psi.amplitudes)), m.three_tangle(psi), atol=1e-9)


@pytest.mark.parametrize("perm", [[2, 1, 3], [3, 1, 2], [1, 3, 2]])
def test_qubit_relabeling_invariance(perm):
    rho = random_rank2(3, 11)
    moved = DensityMatrix(3, permute_qubits(rho.mat, 3, perm))
    assert np.isclose(m.tau_lower_bound(moved), m.tau_lower_bound(rho), atol=1e-9)


def test_generator_sign_flip_changes_nothing():
    rho = random_rank2(3, 8)
    root = psd_sqrt(rho.mat)
    for cut in (1, 2, 3):
        ref = m.c_k_terms(rho, cut, "dense").c_k
        for k, s in enumerate(m.generator_set(3, cut).operators):
            lam = singular_values(root @ (-s) @ root.conj())
            assert abs(max(0.0, lam[0] - lam[1:4].sum()) - ref[k]) < 1e-12


def test_homogeneous_of_degree_one():
    rho = random_rank2(3, 4)
    half = rho.scaled(0.5)
    assert np.isclose(m.tau_lower_bound(half), 0.5 * m.tau_lower_bound(rho), atol=1e-14)


@pytest.mark.parametrize("seed", range(6))
def test_block_and_dense_agree(seed):
    rho = random_density(3, seed, rank=int(seed % 4) + 1)
    for cut in (1, 2, 3):
        a = m.c_k_terms(rho, cut, "block")
        b = m.c_k_terms(rho, cut, "dense")
        assert np.allclose(a.c_k, b.c_k, atol=1e-10)
        assert np.allclose(a.lambda_lists, b.lambda_lists, atol=1e-10)
        assert b.fifth_eigenvalue < 1e-12


def test_tau_on_product_is_zero():
    psi = PureState(3, np.kron(np.kron([0.6, 0.8], [1, 1j] / SQRT2), [0, 1]))
    assert m.tau_lower_bound(psi) < 1e-14


def test_register_limits(monkeypatch):
    with pytest.raises(ValueError):
        m.tau_lower_bound(DensityMatrix(1, np.eye(2) / 2))
    monkeypatch.setenv("CONCURRENCE_MAX_QUBITS", "3")
    with pytest.raises(ValueError):
        m.generator_count(4) and m.generator_set(4, 1)


def test_convex_roof_pure_and_monotone():
    psi = random_pure(3, 3)
    assert np.isclose(m.convex_roof_estimate(psi), m.pure_concurrence(psi))
    rho = random_rank2(3, 5)
    few = m.convex_roof_estimate(rho, restarts=2, seed=9)
    many = m.convex_roof_estimate(rho, restarts=8, seed=9)
    assert many <= few + 1e-15


def test_convex_roof_of_separable_mixture_is_small():
    a = basis_state("000").density().mat
    b = basis_state("111").density().mat
    assert m.convex_roof_estimate(DensityMatrix(3, 0.5 * (a + b)), restarts=4) < 1e-6


@pytest.mark.parametrize("seed", range(3))
def test_lower_bound_below_scaled_roof(seed):
    # for pure states tau = sqrt(2) C_N, so sqrt(2) * roof is the matching upper estimate
    rho = random_rank2(3, seed)
    assert m.tau_lower_bound(rho) <= SQRT2 * m.convex_roof_estimate(rho, restarts=6, seed=seed) + 1e-6


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), rank=st.integers(1, 8))
def test_tau_range_and_cut_sum(seed, rank):
    rho = random_density(3, seed, rank=rank)
    terms = m.cut_breakdown(rho)
    tau = m.tau_lower_bound(rho)
    assert 0.0 <= tau <= 1.0 + 1e-12
    assert np.isclose(tau**2, sum(t.cut_concurrence**2 for t in terms) / 3)
    assert all(np.all(t.c_k >= 0) for t in terms)
