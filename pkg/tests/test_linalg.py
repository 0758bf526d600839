import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from parrondo_lab import linalg, quantum
from parrondo_lab.errors import ParameterError


def random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def test_tensor_and_dagger_small_examples():
    x = np.array([[0, 1], [1, 0]])
    k = linalg.tensor(np.eye(2), x)
    assert k.shape == (4, 4)
    np.testing.assert_array_equal(k[:2, :2], x)
    np.testing.assert_array_equal(k[2:, :2], 0)
    a = np.array([[1, 2j], [3, 4]])
    np.testing.assert_array_equal(linalg.dagger(a), [[1, 3], [-2j, 4]])


def test_tensor_result_is_read_only():
    k = linalg.tensor(np.eye(2), np.eye(2))
    with pytest.raises(ValueError):
        k[0, 0] = 5


def test_as_unitary_rejects_non_unitary():
    with pytest.raises(ParameterError):
        linalg.as_unitary(np.array([[1.0, 0.1], [0.0, 1.0]]))
    with pytest.raises(ParameterError):
        linalg.as_matrix(np.ones(3))


@pytest.mark.parametrize(
    "rho",
    [np.array([[0.5, 0.1], [0.2, 0.5]]), np.array([[0.6, 0], [0, 0.6]]), np.diag([1.5, -0.5])],
    ids=["non_hermitian", "trace", "negative"],
)
def test_as_density_matrix_rejects(rho):
    with pytest.raises(ParameterError):
        linalg.as_density_matrix(rho)


def test_identity_has_single_cluster():
    dec = linalg.eig_unitary(np.eye(4))
    assert dec.phases == [0.0]
    assert dec.multiplicities == [4]
    np.testing.assert_allclose(dec.clusters[0].projector, np.eye(4), atol=1e-14)


def test_shift_eigenphases_are_roots_of_unity():
    dec = linalg.eig_unitary(quantum.shift(3))
    np.testing.assert_allclose(sorted(dec.phases), [-2 * math.pi / 3, 0.0, 2 * math.pi / 3], atol=1e-12)
    assert dec.multiplicities == [1, 1, 1]


def test_cluster_across_branch_cut():
    # eigenphases just either side of pi belong to one eigenspace
    d = np.diag(np.exp(1j * np.array([math.pi - 1e-10, -math.pi + 1e-10, 0.3])))
    dec = linalg.eig_unitary(d)
    assert sorted(dec.multiplicities) == [1, 2]
    assert max(e for e in dec.invariant_errors(d).values()) < 1e-9


def test_degenerate_eigenspace_recovered(rng):
    v = random_unitary(rng, 6)
    phases = np.array([0.7, 0.7, 0.7, -1.2, -1.2, 2.5])
    u = v @ np.diag(np.exp(1j * phases)) @ v.conj().T
    dec = linalg.eig_unitary(u)
    assert dec.multiplicities == [2, 3, 1]
    np.testing.assert_allclose(dec.phases, [-1.2, 0.7, 2.5], atol=1e-10)
    assert max(dec.invariant_errors(u).values()) < 1e-9


def test_invariants_on_random_walk_products(rng):
    for _ in range(50):
        M = int(rng.integers(3, 7))
        coin = quantum.CoinParams(float(rng.uniform()), *rng.uniform(0, 2 * math.pi, 2))
        u = quantum.coined_walk(M, coin)
        errs = linalg.eig_unitary(u).invariant_errors(u)
        assert errs["idempotency"] < 1e-9
        assert errs["completeness"] < 1e-9
        assert errs["orthogonality"] < 1e-9
        assert errs["reconstruction"] < 1e-8


def test_phases_match_numpy_eigvals(rng):
    u = random_unitary(rng, 12)
    mine = np.sort(linalg.eig_unitary(u).phases)
    ref = np.sort(np.angle(np.linalg.eigvals(u)))
    np.testing.assert_allclose(mine, ref, atol=1e-10)


@pytest.mark.parametrize("n", [1, 2, 5, 12])
def test_jacobi_matches_numpy_eigvalsh(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    h = a + a.conj().T
    w, v = linalg.jacobi_eigh(h)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(h), atol=1e-12)
    np.testing.assert_allclose(v.conj().T @ h @ v, np.diag(w), atol=1e-11)


def test_gram_schmidt_orthonormal(rng):
    vecs = rng.normal(size=(8, 4)) + 1j * rng.normal(size=(8, 4))
    q = linalg.gram_schmidt(vecs)
    np.testing.assert_allclose(q.conj().T @ q, np.eye(4), atol=1e-13)


small = st.integers(1, 3)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), small, small, small)
def test_tensor_is_associative(seed, a, b, c):
    g = np.random.default_rng(seed)
    x, y, z = (g.normal(size=(n, n)) + 1j * g.normal(size=(n, n)) for n in (a, b, c))
    np.testing.assert_allclose(
        linalg.tensor(linalg.tensor(x, y), z), linalg.tensor(x, linalg.tensor(y, z)), atol=1e-12
    )


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(2, 10))
def test_unitary_evolution_keeps_density_valid(seed, n):
    g = np.random.default_rng(seed)
    a = g.normal(size=(n, n)) + 1j * g.normal(size=(n, n))
    rho = a @ a.conj().T
    rho /= np.trace(rho).real
    u = random_unitary(g, n)
    for _ in range(10):
        rho = u @ rho @ u.conj().T
    errs = linalg.density_errors(rho)
    assert errs["hermiticity"] < linalg.DENSITY_TOL
    assert errs["trace"] < linalg.DENSITY_TOL
    assert errs["negativity"] < linalg.PSD_TOL
