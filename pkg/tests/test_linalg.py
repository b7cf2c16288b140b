import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from fmqkd.errors import DegenerateStateSpace, NotHermitian, NotPSD
from fmqkd.linalg import eig_hermitian, mat_inv_sqrt, mat_sqrt, rank_estimate
from fmqkd.states import make_ensemble

DEG = np.pi / 180


def charpoly_roots(a):
    """Roots of det(A - lambda I) for a 3x3 matrix from its invariants."""
    tr = np.trace(a)
    minors = (
        a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        + a[0, 0] * a[2, 2] - a[0, 2] * a[2, 0]
        + a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1]
    )
    det = (
        a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
        - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
        + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0])
    )
    # lambda^3 - tr lambda^2 + minors lambda - det = 0
    return np.sort(np.roots([1, -tr, minors, -det]).real)


def random_hermitian(rng, n):
    m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return m + m.conj().T


finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


@st.composite
def hermitian(draw, n=3):
    re = draw(arrays(float, (n, n), elements=finite))
    im = draw(arrays(float, (n, n), elements=finite))
    m = re + 1j * im
    return m + m.conj().T


def test_identity_eigenvalues():
    dec = eig_hermitian(np.eye(3))
    np.testing.assert_allclose(dec.eigenvalues, [1, 1, 1], atol=1e-15)
    np.testing.assert_allclose(dec.eigenvectors, np.eye(3), atol=1e-15)


def test_diagonal_eigenpairs():
    dec = eig_hermitian(np.diag([2.0, 0.0, 1.0]))
    np.testing.assert_allclose(dec.eigenvalues, [0, 1, 2], atol=1e-15)
    np.testing.assert_allclose(dec.eigenvectors, np.eye(3)[:, [1, 2, 0]], atol=1e-15)


def test_rho_eigenvalues_match_cubic_roots():
    rho = make_ensemble(1 * DEG, 1 * DEG).rho
    np.testing.assert_allclose(eig_hermitian(rho).eigenvalues, charpoly_roots(rho), atol=1e-9)


def test_not_hermitian():
    with pytest.raises(NotHermitian):
        eig_hermitian(np.array([[1, 1], [0, 1]]))


def test_rejects_other_sizes():
    with pytest.raises(ValueError):
        eig_hermitian(np.eye(4))


def test_canonical_phase():
    rng = np.random.default_rng(3)
    dec = eig_hermitian(random_hermitian(rng, 3))
    for v in dec.eigenvectors.T:
        top = v[np.argmax(np.abs(v))]
        assert abs(top.imag) < 1e-15 and top.real > 0


def test_degenerate_cluster_basis_is_deterministic():
    rng = np.random.default_rng(11)
    q, _ = np.linalg.qr(rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)))
    a = q @ np.diag([1.0, 1.0, 3.0]) @ q.conj().T
    b = q[:, [1, 0, 2]] @ np.diag([1.0, 1.0, 3.0]) @ q[:, [1, 0, 2]].conj().T
    va = eig_hermitian(a).eigenvectors[:, :2]
    vb = eig_hermitian(b).eigenvectors[:, :2]
    np.testing.assert_allclose(va, vb, atol=1e-10)


def test_mat_sqrt_cases():
    np.testing.assert_allclose(mat_sqrt(np.eye(3)), np.eye(3), atol=1e-15)
    np.testing.assert_allclose(mat_sqrt(np.diag([4.0, 9, 16])), np.diag([2.0, 3, 4]), atol=1e-14)


def test_mat_sqrt_clamps_tiny_negative_and_rejects_real_negative():
    b = mat_sqrt(np.diag([-5e-11, 1.0]))
    np.testing.assert_allclose(b, np.diag([0.0, 1.0]), atol=1e-15)
    with pytest.raises(NotPSD):
        mat_sqrt(np.diag([-1e-6, 1.0]))


def test_sqrt_of_basis_mixture_squares_back():
    from fmqkd.states import make_basis_mixtures, make_states

    rho_x, _ = make_basis_mixtures(make_states(0.0, 3 * DEG))
    b = mat_sqrt(rho_x)
    assert np.max(np.abs(b @ b - rho_x)) < 1e-9
    assert np.max(np.abs(b - b.conj().T)) < 1e-12


def test_inv_sqrt_cases():
    np.testing.assert_allclose(mat_inv_sqrt(np.eye(2)), np.eye(2), atol=1e-15)
    np.testing.assert_allclose(
        mat_inv_sqrt(np.diag([4.0, 1.0, 0.25])), np.diag([0.5, 1.0, 2.0]), atol=1e-14
    )


def test_inv_sqrt_degenerate_rho():
    with pytest.raises(DegenerateStateSpace):
        mat_inv_sqrt(make_ensemble(1 * DEG, 0.0).rho, rank_tol=1e-10)


def test_rank_estimate():
    assert rank_estimate(np.zeros((3, 3))) == 0
    assert rank_estimate(make_ensemble(1 * DEG, 0.0).rho) == 2
    rho = make_ensemble(1 * DEG, 1 * DEG).rho
    assert np.all(charpoly_roots(rho) > 1e-10)
    assert rank_estimate(rho) == 3


@settings(max_examples=200, deadline=None)
@given(hermitian())
def test_reconstruction_and_trace(a):
    dec = eig_hermitian(a)
    scale = max(1.0, np.max(np.abs(a)))
    assert np.max(np.abs(dec.reconstruct() - a)) < 1e-10 * scale
    assert np.all(np.diff(dec.eigenvalues) >= 0)
    v = dec.eigenvectors
    assert np.max(np.abs(v.conj().T @ v - np.eye(3))) < 1e-10
    assert abs(np.trace(a).real - dec.eigenvalues.sum()) < 1e-10 * scale
    for lam, vec in zip(dec.eigenvalues, v.T):
        assert np.linalg.norm(a @ vec - lam * vec) < 1e-10 * scale


@settings(max_examples=200, deadline=None)
@given(arrays(float, (3, 3), elements=st.floats(-1, 1)), arrays(float, (3, 3), elements=st.floats(-1, 1)))
def test_sqrt_and_inv_sqrt_roundtrip(re, im):
    m = re + 1j * im
    a = m @ m.conj().T + 0.1 * np.eye(3)
    b = mat_sqrt(a)
    assert np.max(np.abs(b @ b - a)) < 1e-8
    c = mat_inv_sqrt(a)
    assert np.max(np.abs(c @ a @ c - np.eye(3))) < 1e-8
