import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fmqkd.states import (
    inner_product,
    make_basis_mixtures,
    make_bob_basis,
    make_ensemble,
    make_states,
)

DEG = math.pi / 180
R2 = 1 / math.sqrt(2)


def hv_oracle(k, e1, e2):
    """Build the state in the (Ha, Va, Hb, Vb) basis from the two mirror
    reflections, rotate polarization to (X, Y) and return (Xb, Yb, Ya)."""
    fm = lambda e: -np.array([[math.sin(2 * e), math.cos(2 * e)], [math.cos(2 * e), -math.sin(2 * e)]])
    pm = np.diag([np.exp(1j * k * math.pi / 2), 1.0])
    h = np.array([1.0, 0.0])
    psi_a = fm(e1) @ h
    psi_b = pm @ fm(e2) @ pm @ h
    # columns of hv_to_xy express H and V in the (X, Y) basis
    c, s = math.cos(2 * e1), math.sin(2 * e1)
    hv_to_xy = np.array([[c, -s], [s, c]])
    xa, ya = hv_to_xy @ psi_a
    xb, yb = hv_to_xy @ psi_b
    assert abs(xa) < 1e-15
    return np.array([xb, yb, ya]) / math.sqrt(2)


def test_perfect_states():
    s = make_states(0.0, 0.0)
    np.testing.assert_allclose(s[0].amplitudes, [0, R2, R2], atol=1e-15)
    np.testing.assert_allclose(s[2].amplitudes, [0, -R2, R2], atol=1e-15)
    for st_ in s:
        assert st_.amplitudes[0] == 0


@pytest.mark.parametrize("k", range(4))
def test_states_match_hv_oracle(k):
    got = make_states(1 * DEG, 1 * DEG)[k].amplitudes
    # the printed form drops the common -1 from the two mirror reflections
    np.testing.assert_allclose(got, -hv_oracle(k, 1 * DEG, 1 * DEG), atol=1e-15)


def test_inner_products():
    for s in make_states(0.3 * DEG, 0.7 * DEG):
        assert abs(inner_product(s, s) - 1) < 1e-15
    s0 = make_states(0.0, 0.0)
    assert abs(inner_product(s0[0], s0[2])) < 1e-15


def test_opposite_overlap_one_degree():
    s = make_states(1 * DEG, 1 * DEG)
    mp.mp.dps = 40
    e1, e2 = mp.radians(1), mp.radians(1)

    def amp(k):
        p1, p2 = mp.mpc(0, 1) ** k, mp.mpc(0, 1) ** (2 * k)
        return [
            (mp.sin(2 * e2) * mp.cos(2 * e1) * p2 - mp.sin(2 * e1) * mp.cos(2 * e2) * p1) / mp.sqrt(2),
            (mp.sin(2 * e2) * mp.sin(2 * e1) * p2 + mp.cos(2 * e2) * mp.cos(2 * e1) * p1) / mp.sqrt(2),
            1 / mp.sqrt(2),
        ]

    oracle = mp.fsum(mp.conj(a) * b for a, b in zip(amp(0), amp(2)))
    assert abs(inner_product(s[0], s[2]) - complex(oracle)) < 1e-15
    assert abs(oracle - 1.21797487009e-3) < 1e-13


@pytest.mark.parametrize("e1", [-1.0, 0.0, 1.0])
@pytest.mark.parametrize("e2", [-1.0, -0.5, 0.25, 1.0])
def test_closed_form_overlaps(e1, e2):
    s = make_states(e1 * DEG, e2 * DEG)
    c2 = math.cos(2 * e2 * DEG) ** 2
    for k in range(4):
        z = inner_product(s[k], s[(k + 1) % 4])
        # conjugate-linear-first convention gives the +i sign
        assert abs(z - 0.5 * c2 * (1 + 1j)) < 1e-12
        assert abs(abs(z) - math.sqrt(2) / 2 * c2) < 1e-12
    sin2 = math.sin(2 * e2 * DEG) ** 2
    assert abs(inner_product(s[0], s[2]) - sin2) < 1e-12
    assert abs(inner_product(s[1], s[3]) - sin2) < 1e-12


eps = st.floats(-0.05, 0.05, allow_nan=False)


@settings(max_examples=200, deadline=None)
@given(eps, eps, eps)
def test_overlaps_independent_of_eps1_and_even_in_eps2(e1a, e1b, e2):
    a, b, c = make_states(e1a, e2), make_states(e1b, e2), make_states(e1a, -e2)
    for i in range(4):
        assert abs(np.linalg.norm(a[i].amplitudes) - 1) < 1e-12
        for j in range(4):
            ga = abs(inner_product(a[i], a[j]))
            assert abs(ga - abs(inner_product(b[i], b[j]))) < 1e-12
            assert abs(ga - abs(inner_product(c[i], c[j]))) < 1e-12


def test_ensemble_rank_two_when_encoded_mirror_perfect():
    e1 = 1 * DEG
    ens = make_ensemble(e1, 0.0)
    lam = np.linalg.eigvalsh(ens.rho)
    # printed form: 2 * [[s^2, -sc, 0], [-sc, c^2, 0], [0, 0, 1]] in its own ordering
    s, c = math.sin(2 * e1), math.cos(2 * e1)
    printed = 2 * np.array([[s * s, -s * c, 0], [-s * c, c * c, 0], [0, 0, 1]])
    np.testing.assert_allclose(lam, np.linalg.eigvalsh(printed), atol=1e-14)
    np.testing.assert_allclose(lam, [0, 2, 2], atol=1e-14)


def test_ensemble_traces():
    ens = make_ensemble(1 * DEG, 1 * DEG)
    assert abs(np.trace(ens.rho) - 4) < 1e-10
    for L in ens.L:
        assert abs(np.trace(L) - 2) < 1e-10


def test_ensemble_matches_outer_products():
    ens = make_ensemble(0.0, 1 * DEG)
    brute = np.zeros((3, 3), dtype=complex)
    for s in make_states(0.0, 1 * DEG):
        v = s.amplitudes
        for i in range(3):
            for j in range(3):
                brute[i, j] += v[i] * v[j].conjugate()
    np.testing.assert_allclose(ens.rho, brute, atol=1e-15)
    k = 1
    np.testing.assert_allclose(
        ens.L[k], 0.5 * ens.rho_k[2] + ens.rho_k[3] + 0.5 * ens.rho_k[0], atol=1e-15
    )


def test_bob_basis():
    b = make_bob_basis(0.0)
    np.testing.assert_allclose(b[0].amplitudes, [0, R2, R2], atol=1e-15)
    assert abs(inner_product(b[0], b[2])) < 1e-15
    b = make_bob_basis(1 * DEG)
    want = np.array([math.sin(2 * DEG), -1j * math.cos(2 * DEG), 1]) / math.sqrt(2)
    np.testing.assert_allclose(b[3].amplitudes, want, atol=1e-15)
    for s in b:
        assert abs(np.linalg.norm(s.amplitudes) - 1) < 1e-12


def test_basis_mixtures():
    rx, ry = make_basis_mixtures(make_states(0.0, 0.0))
    np.testing.assert_array_equal(rx, ry)
    for e2 in (0.0, 1.0, 5.0):
        rx, ry = make_basis_mixtures(make_states(0.5 * DEG, e2 * DEG))
        assert abs(np.trace(rx) - 1) < 1e-12 and abs(np.trace(ry) - 1) < 1e-12
        assert np.min(np.linalg.eigvalsh(rx)) > -1e-12
    rx, ry = make_basis_mixtures(make_states(0.0, 5 * DEG))
    s = make_states(0.0, 5 * DEG)
    ox = 0.5 * sum(np.outer(s[i].amplitudes, s[i].amplitudes.conj()) for i in (0, 2))
    oy = 0.5 * sum(np.outer(s[i].amplitudes, s[i].amplitudes.conj()) for i in (1, 3))
    np.testing.assert_allclose(rx, ox, atol=1e-15)
    assert np.linalg.norm(ox - oy) > 0.1
