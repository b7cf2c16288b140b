"""Alice's perturbed signal states and Bob's perturbed measurement states.

All three-component vectors are expressed in the ordered basis
``(|x1>, |x2>, |x3>) = (|Xb>, |Yb>, |Ya>)``, where ``a``/``b`` are the
short/long-arm time modes and ``(X, Y)`` is the polarization basis rotated
by ``2*eps1`` from ``(H, V)``. In this basis the reference (short-arm) pulse
always sits on ``|x3>``, and the encoded pulse spans ``|x1>, |x2>``.

Inner products are conjugate-linear in the first argument:
``inner_product(a, b) = sum(conj(a_i) * b_i)``. With this convention
``<Phi_k|Phi_{k+1}> = cos^2(2 eps2) * (1 + 1j) / 2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .jones import _check_epsilon

PHASE_STEP = np.pi / 2  # Alice's phase modulator step delta_a
_INV_SQRT2 = 1 / np.sqrt(2)


@dataclass(frozen=True)
class SignalState:
    k: int
    amplitudes: np.ndarray

    @property
    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True)
class BobBasisState:
    k: int
    amplitudes: np.ndarray

    @property
    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


def _phase(n: int) -> complex:
    # exp(i n pi/2) without rounding noise
    return 1j ** (n % 4)


def _signal_amplitudes(k: int, eps1: float, eps2: float) -> np.ndarray:
    s1, c1 = np.sin(2 * eps1), np.cos(2 * eps1)
    s2, c2 = np.sin(2 * eps2), np.cos(2 * eps2)
    p1 = _phase(k)
    p2 = _phase(2 * k)
    x1 = s2 * c1 * p2 - s1 * c2 * p1
    x2 = s2 * s1 * p2 + c2 * c1 * p1
    return np.array([x1, x2, 1.0], dtype=np.complex128) * _INV_SQRT2


def make_states(eps1: float, eps2: float) -> list[SignalState]:
    """The four states Alice emits when her mirrors have errors ``eps1``, ``eps2`` (rad).

    ``eps1`` belongs to the reference-arm mirror, ``eps2`` to the mirror on
    the arm carrying the phase modulator.
    """
    _check_epsilon(eps1)
    _check_epsilon(eps2)
    return [SignalState(k, _signal_amplitudes(k, eps1, eps2)) for k in range(4)]


def inner_product(a, b) -> complex:
    """``<a|b>`` for two states (or raw amplitude vectors)."""
    u = getattr(a, "amplitudes", a)
    v = getattr(b, "amplitudes", b)
    return complex(np.vdot(u, v))


@dataclass(frozen=True)
class StateEnsemble:
    """Signal states with their projectors ``rho_k``, the sum ``rho`` and the
    error operators ``L_k = rho_{k+1}/2 + rho_{k+2} + rho_{k+3}/2``."""

    states: list[SignalState]
    rho_k: list[np.ndarray]
    rho: np.ndarray
    L: list[np.ndarray] = field(repr=False)
    eps1: float = 0.0
    eps2: float = 0.0


def make_ensemble(eps1: float, eps2: float) -> StateEnsemble:
    states = make_states(eps1, eps2)
    rho_k = [s.projector for s in states]
    rho = rho_k[0] + rho_k[1] + rho_k[2] + rho_k[3]
    L = [
        0.5 * rho_k[(k + 1) % 4] + rho_k[(k + 2) % 4] + 0.5 * rho_k[(k + 3) % 4]
        for k in range(4)
    ]
    return StateEnsemble(states, rho_k, rho, L, float(eps1), float(eps2))


def make_bob_basis(eps3: float) -> list[BobBasisState]:
    """Bob's four decoding states ``(sin 2e3, i^k cos 2e3, 1)/sqrt(2)``."""
    _check_epsilon(eps3)
    s3, c3 = np.sin(2 * eps3), np.cos(2 * eps3)
    out = []
    for k in range(4):
        amp = np.array([s3, _phase(k) * c3, 1.0], dtype=np.complex128)
        out.append(BobBasisState(k, amp * _INV_SQRT2))
    return out


def make_basis_mixtures(states) -> tuple[np.ndarray, np.ndarray]:
    """Basis-averaged source states ``rho_X`` (k = 0, 2) and ``rho_Y`` (k = 1, 3)."""
    p = [s.projector for s in states]
    return 0.5 * (p[0] + p[2]), 0.5 * (p[1] + p[3])
