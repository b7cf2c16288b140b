"""Asymptotic secure key rate with imperfect Faraday mirrors.

Alice's encoded-arm mirror error ``eps2`` makes the source basis dependent
(quantified by the fidelity between the X- and Y-basis mixtures), while
Bob's encoded-arm mirror error ``eps3`` tilts his decoding bases and adds
bit errors. Both enter the basis-dependent-source bound

    R_X >= 1 - h(delta_ph) - h(delta_X)

with the symmetric-channel assumption ``q_X = q_Y = q_ph = q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericalInconsistency
from .linalg import mat_sqrt, eig_hermitian
from .states import make_basis_mixtures, make_bob_basis, make_states, inner_product

FIDELITY_SLACK = 1e-10


def binary_entropy(x: float) -> float:
    """Binary Shannon entropy in bits, with ``h(0) = h(1) = 0``."""
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary entropy argument {x!r} outside [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def fidelity(rho_x, rho_y) -> float:
    """Root fidelity ``Tr sqrt(sqrt(rho_x) rho_y sqrt(rho_x))`` of two density matrices."""
    rho_x = np.asarray(rho_x, dtype=np.complex128)
    if np.array_equal(rho_x, rho_y):
        # F(rho, rho) = Tr(rho); skips eigensolver rounding at the identity point
        tr = float(np.trace(rho_x).real)
        return 1.0 if abs(tr - 1.0) < FIDELITY_SLACK else min(tr, 1.0)
    s = mat_sqrt(rho_x)
    inner = s @ np.asarray(rho_y, dtype=np.complex128) @ s
    lam = eig_hermitian(inner).eigenvalues
    # the product is PSD; rounding can leave tiny negative eigenvalues
    f = float(np.sum(np.sqrt(np.clip(lam, 0.0, None))))
    if f > 1 + FIDELITY_SLACK:
        raise NumericalInconsistency(f"fidelity {f!r} exceeds 1")
    return min(f, 1.0)


def eps3_error_rates(states, bob) -> tuple[float, float]:
    """Bit-error rates added in the X and Y bases by Bob's tilted decoding states.

    ``delta_X = (|<Phi_2|Phi'_0>|^2 + |<Phi_0|Phi'_2>|^2) / 2`` and the Y analogue
    with indices (3, 1) and (1, 3).
    """
    def p(i, j):
        return abs(inner_product(states[i], bob[j])) ** 2

    dx = 0.5 * (p(2, 0) + p(0, 2))
    dy = 0.5 * (p(3, 1) + p(1, 3))
    return dx, dy


@dataclass(frozen=True)
class KeyRateInput:
    """Key-rate parameters; angles in radians.

    ``eps1`` (Alice's reference-arm mirror) defaults to 0; nonzero values are
    accepted for exploration and flagged in the result.
    """

    eps2: float
    eps3: float
    delta: float
    q: float
    eps1: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.delta <= 0.5:
            raise DomainError(f"inherent error rate delta={self.delta!r} outside [0, 0.5]")
        if not 0.0 < self.q <= 1.0:
            raise DomainError(f"nonvacuum fraction q={self.q!r} outside (0, 1]")


@dataclass(frozen=True)
class KeyRateResult:
    fidelity: float
    delta_big: float
    delta_X: float
    delta_Y: float
    delta_ph: float
    rate_raw: float
    flags: tuple[str, ...] = field(default=())

    @property
    def rate(self) -> float:
        return max(0.0, self.rate_raw)


def phase_error_bound(delta_y: float, delta_big: float, q: float) -> tuple[float, bool]:
    """Phase-error rate bound ``delta_ph`` and whether ``Delta/q > 1`` forced the clamp."""
    ratio = delta_big / q
    if ratio > 1.0:
        return 0.5, True
    bound = delta_y + 8 * ratio * (
        (1 - ratio) * (1 - 2 * delta_y)
        + math.sqrt(ratio * (1 - ratio) * delta_y * (1 - delta_y))
    )
    return min(0.5, bound), False


def key_rate(inp: KeyRateInput) -> KeyRateResult:
    """Evaluate the key-rate bound for one parameter point.

    Raises:
        DomainError: if an intermediate error rate leaves ``[0, 1]``.
    """
    states = make_states(inp.eps1, inp.eps2)
    rho_x, rho_y = make_basis_mixtures(states)
    fid = fidelity(rho_x, rho_y)
    big = 0.5 * (1.0 - fid)

    dx3, dy3 = eps3_error_rates(states, make_bob_basis(inp.eps3))
    dx = inp.delta + dx3
    dy = inp.delta + dy3
    for name, v in (("delta_X", dx), ("delta_Y", dy)):
        if not 0.0 <= v <= 1.0:
            raise DomainError(f"{name}={v!r} outside [0, 1]")

    dph, clamped = phase_error_bound(dy, big, inp.q)
    flags = []
    if clamped:
        flags.append("delta_over_q_gt_1")
    if inp.eps1 != 0.0:
        flags.append("eps1_nonzero")
    rate_raw = 1.0 - binary_entropy(dph) - binary_entropy(dx)
    return KeyRateResult(fid, big, dx, dy, dph, rate_raw, tuple(flags))
