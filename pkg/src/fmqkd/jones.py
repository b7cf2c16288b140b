"""Jones-calculus models of Faraday mirrors and birefringent fiber.

Covers the round-trip birefringence compensation of a Faraday mirror and
the four-mirror consistency argument: whether a manufacturer can choose the
rotation errors of all four mirrors so that the states reaching Bob's
coupler look exactly like those of a perfect system for every phase setting.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MAX_ABS_EPSILON = 0.2  # rad; physical rotation errors are ~1 degree
HORIZONTAL = np.array([1.0, 0.0], dtype=np.complex128)
PHASE_STEP = np.pi / 2  # delta_a = delta_b in the one-way system


def _check_epsilon(eps: float) -> float:
    eps = float(eps)
    if not np.isfinite(eps) or abs(eps) > MAX_ABS_EPSILON:
        raise DomainError(
            f"rotation-angle error {eps!r} rad outside |eps| <= {MAX_ABS_EPSILON}"
        )
    return eps


@dataclass(frozen=True)
class FaradayMirror:
    """Faraday mirror whose rotator is off from 45 degrees by ``epsilon`` (rad)."""

    epsilon: float = 0.0

    def __post_init__(self):
        _check_epsilon(self.epsilon)

    def jones(self) -> np.ndarray:
        return fm_jones(self.epsilon)


@dataclass(frozen=True)
class BirefringentSegment:
    """Fiber segment with eigenmodes rotated by ``theta`` and phases ``phi_o``/``phi_e``."""

    theta: float
    phi_o: float
    phi_e: float

    def forward(self) -> np.ndarray:
        return birefringence(self.theta, self.phi_o, self.phi_e)

    def backward(self) -> np.ndarray:
        return birefringence(-self.theta, self.phi_o, self.phi_e)


@dataclass(frozen=True)
class FourMirrorConfig:
    eps1: float = 0.0
    eps2: float = 0.0
    eps3: float = 0.0
    eps4: float = 0.0
    k: int = 0
    delta_a: float = PHASE_STEP
    delta_b: float = PHASE_STEP

    def __post_init__(self):
        for e in (self.eps1, self.eps2, self.eps3, self.eps4):
            _check_epsilon(e)
        if self.k not in (0, 1, 2, 3):
            raise ValueError(f"phase index k must be in 0..3, got {self.k!r}")


def fm_jones(epsilon) -> np.ndarray:
    """Jones matrix ``-[[sin 2e, cos 2e], [cos 2e, -sin 2e]]`` of an imperfect mirror.

    ``epsilon`` may be a float or a :class:`FaradayMirror`.
    """
    if isinstance(epsilon, FaradayMirror):
        epsilon = epsilon.epsilon
    s, c = np.sin(2 * epsilon), np.cos(2 * epsilon)
    return -np.array([[s, c], [c, -s]], dtype=np.complex128)


def _rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def birefringence(theta: float, phi_o: float, phi_e: float) -> np.ndarray:
    """Jones matrix ``T(theta)`` of a birefringent segment (retarder in a rotated frame)."""
    phases = np.diag(np.exp(1j * np.array([phi_o, phi_e])))
    r = _rotation(theta)
    return r @ phases @ r.T


def roundtrip(segment: BirefringentSegment, fm) -> np.ndarray:
    """Forward pass through ``segment``, reflection at ``fm``, backward pass.

    Returns ``T(-theta) @ FM(eps) @ T(theta)``. For a perfect mirror this is
    ``exp(i(phi_o + phi_e)) * FM(0)`` whatever the fiber does.
    """
    return segment.backward() @ fm_jones(fm) @ segment.forward()


def four_mirror_states(cfg: FourMirrorConfig) -> tuple[np.ndarray, np.ndarray]:
    """Jones vectors at Bob's coupler for the (S_a, L_b) and (L_a, S_b) paths.

    Horizontal input; closed form for mirrors FM1 (Alice short arm),
    FM2 (Alice long arm), FM3 (Bob long arm) and FM4 (Bob short arm).
    """
    s1, c1 = np.sin(2 * cfg.eps1), np.cos(2 * cfg.eps1)
    s2, c2 = np.sin(2 * cfg.eps2), np.cos(2 * cfg.eps2)
    s3, c3 = np.sin(2 * cfg.eps3), np.cos(2 * cfg.eps3)
    s4, c4 = np.sin(2 * cfg.eps4), np.cos(2 * cfg.eps4)
    pb = np.exp(1j * cfg.k * cfg.delta_b)
    pa = np.exp(1j * cfg.k * cfg.delta_a)
    short_long = np.array(
        [pb * pb * s1 * s3 + pb * c1 * c3, pb * s1 * c3 - c1 * s3],
        dtype=np.complex128,
    )
    long_short = np.array(
        [pa * pa * s2 * s4 + pa * c2 * c4, pa * pa * s2 * c4 - pa * c2 * s4],
        dtype=np.complex128,
    )
    return short_long, long_short


def ideal_states(k: int, delta_a: float = PHASE_STEP, delta_b: float = PHASE_STEP):
    """Path outputs of a perfect system: ``e^{ik delta_b}[1,0]`` and ``e^{ik delta_a}[1,0]``."""
    return np.exp(1j * k * delta_b) * HORIZONTAL, np.exp(1j * k * delta_a) * HORIZONTAL


def _same(u: np.ndarray, v: np.ndarray, tol: float, up_to_phase: bool) -> bool:
    if up_to_phase:
        ov = np.vdot(v, u)
        if abs(ov) > 0:
            v = v * (ov / abs(ov))
    return bool(np.max(np.abs(u - v)) <= tol)


@dataclass(frozen=True)
class ConsistencyResult:
    per_k: tuple[bool, bool, bool, bool]

    @property
    def consistent_all_k(self) -> bool:
        return all(self.per_k)


def consistency_check(
    eps1: float,
    eps2: float,
    eps3: float,
    eps4: float,
    tol: float = 1e-9,
    up_to_phase: bool = False,
) -> ConsistencyResult:
    """Check whether imperfect mirrors mimic a perfect system for each k.

    ``per_k[k]`` is true iff both path outputs equal the perfect-system
    outputs at phase index ``k``. By default vectors are compared entrywise;
    ``up_to_phase=True`` ignores a global phase on each vector instead.
    """
    flags = []
    for k in range(4):
        got = four_mirror_states(FourMirrorConfig(eps1, eps2, eps3, eps4, k))
        want = ideal_states(k)
        flags.append(all(_same(g, w, tol, up_to_phase) for g, w in zip(got, want)))
    return ConsistencyResult(tuple(flags))
