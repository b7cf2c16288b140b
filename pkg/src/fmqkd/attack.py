"""Passive Faraday-mirror (PFM) attack on Alice's imperfect-mirror states.

Eve intercepts each pulse and measures it with five operators
``{F_vac, F_0, ..., F_3}``. Outcome ``F_k`` makes her resend the standard
BB84 state ``k``; ``F_vac`` is treated as a lost pulse. The operators are
the minimum-error construction

    F_k = r * rho^{-1/2} |E_k><E_k| rho^{-1/2}

where ``|E_k>`` is the eigenvector of ``rho^{-1/2} L_k rho^{-1/2}`` with the
smallest nonzero eigenvalue and ``r`` is the largest scale keeping ``F_vac``
positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateStateSpace, NumericalInconsistency
from .linalg import (
    CLUSTER_GAP,
    DEFAULT_RANK_TOL,
    PSD_TOL,
    eig_hermitian,
    mat_inv_sqrt,
    rank_estimate,
)
from .states import StateEnsemble, make_ensemble

IMAG_TOL = 1e-10


@dataclass(frozen=True)
class PovmSet:
    F: list[np.ndarray]
    F_vac: np.ndarray
    r: float
    diagnostics: dict = field(default_factory=dict, compare=False)

    @property
    def operators(self) -> list[np.ndarray]:
        return [self.F_vac, *self.F]

    def completeness_error(self) -> float:
        total = self.F_vac + sum(self.F)
        return float(np.max(np.abs(total - np.eye(total.shape[0]))))

    def min_eigenvalue(self) -> float:
        return min(eig_hermitian(op).eigenvalues[0] for op in self.operators)


@dataclass(frozen=True)
class AttackMetrics:
    qber: float
    p_succ: float


def build_povm(ensemble: StateEnsemble, rank_tol: float = DEFAULT_RANK_TOL) -> PovmSet:
    """Construct Eve's five-outcome measurement for ``ensemble``.

    Raises:
        DegenerateStateSpace: if the signal states span only two dimensions
            (``eps2 == 0``); the attack has nothing to exploit then.
    """
    rho = ensemble.rho
    scale = float(np.trace(rho).real)
    if rank_estimate(rho, rank_tol * scale) < rho.shape[0]:
        raise DegenerateStateSpace("density operator is rank deficient; PFM attack undefined")
    ris = mat_inv_sqrt(rho, rank_tol)

    M = []
    picked = []
    ties = []
    for L in ensemble.L:
        dec = eig_hermitian(ris @ L @ ris)
        # eigenvalues are ascending; skip the (numerically) zero ones
        idx = np.flatnonzero(dec.eigenvalues > rank_tol)
        if idx.size == 0:
            raise NumericalInconsistency("no nonzero eigenvalue in rho^-1/2 L rho^-1/2")
        i = int(idx[0])
        ties.append(
            idx.size > 1 and dec.eigenvalues[idx[1]] - dec.eigenvalues[i] < CLUSTER_GAP
        )
        picked.append(float(dec.eigenvalues[i]))
        y = ris @ dec.eigenvectors[:, i]
        M.append(np.outer(y, y.conj()))

    lam_max = eig_hermitian(sum(M)).eigenvalues[-1]
    r = 1.0 / lam_max
    F = [r * m for m in M]
    F_vac = np.eye(rho.shape[0], dtype=np.complex128) - sum(F)
    diag = {"eigenvalues": picked, "degenerate_choice": ties}
    return PovmSet(F, F_vac, float(r), diag)


def _real_trace(m: np.ndarray) -> float:
    t = np.trace(m)
    if abs(t.imag) >= IMAG_TOL:
        raise NumericalInconsistency(f"trace has imaginary part {t.imag:.3e}")
    return float(t.real)


def attack_metrics(ensemble: StateEnsemble, povm: PovmSet) -> AttackMetrics:
    """QBER Eve induces and her conclusive-outcome probability.

    ``QBER = sum Tr(F_k L_k) / sum Tr(F_k rho)`` and
    ``P_succ = sum Tr(F_k rho) / 4``.
    """
    errs = sum(_real_trace(F @ L) for F, L in zip(povm.F, ensemble.L))
    clicks = sum(_real_trace(F @ ensemble.rho) for F in povm.F)
    if clicks <= 0:
        raise NumericalInconsistency("POVM never produces a conclusive outcome")
    qber = errs / clicks
    p_succ = clicks / 4
    for name, v in (("qber", qber), ("p_succ", p_succ)):
        if not -PSD_TOL <= v <= 1 + PSD_TOL:
            raise NumericalInconsistency(f"{name}={v!r} outside [0, 1]")
    return AttackMetrics(min(max(qber, 0.0), 1.0), min(max(p_succ, 0.0), 1.0))


def run_attack(eps1: float, eps2: float, rank_tol: float = DEFAULT_RANK_TOL) -> AttackMetrics:
    """Convenience wrapper: ensemble, POVM and metrics for one mirror setting."""
    ens = make_ensemble(eps1, eps2)
    return attack_metrics(ens, build_povm(ens, rank_tol))
