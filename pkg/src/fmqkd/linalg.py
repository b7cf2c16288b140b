"""Dense Hermitian linear algebra for 2x2 and 3x3 complex matrices.

Vectors and matrices are plain ``numpy`` arrays of dtype ``complex128``.
Only dimensions 2 and 3 are accepted; every state space in this package
fits inside three dimensions.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import NotHermitian, NotPSD, DegenerateStateSpace

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
CLUSTER_GAP = 1e-9
DEFAULT_RANK_TOL = 1e-10

_DIMS = (2, 3)


class EigenDecomposition(NamedTuple):
    """Ascending real eigenvalues and matching orthonormal eigenvectors.

    ``eigenvectors[:, i]`` belongs to ``eigenvalues[i]``.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] not in _DIMS:
        raise ValueError(f"expected a 2x2 or 3x3 matrix, got shape {m.shape}")
    return m


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(np.transpose(a))


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    """Entrywise check ``max|A - A^dag| <= tol * max(1, max|A|)``."""
    m = np.asarray(a, dtype=np.complex128)
    scale = max(1.0, float(np.max(np.abs(m))))
    return bool(np.max(np.abs(m - dagger(m))) <= tol * scale)


def hermitize(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate Hermiticity and return the exactly Hermitian part of ``a``."""
    m = as_matrix(a)
    if not is_hermitian(m, tol):
        err = float(np.max(np.abs(m - dagger(m))))
        raise NotHermitian(f"matrix is not Hermitian (max |A - A^dag| = {err:.3e})")
    return 0.5 * (m + dagger(m))


def _canonical_phase(v: np.ndarray) -> np.ndarray:
    # make the largest-magnitude component real and positive; ties go to
    # the lowest index so the choice is deterministic
    mags = np.abs(v)
    i = int(np.argmax(mags >= mags.max() * (1 - 1e-12)))
    return v * (np.conj(v[i]) / mags[i])


def _canonical_cluster(vecs: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis for the span of ``vecs`` (columns).

    The basis is obtained by projecting the standard basis vectors onto the
    subspace, in order, and orthonormalizing, so it does not depend on the
    arbitrary rotation the eigensolver happened to return.
    """
    n, m = vecs.shape
    proj = vecs @ dagger(vecs)
    basis: list[np.ndarray] = []
    for j in range(n):
        w = proj[:, j].copy()
        for b in basis:
            w -= (np.vdot(b, w)) * b
        norm = np.linalg.norm(w)
        if norm > 1e-6:
            basis.append(w / norm)
        if len(basis) == m:
            break
    return np.column_stack([_canonical_phase(b) for b in basis])


def eig_hermitian(a) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian 2x2 or 3x3 matrix.

    Eigenvalues are returned in ascending order. Eigenvectors are fixed up to
    phase by making their largest component real and positive; inside a
    degenerate cluster (gap < 1e-9) the basis itself is canonicalized as well.

    Raises:
        NotHermitian: if ``a`` is not Hermitian within tolerance.
    """
    h = hermitize(a)
    w, v = np.linalg.eigh(h)
    out = np.empty_like(v)
    i = 0
    n = len(w)
    while i < n:
        j = i + 1
        while j < n and w[j] - w[j - 1] < CLUSTER_GAP:
            j += 1
        if j - i == 1:
            out[:, i] = _canonical_phase(v[:, i])
        else:
            out[:, i:j] = _canonical_cluster(v[:, i:j])
        i = j
    return EigenDecomposition(np.asarray(w, dtype=float), out)


def _psd_spectrum(a) -> EigenDecomposition:
    dec = eig_hermitian(a)
    lam = dec.eigenvalues
    if lam[0] < -PSD_TOL:
        raise NotPSD(f"matrix has negative eigenvalue {lam[0]:.3e}")
    return EigenDecomposition(np.clip(lam, 0.0, None), dec.eigenvectors)


def mat_sqrt(a) -> np.ndarray:
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``(-1e-10, 0)`` are treated as zero.
    """
    dec = _psd_spectrum(a)
    return EigenDecomposition(np.sqrt(dec.eigenvalues), dec.eigenvectors).reconstruct()


def mat_inv_sqrt(a, rank_tol: float = DEFAULT_RANK_TOL) -> np.ndarray:
    """Inverse square root ``A^{-1/2}`` of a full-rank PSD matrix.

    ``rank_tol`` is relative to the trace of ``a``: an eigenvalue counts as
    zero when ``lambda <= rank_tol * Tr(a)``.

    Raises:
        DegenerateStateSpace: if any eigenvalue is (numerically) zero.
    """
    dec = _psd_spectrum(a)
    scale = float(np.sum(dec.eigenvalues)) or 1.0
    lam = dec.eigenvalues
    if np.any(lam <= rank_tol * scale):
        rank = int(np.sum(lam > rank_tol * scale))
        raise DegenerateStateSpace(
            f"matrix has rank {rank} < {len(lam)}; inverse square root undefined"
        )
    return EigenDecomposition(lam ** -0.5, dec.eigenvectors).reconstruct()


def rank_estimate(a, tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of eigenvalues of the Hermitian matrix ``a`` with ``|lambda| > tol``."""
    lam = eig_hermitian(a).eigenvalues
    return int(np.sum(np.abs(lam) > tol))


def is_psd(a, tol: float = PSD_TOL) -> bool:
    return bool(eig_hermitian(a).eigenvalues[0] >= -tol)
