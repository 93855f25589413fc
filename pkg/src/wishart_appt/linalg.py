"""Dense Hermitian primitives with an explicit tolerance policy.

Matrices are plain complex numpy arrays. ``hermitize`` is the Hermitian
constructor: it symmetrizes (A + A*)/2 instead of rejecting the 1-ulp
asymmetries produced by accumulation in G @ G*. Spectra are real 1-D arrays
sorted non-increasing.
"""
from __future__ import annotations

import numpy as np

#: relative PSD tolerance, scaled by the operator norm: entries of the
#: ordering-pair matrices are O(1/d), so absolute tolerances misclassify.
PSD_RTOL = 1e-10


class LinAlgFailure(RuntimeError):
    """Eigensolver failed to converge; never silently ignored."""


def hermitize(a) -> np.ndarray:
    """(A + A*)/2 as a complex array; rejects non-square or non-finite input."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise ValueError("matrix has non-finite entries")
    return 0.5 * (m + m.conj().T)


def hermitian_eigenvalues(a) -> np.ndarray:
    """All eigenvalues of a Hermitian matrix, sorted non-increasing."""
    m = hermitize(a)
    try:
        values = np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:
        raise LinAlgFailure(f"eigensolver did not converge on a {m.shape[0]}x{m.shape[0]} matrix") from exc
    return values[::-1].copy()


def operator_norm(a) -> float:
    """max |eigenvalue| of a Hermitian matrix."""
    values = hermitian_eigenvalues(a)
    return float(max(values[0], -values[-1], 0.0))


def max_abs_entry(a) -> float:
    m = np.asarray(a)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m)))


def is_psd(a, tol: float | None = None) -> bool:
    """True iff the smallest eigenvalue is >= -tol.

    Default tol is PSD_RTOL times the operator norm, making the test
    scale-free; pass tol explicitly to override.
    """
    values = hermitian_eigenvalues(a)
    if tol is None:
        tol = PSD_RTOL * float(max(values[0], -values[-1], 0.0))
    if tol < 0:
        raise ValueError("tol must be >= 0")
    return bool(values[-1] >= -tol)
