"""Majorization of spectra and the trace-preserving maps that induce it."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DimensionMismatch,
    DimensionTooSmall,
    HermitianMatrix,
    LengthMismatch,
    PositiveMatrix,
    dd_kernel,
    hermitize,
)

__all__ = [
    "MajorizationVerdict",
    "majorizes",
    "eigen_majorizes",
    "choi_map",
    "bosulem_map",
]


@dataclass(frozen=True)
class MajorizationVerdict:
    """Outcome of a majorization test x < y (x majorized by y).

    ``partial_sum_margins[k]`` is sum of the k+1 largest entries of y minus
    the same partial sum for x; majorization requires every margin to be
    nonnegative and the full sums to agree. ``trace_mismatch`` is the signed
    difference sum(x) - sum(y).
    """

    holds: bool
    partial_sum_margins: np.ndarray
    trace_mismatch: float


def majorizes(x: np.ndarray, y: np.ndarray, tol: float = 1e-10) -> MajorizationVerdict:
    """Test whether the real vector x is majorized by y.

    Tolerance is relative: margins may dip to -tol * (||y||_1 + 1) and the
    trace mismatch may be as large as tol * (||y||_1 + 1) without failing.
    """
    x = np.asarray(x, dtype=float).ravel()
    y = np.asarray(y, dtype=float).ravel()
    if x.shape != y.shape:
        raise LengthMismatch(f"length mismatch: {x.size} vs {y.size}")
    xs = np.sort(x)[::-1]
    ys = np.sort(y)[::-1]
    margins = np.cumsum(ys) - np.cumsum(xs)
    mismatch = float(np.sum(x) - np.sum(y))
    scale = float(np.sum(np.abs(y))) + 1.0
    holds = bool(np.all(margins >= -tol * scale) and abs(mismatch) <= tol * scale)
    return MajorizationVerdict(holds=holds, partial_sum_margins=margins,
                               trace_mismatch=mismatch)


def eigen_majorizes(A: HermitianMatrix, B: HermitianMatrix,
                    tol: float = 1e-10) -> MajorizationVerdict:
    """Test whether spec(A) is majorized by spec(B)."""
    if A.dim != B.dim:
        raise DimensionMismatch(f"dimension mismatch: {A.dim} vs {B.dim}")
    return majorizes(np.linalg.eigvalsh(A.entries), np.linalg.eigvalsh(B.entries), tol)


def choi_map(A: HermitianMatrix) -> HermitianMatrix:
    """Positive unital trace-preserving map ((n-1) tr(A) I - A) / (n^2 - n - 1).

    Positive but not completely positive for n >= 3; still pushes every
    Hermitian input to something its input majorizes. Requires n >= 2.
    """
    n = A.dim
    if n < 2:
        raise DimensionTooSmall("choi_map needs dimension at least 2")
    tr = float(np.trace(A.entries).real)
    out = ((n - 1) * tr * np.eye(n) - A.entries) / (n * n - n - 1)
    return HermitianMatrix(hermitize(out))


def bosulem_map(A: PositiveMatrix, X: HermitianMatrix) -> HermitianMatrix:
    """Logarithmic-mean compression of X along the positive matrix A.

    In the eigenbasis of A with eigenvalues a_i, scales the (i, j) entry of X
    by the ratio of the geometric mean sqrt(a_i a_j) to the logarithmic mean
    (a_i - a_j) / (log a_i - log a_j). Unital (A fixed), trace-preserving,
    and a Schatten-p contraction for p >= 1; its output is majorized by X.
    """
    if A.dim != X.dim:
        raise DimensionMismatch(f"dimension mismatch: {A.dim} vs {X.dim}")
    lam, U = A.spectral.eigenvalues, A.spectral.frame
    Xe = U.conj().T @ X.entries @ U
    # geometric mean over logarithmic mean == sqrt(a_i a_j) * dd log
    kernel = np.sqrt(np.outer(lam, lam)) * dd_kernel(lam, "log")
    out = U @ (kernel * Xe) @ U.conj().T
    return HermitianMatrix(hermitize(out))
