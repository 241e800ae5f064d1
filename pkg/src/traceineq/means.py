"""Weighted geometric means, harmonic means, and geodesics on positive matrices.

The weighted geometric mean of positive matrices X, Y with parameter t is

    X #_t Y = X^{1/2} (X^{-1/2} Y X^{-1/2})^t X^{1/2}

defined here for every real t. For t in [0, 1] it traces the geodesic from X
to Y in the conjugation-invariant metric on the positive cone; outside [0, 1]
it is the extension of the same constant-speed curve.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad_vec

from .core import (
    DimensionMismatch,
    HermitianMatrix,
    PositiveMatrix,
    QuadratureFailure,
    fn_apply_eig,
    hermitize,
)

__all__ = [
    "weighted_geometric_mean",
    "harmonic_mean",
    "parallel_sum",
    "geometric_mean_quadrature",
    "geodesic_distance",
    "midpoint_inverse",
    "GeodesicPath",
]


def _pow(A: PositiveMatrix, p: float) -> np.ndarray:
    return fn_apply_eig(A.spectral.eigenvalues, A.spectral.frame, "power", p)


def _check_pair(X: PositiveMatrix, Y: PositiveMatrix) -> None:
    if X.dim != Y.dim:
        raise DimensionMismatch(f"dimension mismatch: {X.dim} vs {Y.dim}")


def weighted_geometric_mean(X: PositiveMatrix, Y: PositiveMatrix, t: float) -> PositiveMatrix:
    """Weighted geometric mean X #_t Y for any real weight t.

    Satisfies X #_0 Y = X, X #_1 Y = Y, X #_{-1} Y = X Y^{-1} X, and the
    swap identity X #_t Y = Y #_{1-t} X.
    """
    _check_pair(X, Y)
    rx = _pow(X, 0.5)
    rxi = _pow(X, -0.5)
    inner = PositiveMatrix(hermitize(rxi @ Y.entries @ rxi))
    mid = _pow(inner, float(t))
    return PositiveMatrix(hermitize(rx @ mid @ rx))


def parallel_sum(A: PositiveMatrix, B: PositiveMatrix) -> PositiveMatrix:
    """(A^{-1} + B^{-1})^{-1}, half the harmonic mean."""
    _check_pair(A, B)
    s = _pow(A, -1.0) + _pow(B, -1.0)
    return PositiveMatrix(np.linalg.inv(hermitize(s)))


def harmonic_mean(A: PositiveMatrix, B: PositiveMatrix) -> PositiveMatrix:
    """A : B = 2 (A^{-1} + B^{-1})^{-1}."""
    return PositiveMatrix(2.0 * parallel_sum(A, B).entries)


def geometric_mean_quadrature(X: PositiveMatrix, Y: PositiveMatrix, t: float,
                              rel_tol: float = 1e-7) -> PositiveMatrix:
    """X #_t Y for t in (0, 1) by adaptive quadrature over harmonic-type means.

    Uses the convergent integral representation

        X #_t Y = (sin pi t / pi) * int_0^inf s^{t-1} (X^{-1} + s Y^{-1})^{-1} ds

    split at s = 1, with each half rescaled so the power-law endpoint
    singularity is absorbed into the variable of integration. Shares no code
    path with :func:`weighted_geometric_mean`, so it serves as an independent
    oracle. Raises :class:`QuadratureFailure` when the error estimate exceeds
    ``rel_tol`` times the operator norm of the result.
    """
    _check_pair(X, Y)
    if not 0.0 < t < 1.0:
        raise QuadratureFailure(f"integral representation requires 0 < t < 1, got {t}")
    xinv = _pow(X, -1.0)
    yinv = _pow(Y, -1.0)
    pref = np.sin(np.pi * t) / np.pi

    # s in (0, 1] with s = v^{1/t}; s in [1, inf) mapped to w in (0, 1] by
    # s -> 1/s and then w = u^{1/(1-t)}. Both integrands are then bounded.
    def integrand(v: float) -> np.ndarray:
        low = np.linalg.inv(xinv + v ** (1.0 / t) * yinv) / t
        high = np.linalg.inv(v ** (1.0 / (1.0 - t)) * xinv + yinv) / (1.0 - t)
        return pref * (low + high)

    val, err = quad_vec(integrand, 0.0, 1.0, epsabs=1e-14, epsrel=1e-10)
    result = hermitize(val)
    scale = float(np.linalg.norm(result, ord=2))
    if err > rel_tol * max(scale, 1e-300):
        raise QuadratureFailure(
            f"quadrature error estimate {err:.3e} exceeds {rel_tol:.0e} * {scale:.3e}"
        )
    return PositiveMatrix(result)


def geodesic_distance(X: PositiveMatrix, Y: PositiveMatrix) -> float:
    """Conjugation-invariant distance || log(X^{-1/2} Y X^{-1/2}) ||_HS."""
    _check_pair(X, Y)
    rxi = _pow(X, -0.5)
    lam = np.linalg.eigvalsh(hermitize(rxi @ Y.entries @ rxi))
    return float(np.linalg.norm(np.log(lam)))


def midpoint_inverse(Q: PositiveMatrix, Y: PositiveMatrix) -> PositiveMatrix:
    """Congruence Q^{1/2} Y Q^{1/2}.

    Inverts Z |-> Z #_{1/2} Y^{-1} in the sense that the returned Z
    satisfies Z #_{1/2} Y^{-1} = Q^{1/2}.
    """
    _check_pair(Q, Y)
    rq = _pow(Q, 0.5)
    return PositiveMatrix(hermitize(rq @ Y.entries @ rq))


class GeodesicPath:
    """The constant-speed curve t |-> start #_t end through the positive cone.

    Spectral data of start^{-1/2} end start^{-1/2} is cached at construction,
    so evaluating many parameter values costs one small matrix product each.
    """

    __slots__ = ("start", "end", "_rx", "_lam", "_frame")

    def __init__(self, start: PositiveMatrix, end: PositiveMatrix):
        _check_pair(start, end)
        self.start = start
        self.end = end
        self._rx = _pow(start, 0.5)
        rxi = _pow(start, -0.5)
        inner = PositiveMatrix(hermitize(rxi @ end.entries @ rxi))
        self._lam = inner.spectral.eigenvalues
        self._frame = inner.spectral.frame

    def evaluate(self, t: float) -> PositiveMatrix:
        mid = fn_apply_eig(self._lam, self._frame, "power", float(t))
        return PositiveMatrix(hermitize(self._rx @ mid @ self._rx))

    def length(self) -> float:
        return float(np.linalg.norm(np.log(self._lam)))

    def velocity(self, t: float, h: float = 1e-5) -> HermitianMatrix:
        """Central-difference derivative of the path at parameter t."""
        fwd = self.evaluate(t + h).entries
        bwd = self.evaluate(t - h).entries
        return HermitianMatrix((fwd - bwd) / (2.0 * h))
