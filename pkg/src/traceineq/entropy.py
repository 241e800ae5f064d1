"""Relative entropies between positive matrices.

Three quantities for positive X, W, each normalised so that it vanishes at
X = W and stays nonnegative for arbitrary traces:

* ``umegaki``   tr[X (log X - log W)] + tr W - tr X
* ``bs_entropy``  tr[X log(X^{1/2} W^{-1} X^{1/2})] + tr W - tr X
* ``donald``    sup over Q > 0 with tr[Q W] <= tr X of tr[X log Q],
                plus the same tr W - tr X correction.

They coincide when X and W commute and are ordered donald <= umegaki <=
bs_entropy in general. The Donald value requires an iterative solver; its
optimizer Q is returned alongside a stationarity residual so callers can
judge the accuracy of the value themselves.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .core import (
    ConsistencyError,
    dd_kernel,
    DimensionMismatch,
    HermitianMatrix,
    NonConvergence,
    NotUnitary,
    PositiveMatrix,
    UNITARY_ATOL,
    dd_apply_eig,
    divided_difference_apply,
    fn_apply_eig,
    herm_to_vec,
    hermitize,
    vec_to_herm,
)

__all__ = [
    "umegaki",
    "bs_entropy",
    "DonaldSolution",
    "solve_donald_q",
    "donald",
    "donald_pinched",
    "EntropyChain",
    "entropy_chain",
    "pinsker_bound",
]

BS_CONSISTENCY_RTOL = 1e-7


def _check_pair(X: PositiveMatrix, W: PositiveMatrix) -> None:
    if X.dim != W.dim:
        raise DimensionMismatch(f"dimension mismatch: {X.dim} vs {W.dim}")


def _logm(A: PositiveMatrix) -> np.ndarray:
    return fn_apply_eig(A.spectral.eigenvalues, A.spectral.frame, "log")


def umegaki(X: PositiveMatrix, W: PositiveMatrix) -> float:
    """tr[X (log X - log W)] + tr W - tr X."""
    _check_pair(X, W)
    lx, fx = X.spectral.eigenvalues, X.spectral.frame
    first = float(np.dot(lx, np.log(lx)))
    second = float(np.einsum("ij,ji->", X.entries, _logm(W)).real)
    return first - second + W.trace - X.trace


def bs_entropy(X: PositiveMatrix, W: PositiveMatrix) -> float:
    """tr[X log(X^{1/2} W^{-1} X^{1/2})] + tr W - tr X.

    Evaluated twice, through inequivalent congruences: the defining form
    above and tr[W f(W^{-1/2} X W^{-1/2})] with f(x) = x log x. Disagreement
    beyond a relative 1e-7 raises :class:`ConsistencyError`; the defining
    form is what gets returned.
    """
    _check_pair(X, W)
    rx = fn_apply_eig(X.spectral.eigenvalues, X.spectral.frame, "power", 0.5)
    winv = fn_apply_eig(W.spectral.eigenvalues, W.spectral.frame, "power", -1.0)
    core = PositiveMatrix(hermitize(rx @ winv @ rx))
    lam, U = core.spectral.eigenvalues, core.spectral.frame
    # tr[X log core] with X = rx @ rx
    row = rx @ U
    weights = np.einsum("ij,ij->j", row.conj(), row).real
    primary = float(np.dot(weights, np.log(lam))) + W.trace - X.trace

    rwi = fn_apply_eig(W.spectral.eigenvalues, W.spectral.frame, "power", -0.5)
    inner = PositiveMatrix(hermitize(rwi @ X.entries @ rwi))
    mu, V = inner.spectral.eigenvalues, inner.spectral.frame
    phi = fn_apply_eig(mu, V, "xlogx")
    alternate = float(np.einsum("ij,ji->", W.entries, phi).real) + W.trace - X.trace

    scale = max(1.0, abs(primary), abs(alternate))
    if abs(primary - alternate) > BS_CONSISTENCY_RTOL * scale:
        raise ConsistencyError(
            f"two evaluations of the sandwiched entropy disagree: "
            f"{primary!r} vs {alternate!r}"
        )
    return primary


class DonaldSolution(NamedTuple):
    """Optimizer and diagnostics for the constrained-supremum entropy."""

    q: PositiveMatrix
    objective: float
    residual: float
    iterations: int


def solve_donald_q(X: PositiveMatrix, W: PositiveMatrix,
                   tol: float = 1e-8, max_iter: int = 10000) -> DonaldSolution:
    """Maximize tr[X log Q] over Q > 0 with tr[Q W] <= tr X.

    The trace constraint is active at the optimum, so Q is parametrised as
    tr X * e^L / tr[e^L W] and the concave reduced objective

        g(L) = tr[X L] - tr X * log(tr[e^L W] / tr X)

    is climbed by quasi-Newton iteration from L = log X - log W (already the
    exact optimum whenever X and W commute). Stationarity of the original
    problem is reported as the relative defect of the first-order condition

        d/ds log(Q + s X)|_{s=0} ... applied to X ... = W,

    i.e. the divided-difference derivative of log at Q in direction X must
    reproduce W. Raises :class:`NonConvergence` when the defect stays above
    ``tol``.
    """
    _check_pair(X, W)
    trx = X.trace
    Xe = X.entries
    We = W.entries

    def negative(v: np.ndarray):
        L = vec_to_herm(v, X.dim)
        lam, U = np.linalg.eigh(L)
        shift = lam.max()
        elam = np.exp(lam - shift)
        expL = (U * elam) @ U.conj().T
        z = float(np.einsum("ij,ji->", expL, We).real)  # e^{-shift} tr[e^L W]
        val = float(np.einsum("ij,ji->", Xe, L).real) - trx * (np.log(z / trx) + shift)
        kexp = dd_apply_eig(lam - shift, U, We, "exp")
        grad = Xe - (trx / z) * kexp
        return -val, -herm_to_vec(grad)

    wnorm = float(np.linalg.norm(We))

    def stationarity(v: np.ndarray) -> np.ndarray:
        # In the eigenbasis of L the defect of the first-order condition is
        # the reduced gradient with each entry divided by the exp kernel, so
        # it can be evaluated without forming Q.
        L = vec_to_herm(v, X.dim)
        lam, U = np.linalg.eigh(L)
        shift = lam.max()
        expL = (U * np.exp(lam - shift)) @ U.conj().T
        z = float(np.einsum("ij,ji->", expL, We).real)
        kexp = dd_apply_eig(lam - shift, U, We, "exp")
        G = U.conj().T @ (Xe - (trx / z) * kexp) @ U
        K = dd_kernel(lam - shift, "exp")
        R = (U @ ((z / trx) * G / K) @ U.conj().T)
        return herm_to_vec(hermitize(R))

    v = herm_to_vec(hermitize(_logm(X) - _logm(W)))
    res = minimize(negative, v, jac=True, method="BFGS",
                   options={"gtol": 1e-13, "maxiter": max_iter})
    v = res.x
    iterations = int(res.nit)

    # The quasi-Newton phase leaves a tiny gradient whose stationarity defect
    # can still be amplified by ill conditioning; a few Newton steps on the
    # defect map itself (finite-difference Jacobian, small dimension) push it
    # to the evaluation noise floor.
    r = stationarity(v)
    best_v, best_norm = v, float(np.linalg.norm(r))
    d = v.size
    for _ in range(6):
        if best_norm <= 0.05 * tol * wnorm:
            break
        J = np.empty((d, d))
        eps = 1e-7 * max(1.0, float(np.linalg.norm(v)))
        for j in range(d):
            e = np.zeros(d)
            e[j] = eps
            J[:, j] = (stationarity(v + e) - stationarity(v - e)) / (2.0 * eps)
        try:
            step = np.linalg.solve(J, -r)
        except np.linalg.LinAlgError:
            step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        v = v + step
        iterations += 1
        r = stationarity(v)
        norm = float(np.linalg.norm(r))
        if norm < best_norm:
            best_v, best_norm = v, norm
        else:
            break
    v = best_v

    L = vec_to_herm(v, X.dim)
    lam, U = np.linalg.eigh(L)
    shift = lam.max()
    expL = (U * np.exp(lam - shift)) @ U.conj().T
    z = float(np.einsum("ij,ji->", expL, We).real)
    Q = PositiveMatrix(hermitize(trx * expL / z))
    objective = float(np.einsum("ij,ji->", Xe,
                                fn_apply_eig(Q.spectral.eigenvalues,
                                             Q.spectral.frame, "log")).real)
    defect = divided_difference_apply(Q, HermitianMatrix(Xe), "log").entries - We
    residual = float(np.linalg.norm(defect) / wnorm)
    if residual > tol:
        raise NonConvergence(
            f"stationarity residual {residual:.3e} above {tol:.0e}",
            iterations=iterations, best_residual=residual)
    return DonaldSolution(q=Q, objective=objective, residual=residual,
                          iterations=iterations)


def donald(X: PositiveMatrix, W: PositiveMatrix, tol: float = 1e-8) -> float:
    """Constrained-supremum relative entropy (the smallest of the three)."""
    sol = solve_donald_q(X, W, tol=tol)
    return sol.objective + W.trace - X.trace


def donald_pinched(X: PositiveMatrix, W: PositiveMatrix,
                   frame: np.ndarray) -> float:
    """Classical relative entropy of the diagonals of X and W in a frame.

    The frame columns must be orthonormal; pinching both matrices to that
    basis and forming sum_j x_j (log x_j - log w_j) + tr W - tr X gives a
    lower bound on :func:`donald` for every frame, with equality at the
    common eigenbasis when X and W commute.
    """
    _check_pair(X, W)
    frame = np.asarray(frame, dtype=complex)
    if frame.shape != (X.dim, X.dim):
        raise DimensionMismatch(f"frame shape {frame.shape} does not match dim {X.dim}")
    if not np.allclose(frame.conj().T @ frame, np.eye(X.dim), atol=UNITARY_ATOL):
        raise NotUnitary("frame columns are not orthonormal")
    x = np.einsum("ji,jk,ki->i", frame.conj(), X.entries, frame).real
    w = np.einsum("ji,jk,ki->i", frame.conj(), W.entries, frame).real
    return float(np.dot(x, np.log(x) - np.log(w))) + W.trace - X.trace


class EntropyChain(NamedTuple):
    lower: float
    umegaki: float
    upper: float


def entropy_chain(X: PositiveMatrix, W: PositiveMatrix,
                  chain_tol: float = 1e-8) -> EntropyChain:
    """All three entropies at once, with the ordering asserted.

    The constrained-supremum value never exceeds the Umegaki value, which
    never exceeds the sandwiched value; a violation beyond ``chain_tol``
    relative to the magnitude of the values raises :class:`ConsistencyError`
    since it can only come from a solver or conditioning problem.
    """
    lo = donald(X, W)
    mid = umegaki(X, W)
    hi = bs_entropy(X, W)
    scale = max(1.0, abs(lo), abs(mid), abs(hi))
    if lo > mid + chain_tol * scale or mid > hi + chain_tol * scale:
        raise ConsistencyError(
            f"entropy ordering violated: {lo!r} <= {mid!r} <= {hi!r} failed")
    return EntropyChain(lower=lo, umegaki=mid, upper=hi)


def pinsker_bound(X: PositiveMatrix, W: PositiveMatrix) -> float:
    """(tr X / 2) * || X / tr X - W / tr W ||_1 squared.

    Lower-bounds every one of the three relative entropies.
    """
    _check_pair(X, W)
    diff = X.entries / X.trace - W.entries / W.trace
    tn = float(np.sum(np.abs(np.linalg.eigvalsh(hermitize(diff)))))
    return 0.5 * X.trace * tn * tn
