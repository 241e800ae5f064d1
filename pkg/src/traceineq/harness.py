"""Randomized verification harness for the trace inequalities in this package.

Every registered check draws reproducible random instances, evaluates both
sides of one inequality (or the defect of one identity), and records
per-trial results. A report is a pure function of (check id, params, seed,
dim, kappa, trials, tol): rerunning with the same inputs reproduces it bit
for bit.

Record conventions: ``lhs <= rhs`` is the claim, ``gap = rhs - lhs``, and a
trial passes when ``gap >= -tol * scale`` with ``scale = max(1, |lhs|,
|rhs|)``. Identity checks store a scale-normalized defect as ``lhs`` against
``rhs = 0``. ``commNorm`` is the scale-normalized commutator of the pair of
matrices whose noncommutativity drives the strictness of the inequality.
"""

from __future__ import annotations

import csv
import io
import json
import zlib
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .core import (
    HermitianMatrix,
    ParamOutOfDomain,
    PositiveMatrix,
    UnknownCheckId,
    UnknownSuite,
    fn_apply_eig,
    divided_difference_apply,
    hermitize,
    pinch,
)
from .core import _gaussian_complex, _haar_unitary, _positive_from
from .entropy import bs_entropy, donald, pinsker_bound, umegaki
from .legendre import (
    exp_difference_check,
    geo_exp_lower,
    gibbs_state,
    golden_thompson_chain,
    phi_donald,
    phi_umegaki,
)
from .majorization import bosulem_map, choi_map, eigen_majorizes
from .means import (
    geodesic_distance,
    geometric_mean_quadrature,
    weighted_geometric_mean,
)

__all__ = [
    "CheckDescriptor",
    "TrialRecord",
    "CheckReport",
    "catalogue",
    "suites",
    "run_check",
    "run_suite",
    "report_to_json",
    "report_to_csv",
    "STRICT_CHECKS",
    "strictness_min_gaps",
]


# ---------------------------------------------------------------------------
# Result types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CheckDescriptor:
    check_id: str
    suite: str
    statement: str
    ensemble: str
    params: Dict[str, float]
    tol: float
    cap: Optional[int] = None


@dataclass(frozen=True)
class TrialRecord:
    i: int
    lhs: float
    rhs: float
    gap: float
    comm_norm: float
    passed: bool


@dataclass(frozen=True)
class CheckReport:
    check_id: str
    params: Dict[str, float]
    seed: int
    dim: int
    trials: int
    tol: float
    failures: int
    min_gap: float
    records: Tuple[TrialRecord, ...]


# ---------------------------------------------------------------------------
# Reproducible instance generation
# ---------------------------------------------------------------------------

_MASK = 0xFFFFFFFFFFFFFFFF


def _check_key(seed: int, check_id: str) -> int:
    crc = zlib.crc32(check_id.encode("utf-8"))
    seq = np.random.SeedSequence((seed & _MASK, crc))
    return int(seq.generate_state(1, np.uint64)[0])


class _Ctx:
    """Per-trial source of matrices, scalar randomness, and parameters."""

    def __init__(self, dim: int, kappa: float, key: int, trial: int,
                 params: Dict[str, float], commuting: bool):
        self.dim = dim
        self.kappa = kappa
        self.key = key
        self.trial = trial
        self.params = params
        self.commuting = commuting

    def rng(self, slot: int) -> np.random.Generator:
        seq = np.random.SeedSequence((self.key, self.trial, slot))
        return np.random.Generator(np.random.Philox(seq))

    def scalars(self) -> np.random.Generator:
        return self.rng(0xA5)

    def hermitian(self, slot: int = 0) -> HermitianMatrix:
        return HermitianMatrix(hermitize(_gaussian_complex(self.rng(slot), self.dim)))

    def hermitian_pair(self) -> Tuple[HermitianMatrix, HermitianMatrix]:
        if self.commuting:
            rng = self.rng(0)
            u = _haar_unitary(rng, self.dim)
            a = rng.standard_normal(self.dim)
            b = rng.standard_normal(self.dim)
            return (HermitianMatrix(hermitize((u * a) @ u.conj().T)),
                    HermitianMatrix(hermitize((u * b) @ u.conj().T)))
        return self.hermitian(0), self.hermitian(1)

    def positive(self, slot: int = 0) -> PositiveMatrix:
        return PositiveMatrix(_positive_from(self.rng(slot), self.dim, self.kappa))

    def positive_pair(self) -> Tuple[PositiveMatrix, PositiveMatrix]:
        if self.commuting:
            rng = self.rng(0)
            u = _haar_unitary(rng, self.dim)
            half = 0.5 * np.log(self.kappa)
            a = np.exp(rng.uniform(-half, half, size=self.dim))
            b = np.exp(rng.uniform(-half, half, size=self.dim))
            return (PositiveMatrix(hermitize((u * a) @ u.conj().T)),
                    PositiveMatrix(hermitize((u * b) @ u.conj().T)))
        return self.positive(0), self.positive(1)

    def positive_triple(self) -> Tuple[PositiveMatrix, PositiveMatrix, PositiveMatrix]:
        """(X, Y, Z) with tr Z = tr X; in commuting mode Z = X and [X, Y] = 0."""
        if self.commuting:
            x, y = self.positive_pair()
            return x, y, x
        x, y = self.positive(0), self.positive(1)
        z = self.positive(2)
        z = PositiveMatrix(z.entries * (x.trace / z.trace))
        return x, y, z

    def unitary(self, slot: int = 3) -> np.ndarray:
        return _haar_unitary(self.rng(slot), self.dim)


def _comm(A: np.ndarray, B: np.ndarray) -> float:
    na = float(np.linalg.norm(A))
    nb = float(np.linalg.norm(B))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.linalg.norm(A @ B - B @ A)) / (na * nb)


def _record(i: int, lhs: float, rhs: float, comm: float, tol: float,
            passed: Optional[bool] = None) -> TrialRecord:
    gap = rhs - lhs
    scale = max(1.0, abs(lhs), abs(rhs))
    if passed is None:
        passed = gap >= -tol * scale
    return TrialRecord(i=i, lhs=float(lhs), rhs=float(rhs), gap=float(gap),
                       comm_norm=float(comm), passed=bool(passed))


# ---------------------------------------------------------------------------
# Catalogue plumbing
# ---------------------------------------------------------------------------

_CATALOGUE: Dict[str, CheckDescriptor] = {}
_IMPL: Dict[str, Callable[[_Ctx, float], TrialRecord]] = {}

SUITE_NAMES = ("log", "exp", "entropy", "convexity", "classical", "geometry",
               "majorization", "derivative")


def _register(check_id: str, suite: str, statement: str, ensemble: str,
              params: Optional[Dict[str, float]] = None, tol: float = 1e-9,
              cap: Optional[int] = None):
    def deco(fn):
        _CATALOGUE[check_id] = CheckDescriptor(
            check_id=check_id, suite=suite, statement=statement,
            ensemble=ensemble, params=dict(params or {}), tol=tol, cap=cap)
        _IMPL[check_id] = fn
        return fn
    return deco


def catalogue() -> Dict[str, CheckDescriptor]:
    return dict(_CATALOGUE)


def suites() -> Dict[str, Tuple[str, ...]]:
    out = {name: tuple(cid for cid, d in _CATALOGUE.items() if d.suite == name)
           for name in SUITE_NAMES}
    out["all"] = tuple(_CATALOGUE)
    return out


# ---------------------------------------------------------------------------
# Shared numeric helpers
# ---------------------------------------------------------------------------

def _ppow(P: PositiveMatrix, p: float) -> PositiveMatrix:
    if p == 1.0:
        return P
    return PositiveMatrix(fn_apply_eig(P.spectral.eigenvalues, P.spectral.frame,
                                       "power", p))


def _logm(P: PositiveMatrix) -> np.ndarray:
    return fn_apply_eig(P.spectral.eigenvalues, P.spectral.frame, "log")


def _tr2(A: np.ndarray, B: np.ndarray) -> float:
    return float(np.einsum("ij,ji->", A, B).real)


def _tr_x_log(X: PositiveMatrix, P: PositiveMatrix) -> float:
    """tr[X log P]."""
    return _tr2(X.entries, _logm(P))


def _tr_xlogx(X: PositiveMatrix) -> float:
    lam = X.spectral.eigenvalues
    return float(np.dot(lam, np.log(lam)))


def _log_gram(M: np.ndarray) -> np.ndarray:
    """log(M^* M) via singular values; stays finite for huge condition
    numbers where forming M^* M first would round tiny eigenvalues negative."""
    _, s, vh = np.linalg.svd(M)
    v = vh.conj().T
    return hermitize((v * (2.0 * np.log(s))) @ v.conj().T)


def _expm(H: np.ndarray) -> np.ndarray:
    lam, U = np.linalg.eigh(hermitize(H))
    return (U * np.exp(lam)) @ U.conj().T


def _opnorm(A: np.ndarray) -> float:
    return float(np.linalg.norm(A, ord=2))


def _want(params: Dict[str, float], key: str, default: float, *,
          low: float = -np.inf, high: float = np.inf) -> float:
    v = float(params.get(key, default))
    if not low <= v <= high:
        raise ParamOutOfDomain(f"parameter {key}={v!r} outside [{low}, {high}]")
    return v


# ---------------------------------------------------------------------------
# log suite
# ---------------------------------------------------------------------------

@_register(
    "log-resolvent-map", "log",
    "tr[X log(D log(Y)[Z])] <= tr[X (log X - log Y)] for positive X, Y, Z "
    "with tr Z = tr X, where D log(Y) is the derivative of log at Y",
    "positiveTriple")
def _chk_log_resolvent(ctx: _Ctx, tol: float) -> TrialRecord:
    X, Y, Z = ctx.positive_triple()
    mapped = PositiveMatrix(divided_difference_apply(Y, Z, "log").entries)
    lhs = _tr_x_log(X, mapped)
    rhs = _tr_xlogx(X) - _tr_x_log(X, Y)
    return _record(ctx.trial, lhs, rhs, _comm(Y.entries, Z.entries), tol)


@_register(
    "log-y-sandwich", "log",
    "(1/p) tr[X log(Y^{p/2} Z^p Y^{p/2})] <= tr[X (log X + log Y)] for "
    "positive X, Y, Z with tr Z = tr X and p > 0",
    "positiveTriple", params={"p": 1.0})
def _chk_log_y_sandwich(ctx: _Ctx, tol: float) -> TrialRecord:
    p = _want(ctx.params, "p", 1.0, low=1e-12)
    X, Y, Z = ctx.positive_triple()
    yh = fn_apply_eig(Y.spectral.eigenvalues, Y.spectral.frame, "power", p / 2.0)
    zh = fn_apply_eig(Z.spectral.eigenvalues, Z.spectral.frame, "power", p / 2.0)
    lhs = _tr2(X.entries, _log_gram(zh @ yh)) / p
    rhs = _tr_xlogx(X) + _tr_x_log(X, Y)
    return _record(ctx.trial, lhs, rhs, _comm(Y.entries, Z.entries), tol)


@_register(
    "log-geomean", "log",
    "tr[X log(Y^r #_s Z^r)] <= r tr[X (s log X + (1-s) log Y)] for positive "
    "X, Y, Z with tr Z = tr X, r > 0, s in [0, 1]",
    "positiveTriple", params={"r": 1.0, "s": 0.5})
def _chk_log_geomean(ctx: _Ctx, tol: float) -> TrialRecord:
    r = _want(ctx.params, "r", 1.0, low=1e-12)
    s = _want(ctx.params, "s", 0.5, low=0.0, high=1.0)
    X, Y, Z = ctx.positive_triple()
    mean = weighted_geometric_mean(_ppow(Y, r), _ppow(Z, r), s)
    lhs = _tr_x_log(X, mean)
    rhs = r * (s * _tr_xlogx(X) + (1.0 - s) * _tr_x_log(X, Y))
    return _record(ctx.trial, lhs, rhs, _comm(Y.entries, Z.entries), tol)


@_register(
    "log-geomean-extended", "log",
    "tr[X log(Z^r #_t Y^r)] >= r tr[X ((1-t) log X + t log Y)] for positive "
    "X, Y, Z with tr Z = tr X, r > 0, t >= 1",
    "positiveTriple", params={"r": 1.0, "t": 1.5})
def _chk_log_geomean_ext(ctx: _Ctx, tol: float) -> TrialRecord:
    r = _want(ctx.params, "r", 1.0, low=1e-12)
    t = _want(ctx.params, "t", 1.5, low=1.0)
    X, Y, Z = ctx.positive_triple()
    mean = weighted_geometric_mean(_ppow(Z, r), _ppow(Y, r), t)
    lhs = r * ((1.0 - t) * _tr_xlogx(X) + t * _tr_x_log(X, Y))
    rhs = _tr_x_log(X, mean)
    return _record(ctx.trial, lhs, rhs, _comm(Y.entries, Z.entries), tol)


@_register(
    "log-geomean-negative", "log",
    "tr[X log(X^r #_t Y^r)] >= r tr[X ((1-t) log X + t log Y)] for positive "
    "X, Y, r > 0, t <= 0",
    "positivePair", params={"r": 1.0, "t": -0.5})
def _chk_log_geomean_neg(ctx: _Ctx, tol: float) -> TrialRecord:
    r = _want(ctx.params, "r", 1.0, low=1e-12)
    t = _want(ctx.params, "t", -0.5, high=0.0)
    X, Y = ctx.positive_pair()
    mean = weighted_geometric_mean(_ppow(X, r), _ppow(Y, r), t)
    lhs = r * ((1.0 - t) * _tr_xlogx(X) + t * _tr_x_log(X, Y))
    rhs = _tr_x_log(X, mean)
    return _record(ctx.trial, lhs, rhs, _comm(X.entries, Y.entries), tol)


@_register(
    "log-x-sandwich", "log",
    "tr[X (log X + log Y)] <= (1/p) tr[X log(X^{p/2} Y^p X^{p/2})] for "
    "positive X, Y and p > 0",
    "positivePair", params={"p": 1.0})
def _chk_log_x_sandwich(ctx: _Ctx, tol: float) -> TrialRecord:
    p = _want(ctx.params, "p", 1.0, low=1e-12)
    X, Y = ctx.positive_pair()
    xh = fn_apply_eig(X.spectral.eigenvalues, X.spectral.frame, "power", p / 2.0)
    yh = fn_apply_eig(Y.spectral.eigenvalues, Y.spectral.frame, "power", p / 2.0)
    lhs = _tr_xlogx(X) + _tr_x_log(X, Y)
    rhs = _tr2(X.entries, _log_gram(yh @ xh)) / p
    return _record(ctx.trial, lhs, rhs, _comm(X.entries, Y.entries), tol)


@_register(
    "log-pair", "log",
    "(1/p) tr[X log(Y^{p/2} X^p Y^{p/2})] <= tr[X (log X + log Y)] for "
    "positive X, Y and p > 0",
    "positivePair", params={"p": 1.0})
def _chk_log_pair(ctx: _Ctx, tol: float) -> TrialRecord:
    p = _want(ctx.params, "p", 1.0, low=1e-12)
    X, Y = ctx.positive_pair()
    yh = fn_apply_eig(Y.spectral.eigenvalues, Y.spectral.frame, "power", p / 2.0)
    xh = fn_apply_eig(X.spectral.eigenvalues, X.spectral.frame, "power", p / 2.0)
    lhs = _tr2(X.entries, _log_gram(xh @ yh)) / p
    rhs = _tr_xlogx(X) + _tr_x_log(X, Y)
    return _record(ctx.trial, lhs, rhs, _comm(X.entries, Y.entries), tol)


@_register(
    "log-linear-map", "log",
    "tr[X log(Y^{1/2} Z Y^{1/2})] <= tr[X (log X + log Y)] for positive "
    "X, Y, Z with tr Z = tr X",
    "positiveTriple")
def _chk_log_linear(ctx: _Ctx, tol: float) -> TrialRecord:
    X, Y, Z = ctx.positive_triple()
    yh = fn_apply_eig(Y.spectral.eigenvalues, Y.spectral.frame, "power", 0.5)
    zh = fn_apply_eig(Z.spectral.eigenvalues, Z.spectral.frame, "power", 0.5)
    lhs = _tr2(X.entries, _log_gram(zh @ yh))
    rhs = _tr_xlogx(X) + _tr_x_log(X, Y)
    return _record(ctx.trial, lhs, rhs, _comm(Y.entries, Z.entries), tol)


# ---------------------------------------------------------------------------
# exp suite
# ---------------------------------------------------------------------------

@_register(
    "gt-chain", "exp",
    "log tr e^{H+K} <= inf over tr[Q e^K] <= 1 of lambda_max(H - log Q) "
    "<= log tr[e^H e^K] for Hermitian H, K; the middle term carries the "
    "saddle solver's certified gap as slack",
    "hermitianPair", cap=24)
def _chk_gt_chain(ctx: _Ctx, tol: float) -> TrialRecord:
    H, K = ctx.hermitian_pair()
    chain = golden_thompson_chain(H, K)
    scale = max(1.0, abs(chain.lower), abs(chain.upper))
    slack = chain.saddle.gap + tol * scale
    ok = (chain.lower <= chain.middle + slack
          and chain.middle <= chain.upper + slack
          and chain.lower <= chain.upper + tol * scale)
    return _record(ctx.trial, chain.lower, chain.upper,
                   _comm(H.entries, K.entries), tol, passed=ok)


@_register(
    "gt-complement", "exp",
    "tr[(e^{rH} #_t e^{rK})^{1/r}] <= tr e^{(1-t)H + tK} for Hermitian H, K, "
    "r > 0, t in [0, 1]",
    "hermitianPair", params={"r": 1.0, "t": 0.5})
def _chk_gt_complement(ctx: _Ctx, tol: float) -> TrialRecord:
    r = _want(ctx.params, "r", 1.0, low=1e-12)
    t = _want(ctx.params, "t", 0.5, low=0.0, high=1.0)
    H, K = ctx.hermitian_pair()
    A = PositiveMatrix(_expm(r * H.entries))
    B = PositiveMatrix(_expm(r * K.entries))
    mean = weighted_geometric_mean(A, B, t)
    lhs = float(np.sum(np.power(np.linalg.eigvalsh(mean.entries), 1.0 / r)))
    rhs = float(np.sum(np.exp(np.linalg.eigvalsh(
        hermitize((1.0 - t) * H.entries + t * K.entries)))))
    return _record(ctx.trial, lhs, rhs, _comm(H.entries, K.entries), tol)


@_register(
    "gt-complement-remainder", "exp",
    "umegaki(V, W) + tr W <= tr V with W = (e^{rH} #_s e^{rK})^{1/r} and "
    "V = e^{(1-s)H + sK}",
    "hermitianPair", params={"r": 1.0, "s": 0.5})
def _chk_gt_remainder(ctx: _Ctx, tol: float) -> TrialRecord:
    r = _want(ctx.params, "r", 1.0, low=1e-12)
    s = _want(ctx.params, "s", 0.5, low=0.0, high=1.0)
    H, K = ctx.hermitian_pair()
    A = PositiveMatrix(_expm(r * H.entries))
    B = PositiveMatrix(_expm(r * K.entries))
    W = _ppow(weighted_geometric_mean(A, B, s), 1.0 / r)
    V = PositiveMatrix(_expm(hermitize((1.0 - s) * H.entries + s * K.entries)))
    lhs = umegaki(V, W) + W.trace
    rhs = V.trace
    return _record(ctx.trial, lhs, rhs, _comm(H.entries, K.entries), tol)


@_register(
    "trace-power-monotone", "exp",
    "r |-> tr[(A^{r/2} B^r A^{r/2})^{1/r}] is increasing over the grid "
    "r in {1/4, 1/2, 1, 2, 4}; the record stores the smallest consecutive "
    "increase normalized by the largest value",
    "positivePair")
def _chk_trace_power_monotone(ctx: _Ctx, tol: float) -> TrialRecord:
    A, B = ctx.positive_pair()
    grid = (0.25, 0.5, 1.0, 2.0, 4.0)
    vals = []
    for r in grid:
        half = fn_apply_eig(A.spectral.eigenvalues, A.spectral.frame, "power", r / 2.0)
        inner = hermitize(half @ _ppow(B, r).entries @ half)
        lam = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
        vals.append(float(np.sum(np.power(lam, 1.0 / r))))
    norm = max(1.0, max(abs(v) for v in vals))
    worst = min((vals[i + 1] - vals[i]) / norm for i in range(len(vals) - 1))
    return _record(ctx.trial, -worst, 0.0, _comm(A.entries, B.entries), tol)


@_register(
    "exp-difference", "exp",
    "tr[e^H e^L] - tr[e^{H+L}] <= tr[e^H H e^L] - tr[e^H e^{L/2} H e^{L/2}] "
    "for Hermitian H, L",
    "hermitianPair")
def _chk_exp_difference(ctx: _Ctx, tol: float) -> TrialRecord:
    H, L = ctx.hermitian_pair()
    lhs, rhs = exp_difference_check(H, L)
    return _record(ctx.trial, lhs, rhs, _comm(H.entries, L.entries), tol)


@_register(
    "geomean-exp-lower", "exp",
    "tr[(Y #_{1/2} e^H)^2] <= tr e^{H + log Y} for Hermitian H and positive Y",
    "hermitianPositive")
def _chk_geomean_exp_lower(ctx: _Ctx, tol: float) -> TrialRecord:
    H = ctx.hermitian(0)
    Y = ctx.positive(1)
    lhs, rhs = geo_exp_lower(H, Y)
    return _record(ctx.trial, lhs, rhs, _comm(H.entries, Y.entries), tol)


# ---------------------------------------------------------------------------
# entropy suite
# ---------------------------------------------------------------------------

@_register(
    "entropy-chain-lower", "entropy",
    "constrained-supremum relative entropy <= Umegaki relative entropy",
    "positivePair", tol=1e-6)
def _chk_entropy_chain_lower(ctx: _Ctx, tol: float) -> TrialRecord:
    X, Y = ctx.positive_pair()
    lhs = donald(X, Y)
    rhs = umegaki(X, Y)
    return _record(ctx.trial, lhs, rhs, _comm(X.entries, Y.entries), tol)


@_register(
    "entropy-chain-upper", "entropy",
    "Umegaki relative entropy <= sandwiched relative entropy",
    "positivePair")
def _chk_entropy_chain_upper(ctx: _Ctx, tol: float) -> TrialRecord:
    X, Y = ctx.positive_pair()
    lhs = umegaki(X, Y)
    rhs = bs_entropy(X, Y)
    return _record(ctx.trial, lhs, rhs, _comm(X.entries, Y.entries), tol)


@_register(
    "entropy-scaling", "entropy",
    "R(cX, Y) = c R(X, Y) + c log(c) tr X + (1-c) tr Y and R(cX, cY) = "
    "c R(X, Y) for every entropy kind; the record stores the worst "
    "normalized defect over kinds",
    "positivePair", tol=1e-8, cap=100)
def _chk_entropy_scaling(ctx: _Ctx, tol: float) -> TrialRecord:
    X, Y = ctx.positive_pair()
    c = float(ctx.scalars().choice([0.5, 2.0, 7.0]))
    cX = PositiveMatrix(c * X.entries)
    cY = PositiveMatrix(c * Y.entries)
    worst = 0.0
    for fn in (umegaki, bs_entropy, lambda a, b: donald(a, b, tol=1e-7)):
        base = fn(X, Y)
        scale = max(1.0, abs(base))
        d1 = fn(cX, Y) - (c * base + c * np.log(c) * X.trace + (1.0 - c) * Y.trace)
        d2 = fn(cX, cY) - c * base
        worst = max(worst, abs(d1) / scale, abs(d2) / scale)
    return _record(ctx.trial, worst, 0.0, _comm(X.entries, Y.entries), tol)


@_register(
    "pinsker", "entropy",
    "(tr X / 2) ||X/tr X - Y/tr Y||_1^2 lower-bounds the smallest relative "
    "entropy",
    "positivePair", cap=200)
def _chk_pinsker(ctx: _Ctx, tol: float) -> TrialRecord:
    X, Y = ctx.positive_pair()
    lhs = pinsker_bound(X, Y)
    rhs = donald(X, Y)
    return _record(ctx.trial, lhs, rhs, _comm(X.entries, Y.entries), tol)


@_register(
    "entropy-commuting", "entropy",
    "all three relative entropies coincide on commuting pairs; the record "
    "stores the worst normalized pairwise difference",
    "commutingPair", tol=1e-7)
def _chk_entropy_commuting(ctx: _Ctx, tol: float) -> TrialRecord:
    ctx = _Ctx(ctx.dim, ctx.kappa, ctx.key, ctx.trial, ctx.params, True)
    X, Y = ctx.positive_pair()
    u = umegaki(X, Y)
    b = bs_entropy(X, Y)
    d = donald(X, Y)
    scale = max(1.0, abs(u))
    worst = max(abs(u - b), abs(u - d)) / scale
    return _record(ctx.trial, worst, 0.0, _comm(X.entries, Y.entries), tol)


# ---------------------------------------------------------------------------
# convexity suite
# ---------------------------------------------------------------------------

@_register(
    "geomean-concave", "convexity",
    "(X, Y) |-> X #_t Y is jointly concave for t in [0, 1]: the midpoint "
    "defect has nonnegative smallest eigenvalue (stored normalized)",
    "positiveQuad", params={"t": 0.5})
def _chk_geomean_concave(ctx: _Ctx, tol: float) -> TrialRecord:
    t = _want(ctx.params, "t", 0.5, low=0.0, high=1.0)
    X1, Y1 = ctx.positive(0), ctx.positive(1)
    X2, Y2 = ctx.positive(2), ctx.positive(3)
    Xm = PositiveMatrix(0.5 * (X1.entries + X2.entries))
    Ym = PositiveMatrix(0.5 * (Y1.entries + Y2.entries))
    M1 = weighted_geometric_mean(X1, Y1, t).entries
    M2 = weighted_geometric_mean(X2, Y2, t).entries
    Mm = weighted_geometric_mean(Xm, Ym, t).entries
    defect = hermitize(Mm - 0.5 * (M1 + M2))
    scale = max(1.0, _opnorm(Mm), _opnorm(M1), _opnorm(M2))
    lam_min = float(np.linalg.eigvalsh(defect)[0])
    return _record(ctx.trial, -lam_min / scale, 0.0,
                   _comm(X1.entries, Y1.entries), tol)


@_register(
    "geomean-monotone", "convexity",
    "X <= X' implies X #_t Y <= X' #_t Y for t in [0, 1]",
    "positivePair", params={"t": 0.5})
def _chk_geomean_monotone(ctx: _Ctx, tol: float) -> TrialRecord:
    t = _want(ctx.params, "t", 0.5, low=0.0, high=1.0)
    X, Y = ctx.positive(0), ctx.positive(1)
    G = hermitize(_gaussian_complex(ctx.rng(2), ctx.dim))
    bump = hermitize(G @ G)  # positive semidefinite increment
    Xp = PositiveMatrix(X.entries + bump)
    lo = weighted_geometric_mean(X, Y, t).entries
    hi = weighted_geometric_mean(Xp, Y, t).entries
    defect = hermitize(hi - lo)
    scale = max(1.0, _opnorm(hi), _opnorm(lo))
    lam_min = float(np.linalg.eigvalsh(defect)[0])
    return _record(ctx.trial, -lam_min / scale, 0.0,
                   _comm(X.entries, Y.entries), tol)


@_register(
    "geomean-convex-outer", "convexity",
    "(X, Y) |-> X #_t Y is jointly convex for t in [-1, 0] and [1, 2]",
    "positiveQuad", params={"t": -0.5})
def _chk_geomean_convex_outer(ctx: _Ctx, tol: float) -> TrialRecord:
    t = _want(ctx.params, "t", -0.5, low=-1.0, high=2.0)
    if 0.0 < t < 1.0:
        raise ParamOutOfDomain(
            f"t={t!r} must lie in [-1, 0] or [1, 2] for the convex range")
    X1, Y1 = ctx.positive(0), ctx.positive(1)
    X2, Y2 = ctx.positive(2), ctx.positive(3)
    Xm = PositiveMatrix(0.5 * (X1.entries + X2.entries))
    Ym = PositiveMatrix(0.5 * (Y1.entries + Y2.entries))
    M1 = weighted_geometric_mean(X1, Y1, t).entries
    M2 = weighted_geometric_mean(X2, Y2, t).entries
    Mm = weighted_geometric_mean(Xm, Ym, t).entries
    defect = hermitize(0.5 * (M1 + M2) - Mm)
    scale = max(1.0, _opnorm(Mm), _opnorm(M1), _opnorm(M2))
    lam_min = float(np.linalg.eigvalsh(defect)[0])
    return _record(ctx.trial, -lam_min / scale, 0.0,
                   _comm(X1.entries, Y1.entries), tol)


@_register(
    "bs-core-convex", "convexity",
    "(X, Y) |-> -X^{1/2} log(X^{1/2} Y^{-1} X^{1/2}) X^{1/2} is jointly "
    "concave as an operator map",
    "positiveQuad")
def _chk_bs_core_convex(ctx: _Ctx, tol: float) -> TrialRecord:
    def core(X: PositiveMatrix, Y: PositiveMatrix) -> np.ndarray:
        rx = fn_apply_eig(X.spectral.eigenvalues, X.spectral.frame, "power", 0.5)
        yinv = fn_apply_eig(Y.spectral.eigenvalues, Y.spectral.frame, "power", -1.0)
        inner = PositiveMatrix(hermitize(rx @ yinv @ rx))
        return -hermitize(rx @ _logm(inner) @ rx)

    X1, Y1 = ctx.positive(0), ctx.positive(1)
    X2, Y2 = ctx.positive(2), ctx.positive(3)
    Xm = PositiveMatrix(0.5 * (X1.entries + X2.entries))
    Ym = PositiveMatrix(0.5 * (Y1.entries + Y2.entries))
    M1, M2, Mm = core(X1, Y1), core(X2, Y2), core(Xm, Ym)
    defect = hermitize(Mm - 0.5 * (M1 + M2))
    scale = max(1.0, _opnorm(Mm), _opnorm(M1), _opnorm(M2))
    lam_min = float(np.linalg.eigvalsh(defect)[0])
    return _record(ctx.trial, -lam_min / scale, 0.0,
                   _comm(X1.entries, Y1.entries), tol)


@_register(
    "phi-donald-concave", "convexity",
    "Y |-> Phi(H, Y) is concave for the constrained-supremum transform; "
    "verified through certified bounds (upper at the midpoint against the "
    "average of lowers at the endpoints)",
    "hermitianPositivePair", cap=12)
def _chk_phi_donald_concave(ctx: _Ctx, tol: float) -> TrialRecord:
    H = ctx.hermitian(0)
    Y1, Y2 = ctx.positive(1), ctx.positive(2)
    Ym = PositiveMatrix(0.5 * (Y1.entries + Y2.entries))
    s1 = phi_donald(H, Y1)
    s2 = phi_donald(H, Y2)
    sm = phi_donald(H, Ym)
    lhs = 0.5 * (s1.dual_lower + s2.dual_lower)
    rhs = sm.primal_upper
    return _record(ctx.trial, lhs, rhs, _comm(Y1.entries, Y2.entries), tol)


@_register(
    "psi-donald-concave", "convexity",
    "Y |-> exp(Phi(H, Y) + tr Y - 1) is concave for the constrained-supremum "
    "transform; verified through certified bounds",
    "hermitianPositivePair", cap=12)
def _chk_psi_donald_concave(ctx: _Ctx, tol: float) -> TrialRecord:
    H = ctx.hermitian(0)
    Y1, Y2 = ctx.positive(1), ctx.positive(2)
    Ym = PositiveMatrix(0.5 * (Y1.entries + Y2.entries))
    s1 = phi_donald(H, Y1)
    s2 = phi_donald(H, Y2)
    sm = phi_donald(H, Ym)
    lhs = 0.5 * (np.exp(s1.dual_lower + Y1.trace - 1.0)
                 + np.exp(s2.dual_lower + Y2.trace - 1.0))
    rhs = float(np.exp(sm.primal_upper + Ym.trace - 1.0))
    return _record(ctx.trial, lhs, rhs, _comm(Y1.entries, Y2.entries), tol)


@_register(
    "entropy-joint-convex", "convexity",
    "each relative entropy is jointly convex: R(mix) <= mixed values; one "
    "kind is exercised per trial in rotation",
    "positiveQuad", tol=1e-6, cap=200)
def _chk_entropy_joint_convex(ctx: _Ctx, tol: float) -> TrialRecord:
    X1, Y1 = ctx.positive(0), ctx.positive(1)
    X2, Y2 = ctx.positive(2), ctx.positive(3)
    rng = ctx.scalars()
    lam = float(rng.choice([0.25, 0.5, 0.75]))
    # Mixtures can be worse conditioned than raw draws; a 1e-7 stationarity
    # residual still leaves the objective far inside the 1e-6 slack.
    fn = (umegaki, bs_entropy,
          lambda a, b: donald(a, b, tol=1e-7))[ctx.trial % 3]
    Xm = PositiveMatrix(lam * X1.entries + (1.0 - lam) * X2.entries)
    Ym = PositiveMatrix(lam * Y1.entries + (1.0 - lam) * Y2.entries)
    lhs = fn(Xm, Ym)
    rhs = lam * fn(X1, Y1) + (1.0 - lam) * fn(X2, Y2)
    return _record(ctx.trial, lhs, rhs, _comm(X1.entries, X2.entries), tol)


# ---------------------------------------------------------------------------
# classical suite
# ---------------------------------------------------------------------------

@_register(
    "klein", "classical",
    "tr f(B) >= tr f(A) + tr[f'(A)(B - A)] for convex f in {exp, x log x} "
    "on positive A, B; the record stores the tighter of the two",
    "positivePair")
def _chk_klein(ctx: _Ctx, tol: float) -> TrialRecord:
    A, B = ctx.positive_pair()
    lamA, UA = A.spectral.eigenvalues, A.spectral.frame
    diff = B.entries - A.entries
    best = None
    for name in ("exp", "xlogx"):
        fA = fn_apply_eig(lamA, UA, name)
        dA = (UA * (np.exp(lamA) if name == "exp" else np.log(lamA) + 1.0)) @ UA.conj().T
        lhs = float(np.trace(fA).real) + _tr2(hermitize(dA), diff)
        lamB = B.spectral.eigenvalues
        rhs = float(np.sum(np.exp(lamB) if name == "exp" else lamB * np.log(lamB)))
        scale = max(1.0, abs(lhs), abs(rhs))
        if best is None or (rhs - lhs) / scale < (best[1] - best[0]) / max(
                1.0, abs(best[0]), abs(best[1])):
            best = (lhs, rhs)
    return _record(ctx.trial, best[0], best[1], _comm(A.entries, B.entries), tol)


@_register(
    "peierls-bogoliubov", "classical",
    "tr[e^H K] / tr e^H <= log tr e^{H+K} - log tr e^H for Hermitian H, K",
    "hermitianPair")
def _chk_peierls_bogoliubov(ctx: _Ctx, tol: float) -> TrialRecord:
    H, K = ctx.hermitian_pair()
    eH = _expm(H.entries)
    z = float(np.trace(eH).real)
    lhs = _tr2(eH, K.entries) / z
    lam = np.linalg.eigvalsh(hermitize(H.entries + K.entries))
    rhs = float(np.log(np.sum(np.exp(lam)))) - float(np.log(z))
    return _record(ctx.trial, lhs, rhs, _comm(H.entries, K.entries), tol)


_PROBE_COUNT = 20
_PROBE_EPS = 1e-3


def _probe_direction(rng: np.random.Generator, n: int) -> np.ndarray:
    W = hermitize(_gaussian_complex(rng, n))
    return W / float(np.linalg.norm(W))


@_register(
    "gibbs-entropy", "classical",
    "tr[X log X] = sup_K (tr[X K] - log tr e^K) attained at K = log X, and "
    "log tr e^K = sup over densities of (tr[X K] - tr[X log X]) attained at "
    "the Gibbs density; the record stores the worst defect, and random "
    "perturbations of either maximizer must not improve the objective",
    "densityHermitian", tol=1e-10)
def _chk_gibbs_entropy(ctx: _Ctx, tol: float) -> TrialRecord:
    n = ctx.dim
    P = ctx.positive(0)
    X = PositiveMatrix(P.entries / P.trace)
    K = ctx.hermitian(1)
    rng = ctx.rng(7)

    def g_entropy(Kv: np.ndarray) -> float:
        lam = np.linalg.eigvalsh(hermitize(Kv))
        return _tr2(X.entries, hermitize(Kv)) - float(np.log(np.sum(np.exp(lam))))

    def g_free(Xv: np.ndarray) -> float:
        lam = np.clip(np.linalg.eigvalsh(hermitize(Xv)), 1e-300, None)
        return _tr2(hermitize(Xv), K.entries) - float(np.dot(lam, np.log(lam)))

    logx = _logm(X)
    star_a = g_entropy(logx)
    defect_a = abs(star_a - _tr_xlogx(X))

    lamk, Uk = np.linalg.eigh(K.entries)
    w = np.exp(lamk - lamk.max())
    Xstar = hermitize((Uk * (w / w.sum())) @ Uk.conj().T)
    star_b = g_free(Xstar)
    target_b = float(np.log(np.sum(np.exp(lamk))))
    defect_b = abs(star_b - target_b)

    probe_excess = 0.0
    for _ in range(_PROBE_COUNT):
        W = _probe_direction(rng, n)
        probe_excess = max(probe_excess,
                           g_entropy(logx + _PROBE_EPS * W) - star_a)
        lp, Up = np.linalg.eigh(hermitize(_safe_logm(Xstar) + _PROBE_EPS * W))
        Ep = (Up * np.exp(lp - lp.max())) @ Up.conj().T
        Xp = Ep / float(np.trace(Ep).real)
        probe_excess = max(probe_excess, g_free(Xp) - star_b)

    worst = max(defect_a, defect_b)
    scale = max(1.0, abs(star_a), abs(star_b))
    ok = worst <= tol * scale and probe_excess <= 1e-12 * scale
    return _record(ctx.trial, worst, 0.0, _comm(X.entries, K.entries), tol,
                   passed=ok)


def _safe_logm(A: np.ndarray) -> np.ndarray:
    lam, U = np.linalg.eigh(hermitize(A))
    lam = np.clip(lam, 1e-300, None)
    return hermitize((U * np.log(lam)) @ U.conj().T)


@_register(
    "gibbs-relative", "classical",
    "umegaki(X, Y) = sup_K (tr[X K] - Phi(K, Y)) attained at K = log X - "
    "log Y, and Phi(K, Y) = sup over densities of (tr[X K] - umegaki(X, Y)) "
    "attained at the relative Gibbs density; perturbations must not improve "
    "either objective",
    "densityPositiveHermitian", tol=1e-10)
def _chk_gibbs_relative(ctx: _Ctx, tol: float) -> TrialRecord:
    n = ctx.dim
    P = ctx.positive(0)
    X = PositiveMatrix(P.entries / P.trace)
    Y = ctx.positive(1)
    K = ctx.hermitian(2)
    rng = ctx.rng(7)
    logy = _logm(Y)

    def g_rel(Kv: np.ndarray) -> float:
        Kh = hermitize(Kv)
        lam = np.linalg.eigvalsh(hermitize(Kh + logy))
        phi = float(np.log(np.sum(np.exp(lam)))) + 1.0 - Y.trace
        return _tr2(X.entries, Kh) - phi

    def g_phi(Xv: np.ndarray) -> float:
        Xp = PositiveMatrix(hermitize(Xv))
        return _tr2(Xp.entries, K.entries) - umegaki(Xp, Y)

    kstar = hermitize(_logm(X) - logy)
    star_a = g_rel(kstar)
    defect_a = abs(star_a - umegaki(X, Y))

    Xstar = gibbs_state(K, Y)
    star_b = g_phi(Xstar.entries)
    defect_b = abs(star_b - phi_umegaki(K, Y))

    probe_excess = 0.0
    for _ in range(_PROBE_COUNT):
        W = _probe_direction(rng, n)
        probe_excess = max(probe_excess, g_rel(kstar + _PROBE_EPS * W) - star_a)
        lp, Up = np.linalg.eigh(hermitize(_safe_logm(Xstar.entries)
                                          + _PROBE_EPS * W))
        Ep = (Up * np.exp(lp - lp.max())) @ Up.conj().T
        Xp = Ep / float(np.trace(Ep).real)
        probe_excess = max(probe_excess, g_phi(Xp) - star_b)

    worst = max(defect_a, defect_b)
    scale = max(1.0, abs(star_a), abs(star_b))
    ok = worst <= tol * scale and probe_excess <= 1e-12 * scale
    return _record(ctx.trial, worst, 0.0, _comm(X.entries, Y.entries), tol,
                   passed=ok)


# ---------------------------------------------------------------------------
# geometry suite (identity defects, operator-norm normalized)
# ---------------------------------------------------------------------------

@_register(
    "geodesic-reparam", "geometry",
    "X #_{(1-t)t0 + t t1} Y = (X #_{t0} Y) #_t (X #_{t1} Y)",
    "positivePair", tol=1e-8)
def _chk_geodesic_reparam(ctx: _Ctx, tol: float) -> TrialRecord:
    X, Y = ctx.positive_pair()
    rng = ctx.scalars()
    t0, t1, t = rng.uniform(0.0, 1.0, size=3)
    direct = weighted_geometric_mean(X, Y, (1.0 - t) * t0 + t * t1).entries
    staged = weighted_geometric_mean(
        weighted_geometric_mean(X, Y, t0),
        weighted_geometric_mean(X, Y, t1), t).entries
    scale = max(1.0, _opnorm(direct))
    return _record(ctx.trial, _opnorm(direct - staged) / scale, 0.0,
                   _comm(X.entries, Y.entries), tol)


@_register(
    "geomean-scaling", "geometry",
    "X #_{t s} Y = X #_t (X #_s Y)",
    "positivePair", tol=1e-8)
def _chk_geomean_scaling(ctx: _Ctx, tol: float) -> TrialRecord:
    X, Y = ctx.positive_pair()
    rng = ctx.scalars()
    t, s = rng.uniform(0.0, 1.0, size=2)
    direct = weighted_geometric_mean(X, Y, t * s).entries
    staged = weighted_geometric_mean(X, weighted_geometric_mean(X, Y, s), t).entries
    scale = max(1.0, _opnorm(direct))
    return _record(ctx.trial, _opnorm(direct - staged) / scale, 0.0,
                   _comm(X.entries, Y.entries), tol)


@_register(
    "geomean-swap", "geometry",
    "X #_{1-t} Y = Y #_t X",
    "positivePair", tol=1e-8)
def _chk_geomean_swap(ctx: _Ctx, tol: float) -> TrialRecord:
    X, Y = ctx.positive_pair()
    t = float(ctx.scalars().uniform(-1.0, 2.0))
    a = weighted_geometric_mean(X, Y, 1.0 - t).entries
    b = weighted_geometric_mean(Y, X, t).entries
    scale = max(1.0, _opnorm(a))
    return _record(ctx.trial, _opnorm(a - b) / scale, 0.0,
                   _comm(X.entries, Y.entries), tol)


@_register(
    "geomean-inverse-point", "geometry",
    "X #_{-1} Y = X Y^{-1} X and X #_2 Y = Y X^{-1} Y",
    "positivePair", tol=1e-8)
def _chk_geomean_inverse_point(ctx: _Ctx, tol: float) -> TrialRecord:
    X, Y = ctx.positive_pair()
    yinv = fn_apply_eig(Y.spectral.eigenvalues, Y.spectral.frame, "power", -1.0)
    xinv = fn_apply_eig(X.spectral.eigenvalues, X.spectral.frame, "power", -1.0)
    a = weighted_geometric_mean(X, Y, -1.0).entries
    aref = hermitize(X.entries @ yinv @ X.entries)
    b = weighted_geometric_mean(X, Y, 2.0).entries
    bref = hermitize(Y.entries @ xinv @ Y.entries)
    scale = max(1.0, _opnorm(aref), _opnorm(bref))
    worst = max(_opnorm(a - aref), _opnorm(b - bref)) / scale
    return _record(ctx.trial, worst, 0.0, _comm(X.entries, Y.entries), tol)


@_register(
    "geomean-endpoint-recovery", "geometry",
    "A = B #_s C with s != 1 implies B = C #_{1/(1-s)} A",
    "positivePair", tol=1e-8)
def _chk_geomean_endpoint_recovery(ctx: _Ctx, tol: float) -> TrialRecord:
    B, C = ctx.positive_pair()
    s = float(ctx.scalars().uniform(-1.0, 0.8))
    A = weighted_geometric_mean(B, C, s)
    Brec = weighted_geometric_mean(C, A, 1.0 / (1.0 - s)).entries
    scale = max(1.0, _opnorm(B.entries))
    return _record(ctx.trial, _opnorm(B.entries - Brec) / scale, 0.0,
                   _comm(B.entries, C.entries), tol)


@_register(
    "geodesic-additivity", "geometry",
    "distance(X #_s Y, X #_t Y) = |t - s| distance(X, Y)",
    "positivePair", tol=1e-8)
def _chk_geodesic_additivity(ctx: _Ctx, tol: float) -> TrialRecord:
    X, Y = ctx.positive_pair()
    rng = ctx.scalars()
    s, t = rng.uniform(0.0, 1.0, size=2)
    d_st = geodesic_distance(weighted_geometric_mean(X, Y, s),
                             weighted_geometric_mean(X, Y, t))
    d_xy = geodesic_distance(X, Y)
    defect = abs(d_st - abs(t - s) * d_xy) / max(1.0, d_xy)
    return _record(ctx.trial, defect, 0.0, _comm(X.entries, Y.entries), tol)


@_register(
    "geomean-quadrature", "geometry",
    "the quadrature evaluation of X #_t Y matches the spectral definition",
    "positivePair", tol=1e-7)
def _chk_geomean_quadrature(ctx: _Ctx, tol: float) -> TrialRecord:
    X, Y = ctx.positive_pair()
    t = float(ctx.scalars().uniform(0.05, 0.95))
    a = weighted_geometric_mean(X, Y, t).entries
    b = geometric_mean_quadrature(X, Y, t).entries
    scale = max(1.0, _opnorm(a))
    return _record(ctx.trial, _opnorm(a - b) / scale, 0.0,
                   _comm(X.entries, Y.entries), tol)


# ---------------------------------------------------------------------------
# majorization suite
# ---------------------------------------------------------------------------

def _majorization_record(ctx: _Ctx, out: HermitianMatrix, X: HermitianMatrix,
                         tol: float, comm: float) -> TrialRecord:
    verdict = eigen_majorizes(out, X, tol=tol)
    scale = float(np.sum(np.abs(np.linalg.eigvalsh(X.entries)))) + 1.0
    worst = max(float(-verdict.partial_sum_margins.min()),
                abs(verdict.trace_mismatch)) / scale
    return _record(ctx.trial, worst, 0.0, comm, tol)


@_register(
    "pinch-majorization", "majorization",
    "pinching in any orthonormal frame produces a matrix majorized by the "
    "input",
    "hermitianUnitary", tol=1e-10)
def _chk_pinch_majorization(ctx: _Ctx, tol: float) -> TrialRecord:
    X = ctx.hermitian(0)
    U = ctx.unitary(1)
    out = pinch(X, U)
    return _majorization_record(ctx, out, X, tol, _comm(X.entries, U))


@_register(
    "choi-majorization", "majorization",
    "the positive unital trace-preserving map ((n-1) tr(A) I - A)/(n^2-n-1) "
    "produces a matrix majorized by the input",
    "hermitian", tol=1e-10)
def _chk_choi_majorization(ctx: _Ctx, tol: float) -> TrialRecord:
    X = ctx.hermitian(0)
    out = choi_map(X)
    return _majorization_record(ctx, out, X, tol, 0.0)


@_register(
    "logmean-majorization", "majorization",
    "the logarithmic-mean compression along a positive matrix produces a "
    "matrix majorized by the input",
    "positiveHermitian", tol=1e-10)
def _chk_logmean_majorization(ctx: _Ctx, tol: float) -> TrialRecord:
    A = ctx.positive(0)
    X = ctx.hermitian(1)
    out = bosulem_map(A, X)
    return _majorization_record(ctx, out, X, tol, _comm(A.entries, X.entries))


@_register(
    "majorization-trace-convex", "majorization",
    "majorization implies tr phi(pinched) <= tr phi(input) for increasing "
    "convex phi in {exp, x^2, x^4}; the record stores the tightest phi",
    "hermitianUnitary")
def _chk_majorization_trace_convex(ctx: _Ctx, tol: float) -> TrialRecord:
    X = ctx.hermitian(0)
    U = ctx.unitary(1)
    P = pinch(X, U)
    lamx = np.linalg.eigvalsh(X.entries)
    lamp = np.linalg.eigvalsh(P.entries)
    best = None
    for phi in (np.exp, lambda v: v ** 2, lambda v: v ** 4):
        lhs = float(np.sum(phi(lamp)))
        rhs = float(np.sum(phi(lamx)))
        rel = (rhs - lhs) / max(1.0, abs(lhs), abs(rhs))
        if best is None or rel < best[0]:
            best = (rel, lhs, rhs)
    return _record(ctx.trial, best[1], best[2], _comm(X.entries, U), tol)


@_register(
    "logmean-contraction", "majorization",
    "the logarithmic-mean compression contracts every Schatten p-norm for "
    "p in {1, 2, 3}; the record stores the tightest p",
    "positiveHermitian")
def _chk_logmean_contraction(ctx: _Ctx, tol: float) -> TrialRecord:
    A = ctx.positive(0)
    X = ctx.hermitian(1)
    out = bosulem_map(A, X)
    lam_in = np.abs(np.linalg.eigvalsh(X.entries))
    lam_out = np.abs(np.linalg.eigvalsh(out.entries))
    best = None
    for p in (1.0, 2.0, 3.0):
        lhs = float(np.sum(lam_out ** p) ** (1.0 / p))
        rhs = float(np.sum(lam_in ** p) ** (1.0 / p))
        rel = (rhs - lhs) / max(1.0, abs(lhs), abs(rhs))
        if best is None or rel < best[0]:
            best = (rel, lhs, rhs)
    return _record(ctx.trial, best[1], best[2], _comm(A.entries, X.entries), tol)


# ---------------------------------------------------------------------------
# derivative suite
# ---------------------------------------------------------------------------

@_register(
    "geomean-derivative", "derivative",
    "d/ds tr[X log(Y^p #_s Z^p)] at s = 0 equals tr[W log(Y^{-p/2} Z^p "
    "Y^{-p/2})] with W the logarithmic-mean compression of X along Y^p; "
    "compared against a Richardson-extrapolated central difference",
    "positiveTriple", params={"p": 1.0}, tol=1e-6, cap=100)
def _chk_geomean_derivative(ctx: _Ctx, tol: float) -> TrialRecord:
    p = _want(ctx.params, "p", 1.0, low=1e-12)
    X, Y, Z = ctx.positive_triple()
    Yp = _ppow(Y, p)
    Zp = _ppow(Z, p)

    def g(s: float) -> float:
        return _tr_x_log(X, weighted_geometric_mean(Yp, Zp, s))

    W = bosulem_map(Yp, HermitianMatrix(X.entries))
    negh = fn_apply_eig(Y.spectral.eigenvalues, Y.spectral.frame, "power", -p / 2.0)
    inner = PositiveMatrix(hermitize(negh @ Zp.entries @ negh))
    analytic = _tr2(W.entries, _logm(inner))

    h = 1e-4
    d1 = (g(h) - g(-h)) / (2.0 * h)
    d2 = (g(h / 2.0) - g(-h / 2.0)) / h
    richardson = (4.0 * d2 - d1) / 3.0
    defect = abs(analytic - richardson)
    ok = defect <= max(tol * abs(analytic), 1e-8)
    return _record(ctx.trial, defect / max(1.0, abs(analytic)), 0.0,
                   _comm(Y.entries, Z.entries), tol, passed=ok)


# ---------------------------------------------------------------------------
# Runner
# ---------------------------------------------------------------------------

def run_check(check_id: str, *, dim: int = 3, trials: int = 200,
              seed: int = 42, kappa: float = 1e3, tol: Optional[float] = None,
              params: Optional[Dict[str, float]] = None,
              commuting: bool = False) -> CheckReport:
    """Run one catalogue check and return its deterministic report."""
    if check_id not in _CATALOGUE:
        raise UnknownCheckId(f"unknown check id {check_id!r}")
    desc = _CATALOGUE[check_id]
    eff_tol = desc.tol if tol is None else float(tol)
    eff_params = dict(desc.params)
    if params:
        unknown = set(params) - set(desc.params)
        if unknown and desc.params:
            raise ParamOutOfDomain(
                f"check {check_id!r} does not take parameters {sorted(unknown)}")
        if unknown:
            raise ParamOutOfDomain(f"check {check_id!r} takes no parameters")
        eff_params.update({k: float(v) for k, v in params.items()})
    n_trials = min(trials, desc.cap) if desc.cap else trials
    key = _check_key(seed, check_id)
    fn = _IMPL[check_id]
    records = []
    for i in range(n_trials):
        ctx = _Ctx(dim, kappa, key, i, eff_params, commuting)
        records.append(fn(ctx, eff_tol))
    failures = sum(1 for r in records if not r.passed)
    min_gap = min((r.gap for r in records), default=float("nan"))
    return CheckReport(check_id=check_id, params=eff_params, seed=seed,
                       dim=dim, trials=n_trials, tol=eff_tol,
                       failures=failures, min_gap=min_gap,
                       records=tuple(records))


def run_suite(suite: str, *, dim: int = 3, trials: int = 200, seed: int = 42,
              kappa: float = 1e3, tol: Optional[float] = None,
              commuting: bool = False) -> List[CheckReport]:
    table = suites()
    if suite not in table:
        raise UnknownSuite(
            f"unknown suite {suite!r}; expected one of {sorted(table)}")
    return [run_check(cid, dim=dim, trials=trials, seed=seed, kappa=kappa,
                      tol=tol, commuting=commuting)
            for cid in table[suite]]


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def report_to_json(report: CheckReport) -> str:
    obj = {
        "check": report.check_id,
        "params": report.params,
        "seed": report.seed,
        "dim": report.dim,
        "trials": report.trials,
        "tol": report.tol,
        "failures": report.failures,
        "minGap": report.min_gap,
        "records": [
            {"i": r.i, "lhs": r.lhs, "rhs": r.rhs, "gap": r.gap,
             "commNorm": r.comm_norm, "pass": r.passed}
            for r in report.records
        ],
    }
    return json.dumps(obj, sort_keys=True)


def report_to_csv(report: CheckReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["i", "lhs", "rhs", "gap", "commNorm", "pass"])
    for r in report.records:
        writer.writerow([r.i, repr(r.lhs), repr(r.rhs), repr(r.gap),
                         repr(r.comm_norm), str(r.passed).lower()])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Strictness fixtures
# ---------------------------------------------------------------------------

# Checks whose inequality is strict on noncommuting inputs, with the fixed
# parameters used for the frozen fixtures.
STRICT_CHECKS: Dict[str, Dict[str, float]] = {
    "log-y-sandwich": {"p": 2.0},
    "log-geomean": {"r": 1.0, "s": 0.5},
    "log-x-sandwich": {"p": 2.0},
    "log-geomean-extended": {"r": 1.0, "t": 1.5},
    "log-geomean-negative": {"r": 1.0, "t": -0.5},
    "trace-power-monotone": {},
}

_STRICT_SEED = 1009
_STRICT_TRIALS = 10


def strictness_min_gaps(dim: int = 3, kappa: float = 10.0) -> Dict[str, float]:
    """Minimum gaps on the frozen noncommuting fixtures of strict checks."""
    out = {}
    for cid, params in STRICT_CHECKS.items():
        rep = run_check(cid, dim=dim, trials=_STRICT_TRIALS, seed=_STRICT_SEED,
                        kappa=kappa, params=params or None)
        out[cid] = rep.min_gap
    return out
