"""Validated Hermitian matrix types, spectral calculus, and seeded random ensembles.

Everything else in the package is built on the primitives here: eigendecomposition
of complex Hermitian matrices, spectral application of scalar functions, first
divided-difference (Loewner kernel) maps, Schatten norms, pinching, and the
reproducible matrix ensembles used by the verification harness.

All operations are pure functions of their inputs and all matrix types are
immutable, so values are safe to share across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

__all__ = [
    "ToolkitError",
    "DimensionMismatch",
    "DomainError",
    "NonConvergence",
    "NotUnitary",
    "LengthMismatch",
    "DimensionTooSmall",
    "QuadratureFailure",
    "ConsistencyError",
    "UnknownCheckId",
    "ParamOutOfDomain",
    "UnknownSuite",
    "HermitianMatrix",
    "PositiveMatrix",
    "DensityMatrix",
    "SpectralDecomposition",
    "EnsembleSpec",
    "SchattenNorms",
    "spectral_decompose",
    "apply_function",
    "divided_difference_apply",
    "dlog_inverse_apply",
    "sandwich",
    "schatten",
    "lambda_max",
    "pinch",
    "random_ensemble",
    "read_matrix",
    "write_matrix",
    "matrix_to_json",
    "matrix_from_json",
]

# Relative tolerance for accepting an input as Hermitian before exact symmetrization.
HERMITIAN_RTOL = 1e-12
# Absolute tolerance on |trace - 1| for density-matrix inputs before exact rescaling.
DENSITY_TRACE_ATOL = 1e-12
# Relative eigenvalue gap below which divided differences switch to the
# midpoint-derivative fallback (bounds cancellation error at ~1e-7 * |f''|).
DD_SPLIT = 1e-7
# Operator-norm reconstruction tolerance for spectral decompositions.
RECONSTRUCTION_RTOL = 1e-11
# Per-entry unitarity tolerance for pinching frames.
UNITARY_ATOL = 1e-10


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class ToolkitError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(ToolkitError):
    pass


class DomainError(ToolkitError):
    pass


class NonConvergence(ToolkitError):
    def __init__(self, message: str, iterations: int = 0, best_residual: float = math.nan,
                 bounds: tuple[float, float] | None = None):
        super().__init__(message)
        self.iterations = iterations
        self.best_residual = best_residual
        self.bounds = bounds


class NotUnitary(ToolkitError):
    pass


class LengthMismatch(ToolkitError):
    pass


class DimensionTooSmall(ToolkitError):
    pass


class QuadratureFailure(ToolkitError):
    pass


class ConsistencyError(ToolkitError):
    pass


class UnknownCheckId(ToolkitError):
    pass


class ParamOutOfDomain(ToolkitError):
    pass


class UnknownSuite(ToolkitError):
    pass


# ---------------------------------------------------------------------------
# Matrix types
# ---------------------------------------------------------------------------

def hermitize(a: np.ndarray) -> np.ndarray:
    """Exact symmetrization (A + A*)/2."""
    return (a + a.conj().T) / 2.0


def _validate_square(a: np.ndarray) -> np.ndarray:
    arr = np.array(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise DimensionMismatch("dimension must be at least 1")
    return arr


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in ascending order plus the unitary frame of eigenvectors."""

    eigenvalues: np.ndarray
    frame: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return hermitize(self.frame @ np.diag(self.eigenvalues) @ self.frame.conj().T)


class HermitianMatrix:
    """An immutable, validated n x n complex Hermitian matrix."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        arr = _validate_square(entries)
        scale = float(np.max(np.abs(arr))) if arr.size else 0.0
        if scale > 0.0:
            defect = float(np.max(np.abs(arr - arr.conj().T)))
            if defect > HERMITIAN_RTOL * scale:
                raise DomainError(
                    f"matrix is not Hermitian: max asymmetry {defect:.3e} "
                    f"exceeds {HERMITIAN_RTOL:.0e} * {scale:.3e}"
                )
        arr = hermitize(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def __setattr__(self, name, value):
        raise AttributeError("matrix values are immutable")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


class PositiveMatrix(HermitianMatrix):
    """Hermitian matrix with strictly positive spectrum; spectral data is cached."""

    __slots__ = ("spectral",)

    def __init__(self, entries):
        super().__init__(entries)
        spec = spectral_decompose(self)
        if spec.eigenvalues[0] <= 0.0:
            raise DomainError(
                f"matrix is not positive definite: min eigenvalue {spec.eigenvalues[0]:.3e}"
            )
        object.__setattr__(self, "spectral", spec)

    @property
    def condition_number(self) -> float:
        lam = self.spectral.eigenvalues
        return float(lam[-1] / lam[0])


class DensityMatrix(PositiveMatrix):
    """Positive matrix with unit trace (rescaled exactly on construction)."""

    __slots__ = ()

    def __init__(self, entries):
        arr = _validate_square(entries)
        tr = float(np.trace(arr).real)
        if abs(tr - 1.0) > DENSITY_TRACE_ATOL and abs(tr - 1.0) > DENSITY_TRACE_ATOL * abs(tr):
            raise DomainError(f"density matrix must have unit trace, got {tr!r}")
        super().__init__(arr / tr)


# ---------------------------------------------------------------------------
# Spectral decomposition and matrix functions
# ---------------------------------------------------------------------------

def spectral_decompose(H: HermitianMatrix) -> SpectralDecomposition:
    """Eigendecomposition with ascending eigenvalues and an orthonormal frame."""
    try:
        lam, frame = np.linalg.eigh(H.entries)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - pathological input
        raise NonConvergence(f"eigensolver failed: {exc}") from exc
    lam = np.ascontiguousarray(lam)
    lam.setflags(write=False)
    frame = np.ascontiguousarray(frame)
    frame.setflags(write=False)
    spec = SpectralDecomposition(eigenvalues=lam, frame=frame)
    radius = float(np.max(np.abs(lam))) if lam.size else 0.0
    if radius > 0.0:
        defect = np.linalg.norm(spec.reconstruct() - H.entries, ord=2)
        if defect > RECONSTRUCTION_RTOL * radius:
            raise NonConvergence(
                f"eigendecomposition reconstruction defect {defect:.3e} exceeds "
                f"{RECONSTRUCTION_RTOL:.0e} * {radius:.3e}"
            )
    return spec


_POSITIVE_ONLY = {"log", "xlogx"}


def _scalar_pair(name: str, p: float | None):
    """Return (f, f') callables for a scalar function id."""
    if name == "log":
        return np.log, lambda x: 1.0 / x
    if name == "exp":
        return np.exp, np.exp
    if name == "xlogx":
        return lambda x: x * np.log(x), lambda x: np.log(x) + 1.0
    if name == "power":
        if p is None:
            raise DomainError("power requires an exponent p")
        return lambda x: np.power(x, p), lambda x: p * np.power(x, p - 1.0)
    raise DomainError(f"unknown scalar function id {name!r}")


def _check_spectrum_domain(name: str, p: float | None, lam: np.ndarray) -> None:
    needs_positive = name in _POSITIVE_ONLY or (
        name == "power" and p is not None and float(p) != round(float(p))
    ) or (name == "power" and p is not None and p < 0)
    if needs_positive and lam[0] <= 0.0:
        raise DomainError(
            f"scalar function {name!r} requires a strictly positive spectrum "
            f"(min eigenvalue {lam[0]:.3e})"
        )
    if name == "power" and lam[0] < 0.0:
        raise DomainError("power requires a nonnegative spectrum")


def _eig_of(A: HermitianMatrix) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(A, PositiveMatrix):
        return A.spectral.eigenvalues, A.spectral.frame
    spec = spectral_decompose(A)
    return spec.eigenvalues, spec.frame


def fn_apply_eig(lam: np.ndarray, frame: np.ndarray, name: str, p: float | None = None) -> np.ndarray:
    f, _ = _scalar_pair(name, p)
    return hermitize((frame * f(lam)) @ frame.conj().T)


def apply_function(A: HermitianMatrix, name: str, p: float | None = None) -> HermitianMatrix:
    """Spectral application of a scalar function: frame * diag(f(lambda)) * frame^*.

    ``name`` is one of ``log``, ``exp``, ``xlogx``, ``power`` (with exponent ``p``).
    ``exp`` accepts any Hermitian input; the others require a positive spectrum.
    """
    lam, frame = _eig_of(A)
    _check_spectrum_domain(name, p, lam)
    return HermitianMatrix(fn_apply_eig(lam, frame, name, p))


def dd_kernel(lam: np.ndarray, name: str, p: float | None = None) -> np.ndarray:
    """First-divided-difference (Loewner) kernel of f on a spectrum."""
    f, fprime = _scalar_pair(name, p)
    ai = lam[:, None]
    aj = lam[None, :]
    diff = ai - aj
    close = np.abs(diff) <= DD_SPLIT * np.maximum(np.abs(ai), np.abs(aj))
    safe = np.where(close, 1.0, diff)
    fv = f(lam)
    kernel = (fv[:, None] - fv[None, :]) / safe
    return np.where(close, fprime((ai + aj) / 2.0), kernel)


def dd_apply_eig(lam: np.ndarray, frame: np.ndarray, X: np.ndarray,
                 name: str, p: float | None = None) -> np.ndarray:
    Xt = frame.conj().T @ X @ frame
    K = dd_kernel(lam, name, p)
    return hermitize(frame @ (K * Xt) @ frame.conj().T)


def divided_difference_apply(A: PositiveMatrix, X: HermitianMatrix,
                             name: str, p: float | None = None) -> HermitianMatrix:
    """Frechet derivative of a matrix function at A, applied to direction X.

    In the eigenbasis of A the map multiplies entries by
    (f(a_i) - f(a_j)) / (a_i - a_j), falling back to f'((a_i + a_j)/2) on
    near-degenerate pairs. Linear and self-adjoint in X.
    """
    if A.dim != X.dim:
        raise DimensionMismatch(f"dimension mismatch: {A.dim} vs {X.dim}")
    lam, frame = _eig_of(A)
    _check_spectrum_domain(name, p, lam)
    return HermitianMatrix(dd_apply_eig(lam, frame, X.entries, name, p))


def dlog_inverse_apply(A: PositiveMatrix, X: HermitianMatrix) -> HermitianMatrix:
    """Inverse of the log Frechet-derivative map: X |-> integral A^{1-s} X A^s ds.

    In A's eigenbasis this multiplies entries by the logarithmic mean
    (a_i - a_j) / (log a_i - log a_j), with diagonal a_i.
    """
    if A.dim != X.dim:
        raise DimensionMismatch(f"dimension mismatch: {A.dim} vs {X.dim}")
    lam, frame = _eig_of(A)
    K = 1.0 / dd_kernel(lam, "log")
    Xt = frame.conj().T @ X.entries @ frame
    return HermitianMatrix(hermitize(frame @ (K * Xt) @ frame.conj().T))


def sandwich(A, X: HermitianMatrix) -> HermitianMatrix:
    """Conjugation A X A^* (Hermitian whenever X is)."""
    a = np.asarray(A.entries if isinstance(A, HermitianMatrix) else A, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] != X.dim:
        raise DimensionMismatch(
            f"conjugating matrix shape {a.shape} does not match dimension {X.dim}"
        )
    return HermitianMatrix(hermitize(a @ X.entries @ a.conj().T))


class SchattenNorms(NamedTuple):
    trace_norm: float
    hs_norm: float
    op_norm: float


def schatten(M: HermitianMatrix) -> SchattenNorms:
    """Schatten 1-, 2-, and infinity-norms from the spectrum."""
    lam = np.linalg.eigvalsh(M.entries)
    a = np.abs(lam)
    return SchattenNorms(float(a.sum()), float(np.sqrt((a * a).sum())), float(a.max()))


def lambda_max(M: HermitianMatrix) -> float:
    return float(np.linalg.eigvalsh(M.entries)[-1])


def pinch(X: HermitianMatrix, frame: np.ndarray) -> HermitianMatrix:
    """Projection onto the diagonal in a given orthonormal frame.

    Positive, unital, trace preserving.
    """
    F = np.asarray(frame, dtype=np.complex128)
    if F.shape != (X.dim, X.dim):
        raise DimensionMismatch(f"frame shape {F.shape} does not match dimension {X.dim}")
    defect = np.max(np.abs(F.conj().T @ F - np.eye(X.dim)))
    if defect > UNITARY_ATOL:
        raise NotUnitary(f"frame is not unitary: max deviation {defect:.3e}")
    d = np.real(np.einsum("ij,jk,ki->i", F.conj().T, X.entries, F))
    return HermitianMatrix(hermitize((F * d) @ F.conj().T))


# ---------------------------------------------------------------------------
# Random ensembles
# ---------------------------------------------------------------------------

ENSEMBLE_KINDS = ("hermitian", "positive", "density", "unitary", "commutingPair",
                  "positiveTriple")


@dataclass(frozen=True)
class EnsembleSpec:
    """Recipe for a reproducible matrix ensemble.

    Generation is a pure function of (spec, trial_index): identical inputs
    reproduce identical matrices bit for bit.
    """

    dim: int
    kappa: float = 1.0
    kind: str = "positive"
    master_seed: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionMismatch("ensemble dimension must be at least 1")
        if self.kappa < 1.0:
            raise DomainError("target condition number kappa must be >= 1")
        if self.kind not in ENSEMBLE_KINDS:
            raise DomainError(f"unknown ensemble kind {self.kind!r}")


def _rng_for(spec: EnsembleSpec, trial_index: int) -> np.random.Generator:
    seq = np.random.SeedSequence((spec.master_seed & 0xFFFFFFFFFFFFFFFF, trial_index))
    return np.random.Generator(np.random.Philox(seq))


def _gaussian_complex(rng: np.random.Generator, n: int) -> np.ndarray:
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)


def _haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    # QR of a complex Gaussian with the R diagonal phase fixed gives Haar measure.
    q, r = np.linalg.qr(_gaussian_complex(rng, n))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _positive_from(rng: np.random.Generator, dim: int, kappa: float) -> np.ndarray:
    u = _haar_unitary(rng, dim)
    half = 0.5 * np.log(kappa)
    lam = np.exp(rng.uniform(-half, half, size=dim))
    return hermitize((u * lam) @ u.conj().T)


def random_ensemble(spec: EnsembleSpec, trial_index: int):
    """Draw one sample (matrix or tuple, depending on spec.kind)."""
    rng = _rng_for(spec, trial_index)
    n = spec.dim
    if spec.kind == "hermitian":
        g = _gaussian_complex(rng, n)
        return HermitianMatrix(hermitize(g))
    if spec.kind == "unitary":
        return _haar_unitary(rng, n)
    if spec.kind == "positive":
        return PositiveMatrix(_positive_from(rng, n, spec.kappa))
    if spec.kind == "density":
        a = _positive_from(rng, n, spec.kappa)
        return DensityMatrix(a / np.trace(a).real)
    if spec.kind == "commutingPair":
        u = _haar_unitary(rng, n)
        half = 0.5 * np.log(spec.kappa)
        lam1 = np.exp(rng.uniform(-half, half, size=n))
        lam2 = np.exp(rng.uniform(-half, half, size=n))
        a = hermitize((u * lam1) @ u.conj().T)
        b = hermitize((u * lam2) @ u.conj().T)
        return PositiveMatrix(a), PositiveMatrix(b)
    if spec.kind == "positiveTriple":
        x = _positive_from(rng, n, spec.kappa)
        y = _positive_from(rng, n, spec.kappa)
        z = _positive_from(rng, n, spec.kappa)
        z = z * (np.trace(x).real / np.trace(z).real)
        return PositiveMatrix(x), PositiveMatrix(y), PositiveMatrix(z)
    raise DomainError(f"unknown ensemble kind {spec.kind!r}")  # pragma: no cover


# ---------------------------------------------------------------------------
# Hermitian <-> real-vector coordinates (isometric for the HS inner product)
# ---------------------------------------------------------------------------

def herm_to_vec(W: np.ndarray) -> np.ndarray:
    """Real coordinates of a Hermitian matrix; Euclidean norm equals the HS norm."""
    n = W.shape[0]
    iu = np.triu_indices(n, k=1)
    off = W[iu]
    return np.concatenate([
        np.real(np.diagonal(W)),
        np.sqrt(2.0) * off.real,
        np.sqrt(2.0) * off.imag,
    ])


def vec_to_herm(v: np.ndarray, n: int) -> np.ndarray:
    iu = np.triu_indices(n, k=1)
    m = n * (n - 1) // 2
    W = np.zeros((n, n), dtype=np.complex128)
    np.fill_diagonal(W, v[:n])
    off = (v[n:n + m] + 1j * v[n + m:n + 2 * m]) / np.sqrt(2.0)
    W[iu] = off
    W[(iu[1], iu[0])] = off.conj()
    return W


# ---------------------------------------------------------------------------
# Matrix file format
# ---------------------------------------------------------------------------

def _fmt(x: float) -> float:
    # Round-trip through 17 significant digits (exact for IEEE doubles).
    return float(f"{x:.17g}")


def matrix_to_json(m: HermitianMatrix) -> str:
    entries = [[_fmt(z.real), _fmt(z.imag)] for z in m.entries.ravel()]
    return json.dumps({"dim": m.dim, "entries": entries})


def matrix_from_json(text: str) -> HermitianMatrix:
    try:
        obj = json.loads(text)
        dim = int(obj["dim"])
        entries = obj["entries"]
        if len(entries) != dim * dim:
            raise DomainError(
                f"matrix file declares dim={dim} but has {len(entries)} entries "
                f"(expected {dim * dim})"
            )
        flat = np.array([complex(re, im) for re, im in entries], dtype=np.complex128)
    except DomainError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed matrix file: {exc}") from exc
    return HermitianMatrix(flat.reshape(dim, dim))


def write_matrix(path, m: HermitianMatrix) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(matrix_to_json(m))
        fh.write("\n")


def read_matrix(path) -> HermitianMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return matrix_from_json(fh.read())
