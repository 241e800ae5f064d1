import numpy as np
import pytest

from traceineq.core import (
    DensityMatrix,
    DimensionMismatch,
    DomainError,
    EnsembleSpec,
    HermitianMatrix,
    PositiveMatrix,
    apply_function,
    dd_kernel,
    divided_difference_apply,
    dlog_inverse_apply,
    herm_to_vec,
    hermitize,
    lambda_max,
    matrix_from_json,
    matrix_to_json,
    pinch,
    random_ensemble,
    schatten,
    spectral_decompose,
    vec_to_herm,
)


def test_known_spectrum():
    # [[2,1],[1,2]] has eigenvalues 1 and 3 with (1,-1)/sqrt(2), (1,1)/sqrt(2).
    A = PositiveMatrix(np.array([[2.0, 1.0], [1.0, 2.0]], dtype=complex))
    assert np.allclose(A.spectral.eigenvalues, [1.0, 3.0], atol=1e-12)
    rec = A.spectral.reconstruct()
    assert np.allclose(rec, A.entries, atol=1e-12)
    assert A.condition_number == pytest.approx(3.0, abs=1e-12)


def test_hermitian_rejects_nonhermitian():
    with pytest.raises(DomainError):
        HermitianMatrix(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))


def test_positive_rejects_indefinite():
    with pytest.raises(DomainError):
        PositiveMatrix(np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex))


def test_density_trace():
    with pytest.raises(DomainError):
        DensityMatrix(np.eye(2, dtype=complex))
    d = DensityMatrix(0.5 * np.eye(2, dtype=complex))
    assert d.trace == pytest.approx(1.0, abs=1e-12)


def test_apply_function_matches_scalar():
    A = PositiveMatrix(np.array([[2.0, 1.0], [1.0, 2.0]], dtype=complex))
    logA = apply_function(A, "log").entries
    # log on the known spectrum: eigenvalues log(1)=0 and log(3).
    expect = np.array([[np.log(3) / 2, np.log(3) / 2],
                       [np.log(3) / 2, np.log(3) / 2]])
    assert np.allclose(logA, expect, atol=1e-12)


def test_dd_kernel_scalar_oracle():
    lam = np.array([1.0, 2.0])
    k = dd_kernel(lam, "log")
    assert k[0, 1] == pytest.approx(np.log(2.0), abs=1e-12)
    assert k[0, 0] == pytest.approx(1.0, abs=1e-12)
    assert k[1, 1] == pytest.approx(0.5, abs=1e-12)
    # Near-degenerate pairs fall back to the derivative at the midpoint.
    lam2 = np.array([1.0, 1.0 + 1e-12])
    k2 = dd_kernel(lam2, "log")
    assert k2[0, 1] == pytest.approx(1.0, rel=1e-9)


def test_divided_difference_linear_selfadjoint():
    rng = np.random.default_rng(5)
    A = PositiveMatrix(hermitize(np.diag([1.0, 2.0, 5.0]).astype(complex)))
    X = HermitianMatrix(hermitize(rng.standard_normal((3, 3))
                                  + 1j * rng.standard_normal((3, 3))))
    Y = HermitianMatrix(hermitize(rng.standard_normal((3, 3))
                                  + 1j * rng.standard_normal((3, 3))))
    DX = divided_difference_apply(A, X, "log").entries
    DY = divided_difference_apply(A, Y, "log").entries
    lhs = np.trace(DX @ Y.entries).real
    rhs = np.trace(X.entries @ DY).real
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_dlog_inverse_roundtrip():
    rng = np.random.default_rng(6)
    A = PositiveMatrix(hermitize(np.diag([0.5, 1.0, 4.0]).astype(complex)))
    X = HermitianMatrix(hermitize(rng.standard_normal((3, 3))
                                  + 1j * rng.standard_normal((3, 3))))
    Z = divided_difference_apply(A, X, "log")
    back = dlog_inverse_apply(A, Z).entries
    assert np.allclose(back, X.entries, atol=1e-11)


def test_schatten_oracle():
    # Eigenvalues {1, -3}: trace norm 4, HS norm sqrt(10), operator norm 3.
    A = HermitianMatrix(np.diag([1.0, -3.0]).astype(complex))
    norms = schatten(A)
    assert norms.trace_norm == pytest.approx(4.0, abs=1e-12)
    assert norms.hs_norm == pytest.approx(np.sqrt(10.0), abs=1e-12)
    assert norms.op_norm == pytest.approx(3.0, abs=1e-12)
    assert lambda_max(A) == pytest.approx(1.0, abs=1e-12)


def test_pinch_preserves_trace():
    rng = np.random.default_rng(7)
    X = HermitianMatrix(hermitize(rng.standard_normal((4, 4))
                                  + 1j * rng.standard_normal((4, 4))))
    spec = EnsembleSpec(dim=4, kind="unitary", master_seed=3)
    U = random_ensemble(spec, 0)
    P = pinch(X, U)
    assert np.trace(P.entries).real == pytest.approx(X.trace, abs=1e-12)


def test_ensemble_determinism_and_kappa():
    spec = EnsembleSpec(dim=4, kappa=50.0, kind="positive", master_seed=11)
    a = random_ensemble(spec, 3)
    b = random_ensemble(spec, 3)
    assert a.entries.tobytes() == b.entries.tobytes()
    assert a.condition_number <= 50.0 * (1 + 1e-12)
    c = random_ensemble(spec, 4)
    assert not np.array_equal(a.entries, c.entries)


def test_commuting_pair_commutes():
    spec = EnsembleSpec(dim=3, kappa=100.0, kind="commutingPair", master_seed=2)
    a, b = random_ensemble(spec, 0)
    assert np.linalg.norm(a.entries @ b.entries - b.entries @ a.entries) < 1e-12


def test_herm_vec_isometry():
    rng = np.random.default_rng(8)
    W = hermitize(rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3)))
    v = herm_to_vec(W)
    assert np.linalg.norm(v) == pytest.approx(np.linalg.norm(W), rel=1e-12)
    assert np.allclose(vec_to_herm(v, 3), W, atol=1e-12)


def test_matrix_json_roundtrip():
    rng = np.random.default_rng(9)
    W = HermitianMatrix(hermitize(rng.standard_normal((3, 3))
                                  + 1j * rng.standard_normal((3, 3))))
    back = matrix_from_json(matrix_to_json(W))
    assert np.array_equal(back.entries, W.entries)


def test_dimension_mismatch():
    A = PositiveMatrix(np.eye(2, dtype=complex))
    X = HermitianMatrix(np.eye(3, dtype=complex))
    with pytest.raises(DimensionMismatch):
        divided_difference_apply(A, X, "log")


def test_spectral_decompose_consistency():
    rng = np.random.default_rng(10)
    W = hermitize(rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))
    dec = spectral_decompose(HermitianMatrix(W))
    assert np.all(np.diff(dec.eigenvalues) >= 0)
    assert np.allclose(dec.reconstruct(), W, atol=1e-12)
