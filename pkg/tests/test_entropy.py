import numpy as np
import pytest

from traceineq.core import (
    EnsembleSpec,
    HermitianMatrix,
    NotUnitary,
    PositiveMatrix,
    divided_difference_apply,
    dlog_inverse_apply,
    hermitize,
    random_ensemble,
)
from traceineq.entropy import (
    bs_entropy,
    donald,
    donald_pinched,
    entropy_chain,
    pinsker_bound,
    solve_donald_q,
    umegaki,
)


def _pair(seed=0, dim=3, kappa=100.0, trial=0):
    spec = EnsembleSpec(dim=dim, kappa=kappa, kind="positive", master_seed=seed)
    return random_ensemble(spec, 2 * trial), random_ensemble(spec, 2 * trial + 1)


def test_classical_kl_oracle():
    # Densities diag(1/2, 1/2) vs diag(3/4, 1/4): KL = log(4/3)/2 nats.
    X = PositiveMatrix(np.diag([0.5, 0.5]).astype(complex))
    Y = PositiveMatrix(np.diag([0.75, 0.25]).astype(complex))
    expect = 0.5 * np.log(4.0 / 3.0)
    assert umegaki(X, Y) == pytest.approx(expect, abs=1e-12)
    assert bs_entropy(X, Y) == pytest.approx(expect, abs=1e-9)
    assert donald(X, Y) == pytest.approx(expect, abs=1e-8)


def test_trace_term_convention():
    # R(X, cX) = (1 - c + log c... ) check: umegaki(X, 2X) = (1 - log 2) tr X.
    X = PositiveMatrix(np.diag([1.0, 2.0]).astype(complex))
    expect = (1.0 - np.log(2.0)) * X.trace
    assert umegaki(X, PositiveMatrix(2.0 * X.entries)) == pytest.approx(
        expect, abs=1e-12)
    # Nonnegativity for unequal traces too.
    assert umegaki(X, PositiveMatrix(2.0 * X.entries)) >= 0.0


def test_scaling_laws():
    X, Y = _pair(seed=1)
    c = 3.0
    cX = PositiveMatrix(c * X.entries)
    cY = PositiveMatrix(c * Y.entries)
    for fn, tol in ((umegaki, 1e-10), (bs_entropy, 1e-8), (donald, 1e-7)):
        base = fn(X, Y)
        assert fn(cX, Y) == pytest.approx(
            c * base + c * np.log(c) * X.trace + (1.0 - c) * Y.trace,
            abs=tol * max(1.0, abs(base)))
        assert fn(cX, cY) == pytest.approx(c * base,
                                           abs=tol * max(1.0, abs(base)))


def test_commuting_equality_and_q():
    spec = EnsembleSpec(dim=3, kappa=100.0, kind="commutingPair", master_seed=4)
    X, Y = random_ensemble(spec, 0)
    u = umegaki(X, Y)
    assert bs_entropy(X, Y) == pytest.approx(u, abs=1e-9 * max(1.0, abs(u)))
    sol = solve_donald_q(X, Y)
    assert sol.objective + Y.trace - X.trace == pytest.approx(
        u, abs=1e-7 * max(1.0, abs(u)))
    qref = X.entries @ np.linalg.inv(Y.entries)
    assert np.linalg.norm(sol.q.entries - qref, ord=2) <= 1e-8 * max(
        1.0, np.linalg.norm(qref, ord=2))


def test_donald_solver_certificates():
    for trial in range(5):
        X, Y = _pair(seed=5, trial=trial)
        sol = solve_donald_q(X, Y)
        assert sol.residual <= 1e-8
        q_constraint = np.trace(sol.q.entries @ Y.entries).real
        assert abs(q_constraint - X.trace) <= 1e-10 * X.trace


def test_entropy_chain_order():
    for trial in range(5):
        X, Y = _pair(seed=6, trial=trial)
        chain = entropy_chain(X, Y)
        scale = max(1.0, abs(chain.umegaki))
        assert chain.lower <= chain.umegaki + 1e-6 * scale
        assert chain.umegaki <= chain.upper + 1e-9 * scale
        assert chain.lower >= -1e-7 * scale


def test_pinsker():
    for trial in range(5):
        X, Y = _pair(seed=7, trial=trial)
        assert pinsker_bound(X, Y) <= donald(X, Y) + 1e-8


def test_donald_pinched_lower_bound_and_frame():
    X, Y = _pair(seed=8)
    sol = solve_donald_q(X, Y)
    val = sol.objective + Y.trace - X.trace
    frame = sol.q.spectral.frame
    pinched = donald_pinched(X, Y, frame)
    # The optimal pinching frame is the eigenbasis of the maximizer.
    assert pinched == pytest.approx(val, abs=1e-7 * max(1.0, abs(val)))
    # Any other orthonormal frame gives a lower bound.
    other = X.spectral.frame
    assert donald_pinched(X, Y, other) <= val + 1e-7 * max(1.0, abs(val))
    with pytest.raises(NotUnitary):
        donald_pinched(X, Y, np.ones((3, 3)))


def test_variational_changes_of_variable_agree():
    # The constrained supremum can be written over three transformed
    # variables; pushing the solved maximizer through each change of
    # variables and re-evaluating the objective must reproduce the value.
    X, Y = _pair(seed=9)
    sol = solve_donald_q(X, Y)
    val = sol.objective + Y.trace - X.trace
    Q = sol.q
    scale = max(1.0, abs(val))

    def obj_from_q(Qm: PositiveMatrix) -> float:
        lam, U = np.linalg.eigh(Qm.entries)
        logq = hermitize((U * np.log(lam)) @ U.conj().T)
        return float(np.trace(X.entries @ logq).real) + Y.trace - X.trace

    # Z = Y^{1/2} Q Y^{1/2}, recovered by the inverse congruence.
    ry = Y.spectral.frame * np.sqrt(Y.spectral.eigenvalues) @ Y.spectral.frame.conj().T
    ryi = np.linalg.inv(ry)
    Z1 = hermitize(ry @ Q.entries @ ry)
    back1 = PositiveMatrix(hermitize(ryi @ Z1 @ ryi))
    assert obj_from_q(back1) == pytest.approx(val, abs=1e-7 * scale)

    # Z = Q^{1/2} Y Q^{1/2}, recovered through the quadratic (Riccati)
    # equation S Y S = Z with S = Q^{1/2}.
    lamq, Uq = np.linalg.eigh(Q.entries)
    rq = hermitize((Uq * np.sqrt(lamq)) @ Uq.conj().T)
    Z2 = PositiveMatrix(hermitize(rq @ Y.entries @ rq))
    lamy, Uy = np.linalg.eigh(Y.entries)
    ryh = hermitize((Uy * np.sqrt(lamy)) @ Uy.conj().T)
    ryhi = np.linalg.inv(ryh)
    inner = hermitize(ryh @ Z2.entries @ ryh)
    lami, Ui = np.linalg.eigh(inner)
    s = hermitize(ryhi @ hermitize((Ui * np.sqrt(lami)) @ Ui.conj().T) @ ryhi)
    back2 = PositiveMatrix(hermitize(s @ s))
    assert obj_from_q(back2) == pytest.approx(val, abs=1e-7 * scale)

    # Z = derivative-of-exp transport of Q along log Y, recovered by the
    # derivative of log at Y.
    Z3 = dlog_inverse_apply(Y, HermitianMatrix(Q.entries))
    back3 = PositiveMatrix(divided_difference_apply(Y, Z3, "log").entries)
    assert obj_from_q(back3) == pytest.approx(val, abs=1e-7 * scale)
