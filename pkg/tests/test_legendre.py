import numpy as np
import pytest

from traceineq.core import (
    EnsembleSpec,
    HermitianMatrix,
    PositiveMatrix,
    hermitize,
    random_ensemble,
)
from traceineq.entropy import bs_entropy, umegaki
from traceineq.legendre import (
    dual_relation_residual,
    exp_difference_check,
    geo_exp_lower,
    gibbs_state,
    golden_thompson_chain,
    phi_bs,
    phi_donald,
    phi_umegaki,
    psi_bs,
    psi_donald,
    psi_umegaki,
    solve_bs_maximizer,
)


def _herm(seed, dim=3, trial=0):
    spec = EnsembleSpec(dim=dim, kind="hermitian", master_seed=seed)
    return random_ensemble(spec, trial)


def _pos(seed, dim=3, kappa=100.0, trial=0):
    spec = EnsembleSpec(dim=dim, kappa=kappa, kind="positive", master_seed=seed)
    return random_ensemble(spec, trial)


def test_umegaki_transform_oracle():
    # H = 0, Y = I/n: psi = tr e^{log Y} = 1, phi = log 1 + 1 - tr Y = 1 - 1.
    n = 3
    H = HermitianMatrix(np.zeros((n, n), dtype=complex))
    Y = PositiveMatrix(np.eye(n, dtype=complex) / n)
    assert psi_umegaki(H, Y) == pytest.approx(1.0 - 1.0, abs=1e-12)
    assert phi_umegaki(H, Y) == pytest.approx(0.0 + 1.0 - 1.0, abs=1e-12)


def test_gibbs_state_maximizes():
    H = _herm(1)
    Y = _pos(2)
    X = gibbs_state(H, Y)
    assert X.trace == pytest.approx(1.0, abs=1e-10)
    star = float(np.trace(X.entries @ H.entries).real) - umegaki(
        PositiveMatrix(X.entries), Y)
    assert star == pytest.approx(phi_umegaki(H, Y), abs=1e-9)


def test_dual_relation_all_kinds():
    H = _herm(3)
    Y = _pos(4)
    tr_y = Y.trace
    assert dual_relation_residual(
        phi_umegaki(H, Y), psi_umegaki(H, Y), tr_y) <= 1e-10
    sd = phi_donald(H, Y)
    assert dual_relation_residual(sd.value, psi_donald(H, Y).value, tr_y) <= 1e-10
    assert dual_relation_residual(phi_bs(H, Y), psi_bs(H, Y), tr_y) <= 1e-10


def test_phi_donald_certificate_and_ordering():
    H = _herm(5)
    Y = _pos(6)
    sol = phi_donald(H, Y)
    assert sol.dual_lower <= sol.value <= sol.primal_upper
    assert sol.gap <= 1e-5 * (1.0 + abs(sol.value))
    # Smaller entropy gives the larger transform.
    pu = phi_umegaki(H, Y)
    assert sol.value >= pu - 1e-7 * (1.0 + abs(pu))
    assert phi_bs(H, Y) <= pu + 1e-7 * (1.0 + abs(pu))


def test_phi_donald_commuting_matches_umegaki():
    spec = EnsembleSpec(dim=3, kappa=50.0, kind="commutingPair", master_seed=7)
    A, Y = random_ensemble(spec, 0)
    lam, U = np.linalg.eigh(A.entries)
    H = HermitianMatrix(hermitize((U * np.log(lam)) @ U.conj().T))
    sol = phi_donald(H, Y)
    pu = phi_umegaki(H, Y)
    assert sol.value == pytest.approx(pu, abs=1e-7 * (1.0 + abs(pu)))


def test_bs_maximizer():
    H = _herm(8)
    Y = _pos(9)
    sol = solve_bs_maximizer(H, Y)
    assert sol.residual <= 1e-8
    # H = 0 returns the identity.
    H0 = HermitianMatrix(np.zeros((3, 3), dtype=complex))
    sol0 = solve_bs_maximizer(H0, Y)
    assert np.linalg.norm(sol0.r.entries - np.eye(3), ord=2) <= 1e-8
    # Transform ordering follows the entropy ordering.
    assert psi_bs(H, Y) <= psi_umegaki(H, Y) + 1e-9 * (
        1.0 + abs(psi_umegaki(H, Y)))


def test_bs_commuting_returns_exp_h():
    spec = EnsembleSpec(dim=3, kappa=50.0, kind="commutingPair", master_seed=10)
    A, Y = random_ensemble(spec, 0)
    lam, U = np.linalg.eigh(A.entries)
    H = HermitianMatrix(hermitize((U * np.log(lam)) @ U.conj().T))
    sol = solve_bs_maximizer(H, Y)
    ref = hermitize((U * lam) @ U.conj().T)
    assert np.linalg.norm(sol.r.entries - ref, ord=2) <= 1e-8 * max(
        1.0, np.linalg.norm(ref, ord=2))


def test_golden_thompson_chain_at_zero():
    n = 4
    Z = HermitianMatrix(np.zeros((n, n), dtype=complex))
    chain = golden_thompson_chain(Z, Z)
    for v in (chain.lower, chain.middle, chain.upper):
        assert v == pytest.approx(np.log(n), abs=1e-9)


def test_golden_thompson_chain_ordering():
    H = _herm(11)
    K = _herm(12)
    chain = golden_thompson_chain(H, K)
    scale = max(1.0, abs(chain.lower), abs(chain.upper))
    slack = chain.saddle.gap + 1e-9 * scale
    assert chain.lower <= chain.middle + slack
    assert chain.middle <= chain.upper + slack
    assert chain.lower <= chain.upper + 1e-9 * scale


def test_exp_difference_and_geo_exp_lower():
    H = _herm(13)
    L = _herm(14)
    lhs, rhs = exp_difference_check(H, L)
    assert lhs <= rhs + 1e-9 * max(1.0, abs(lhs), abs(rhs))
    Y = _pos(15)
    lo, hi = geo_exp_lower(H, Y)
    assert lo <= hi + 1e-9 * max(1.0, abs(lo), abs(hi))


def test_phi_bs_below_phi_umegaki_commuting_equality():
    spec = EnsembleSpec(dim=3, kappa=20.0, kind="commutingPair", master_seed=16)
    A, Y = random_ensemble(spec, 0)
    lam, U = np.linalg.eigh(A.entries)
    H = HermitianMatrix(hermitize((U * np.log(lam)) @ U.conj().T))
    pu = phi_umegaki(H, Y)
    assert phi_bs(H, Y) == pytest.approx(pu, abs=1e-7 * (1.0 + abs(pu)))
