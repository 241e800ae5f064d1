"""Command-line front end.

Subcommands: ``verify`` (run randomized check suites), ``compute`` (evaluate
entropies, means, distances, and the exponential trace chain on matrices
loaded from files), ``sweep`` (one check across a parameter grid, CSV out),
and ``solve`` (expose the iterative solvers with their certificates).

Exit codes: 0 on success, 1 on verified inequality failures or solver
non-convergence, 2 on usage or input errors. All output is a deterministic
function of the flag set; ``--jobs`` is accepted for interface stability but
trials always run serially, so results are identical for any value.
"""

from __future__ import annotations

import argparse
import statistics
import sys
from typing import Optional

import numpy as np

from . import harness
from .core import (
    HermitianMatrix,
    NonConvergence,
    PositiveMatrix,
    ToolkitError,
    read_matrix,
    write_matrix,
)
from .entropy import bs_entropy, solve_donald_q, umegaki
from .legendre import golden_thompson_chain, phi_donald, solve_bs_maximizer
from .means import geodesic_distance, weighted_geometric_mean

__all__ = ["main"]


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=float, default=None,
                   help="override the per-check default tolerance")
    p.add_argument("--kappa", type=float, default=1e3)
    p.add_argument("--jobs", type=int, default=1,
                   help="accepted for compatibility; execution is serial")


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="traceineq")
    sub = top.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="run randomized verification checks")
    group = pv.add_mutually_exclusive_group()
    group.add_argument("--suite", default="all")
    group.add_argument("--check")
    pv.add_argument("--format", choices=("text", "json", "csv"), default="text")
    pv.add_argument("--out")
    pv.add_argument("--commuting", action="store_true",
                    help="draw commuting instances (inequalities saturate)")
    _add_common(pv)

    pc = sub.add_parser("compute", help="evaluate quantities on matrix files")
    csub = pc.add_subparsers(dest="subcommand", required=True)
    pe = csub.add_parser("entropy")
    pe.add_argument("--kind", choices=("umegaki", "donald", "bs"),
                    default="umegaki")
    pe.add_argument("--x", required=True)
    pe.add_argument("--y", required=True)
    pm = csub.add_parser("mean")
    pm.add_argument("--t", type=float, default=0.5)
    pm.add_argument("--x", required=True)
    pm.add_argument("--y", required=True)
    pm.add_argument("--out")
    pd = csub.add_parser("distance")
    pd.add_argument("--x", required=True)
    pd.add_argument("--y", required=True)
    pg = csub.add_parser("gt-chain")
    pg.add_argument("--h", required=True)
    pg.add_argument("--k", required=True)

    ps = sub.add_parser("sweep", help="run one check across a parameter grid")
    ps.add_argument("--check", required=True)
    ps.add_argument("--param", required=True)
    ps.add_argument("--from", dest="lo", type=float, required=True)
    ps.add_argument("--to", dest="hi", type=float, required=True)
    ps.add_argument("--steps", type=int, required=True)
    ps.add_argument("--out")
    _add_common(ps)

    po = sub.add_parser("solve", help="run a solver and report its certificate")
    osub = po.add_subparsers(dest="subcommand", required=True)
    pq = osub.add_parser("donald-q")
    pq.add_argument("--x", required=True)
    pq.add_argument("--y", required=True)
    pq.add_argument("--out")
    pr = osub.add_parser("bs-r")
    pr.add_argument("--h", required=True)
    pr.add_argument("--y", required=True)
    pr.add_argument("--out")
    pp = osub.add_parser("phi-donald")
    pp.add_argument("--h", required=True)
    pp.add_argument("--y", required=True)
    pp.add_argument("--out")
    return top


def _sig(v: float) -> str:
    return f"{v:.12g}"


def _load_hermitian(path: str) -> HermitianMatrix:
    return read_matrix(path)


def _load_positive(path: str) -> PositiveMatrix:
    return PositiveMatrix(read_matrix(path).entries)


def _print_matrix(m: HermitianMatrix) -> None:
    for row in m.entries:
        print("  ".join(f"{z.real:.12g}{z.imag:+.12g}j" for z in row))


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        print(text)


def _cmd_verify(args: argparse.Namespace) -> int:
    if args.check:
        reports = [harness.run_check(
            args.check, dim=args.dim, trials=args.trials, seed=args.seed,
            kappa=args.kappa, tol=args.tol, commuting=args.commuting)]
    else:
        reports = harness.run_suite(
            args.suite, dim=args.dim, trials=args.trials, seed=args.seed,
            kappa=args.kappa, tol=args.tol, commuting=args.commuting)
    total = sum(r.trials for r in reports)
    failed = sum(r.failures for r in reports)
    if args.format == "json":
        body = "[" + ",".join(harness.report_to_json(r) for r in reports) + "]"
        _emit(body, args.out)
    elif args.format == "csv":
        chunks = []
        for r in reports:
            chunks.append(f"# {r.check_id}")
            chunks.append(harness.report_to_csv(r).rstrip("\n"))
        _emit("\n".join(chunks), args.out)
    else:
        lines = []
        for r in reports:
            lines.append(
                f"{r.check_id}: trials={r.trials} failures={r.failures} "
                f"minGap={r.min_gap:.6e} tol={r.tol:g}")
        lines.append("PASS" if failed == 0 else f"FAIL: {failed}/{total}")
        _emit("\n".join(lines), args.out)
    return 0 if failed == 0 else 1


def _cmd_compute(args: argparse.Namespace) -> int:
    if args.subcommand == "entropy":
        X = _load_positive(args.x)
        Y = _load_positive(args.y)
        if args.kind == "umegaki":
            print(_sig(umegaki(X, Y)))
        elif args.kind == "bs":
            print(_sig(bs_entropy(X, Y)))
        else:
            sol = solve_donald_q(X, Y)
            value = sol.objective + Y.trace - X.trace
            print(_sig(value))
            print(f"residual={_sig(sol.residual)} iterations={sol.iterations}")
    elif args.subcommand == "mean":
        X = _load_positive(args.x)
        Y = _load_positive(args.y)
        mean = weighted_geometric_mean(X, Y, args.t)
        _print_matrix(mean)
        if args.out:
            write_matrix(args.out, mean)
    elif args.subcommand == "distance":
        X = _load_positive(args.x)
        Y = _load_positive(args.y)
        print(_sig(geodesic_distance(X, Y)))
    else:  # gt-chain
        H = _load_hermitian(args.h)
        K = _load_hermitian(args.k)
        chain = golden_thompson_chain(H, K)
        print(f"lower={_sig(chain.lower)} middle={_sig(chain.middle)} "
              f"upper={_sig(chain.upper)} gap={_sig(chain.saddle.gap)}")
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    if args.steps < 1:
        raise ToolkitError("--steps must be at least 1")
    if args.steps == 1:
        grid = [args.lo]
    else:
        grid = [float(v) for v in np.linspace(args.lo, args.hi, args.steps)]
    lines = ["paramValue,trials,failures,minGap,medianGap"]
    for value in grid:
        rep = harness.run_check(
            args.check, dim=args.dim, trials=args.trials, seed=args.seed,
            kappa=args.kappa, tol=args.tol, params={args.param: float(value)})
        median = statistics.median(r.gap for r in rep.records)
        lines.append(f"{value!r},{rep.trials},{rep.failures},"
                     f"{rep.min_gap!r},{median!r}")
    _emit("\n".join(lines), args.out)
    return 0


def _cmd_solve(args: argparse.Namespace) -> int:
    if args.subcommand == "donald-q":
        X = _load_positive(args.x)
        Y = _load_positive(args.y)
        sol = solve_donald_q(X, Y)
        value = sol.objective + Y.trace - X.trace
        print(f"value={_sig(value)} residual={_sig(sol.residual)} "
              f"iterations={sol.iterations}")
        if args.out:
            write_matrix(args.out, sol.q)
    elif args.subcommand == "bs-r":
        H = _load_hermitian(args.h)
        Y = _load_positive(args.y)
        sol = solve_bs_maximizer(H, Y)
        print(f"value={_sig(sol.psi_value)} residual={_sig(sol.residual)} "
              f"iterations={sol.iterations}")
        if args.out:
            write_matrix(args.out, sol.r)
    else:  # phi-donald
        H = _load_hermitian(args.h)
        Y = _load_positive(args.y)
        sol = phi_donald(H, Y)
        print(f"value={_sig(sol.value)} lower={_sig(sol.dual_lower)} "
              f"upper={_sig(sol.primal_upper)} gap={_sig(sol.gap)}")
        if args.out:
            write_matrix(args.out, sol.x)
    return 0


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "compute":
            return _cmd_compute(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        return _cmd_solve(args)
    except NonConvergence as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        if exc.bounds is not None:
            lo, hi = exc.bounds
            print(f"bounds: lower={_sig(lo)} upper={_sig(hi)}",
                  file=sys.stderr)
        return 1
    except (ToolkitError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
