"""
Command-line interface.

Exit codes: 0 success, 2 usage, 3 parse/domain/I-O error, 4 numeric failure
or non-convergence.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bivariate, dataio, estimate, montecarlo, oracle, sampler
from .bivariate import BivParams
from .errors import (BSimplexError, DomainError, EstimationError, NumericError,
                     ParseError)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3, 4
DEFAULT_SEED = 12345
GRID_EPS = 1e-3


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _theta(mu1, mu2, s1, s2, lam) -> BivParams:
    return BivParams.of(mu1, mu2, s1, s2, lam)


def cmd_fit(path, level: float = 0.95, out=None) -> dict:
    """Fit a pair file; returns the result document (also written to ``out``)."""
    data = dataio.read_pairs(path)
    res = estimate.fit(data, level=level)
    doc = dataio.result_document(res)
    _emit(dataio.dumps_document(doc), out)
    return doc


def cmd_sample(mu1, mu2, s1, s2, lam, n, seed=DEFAULT_SEED, out=None) -> np.ndarray:
    data = sampler.sample_matrix(_theta(mu1, mu2, s1, s2, lam), n, seed)
    _emit(dataio.format_pairs(data), out)
    return data


def cmd_moment(mu1, mu2, s1, s2, lam, use_oracle=False) -> dict:
    th = _theta(mu1, mu2, s1, s2, lam)
    res = {"e_xy": bivariate.joint_moment(th)}
    if use_oracle:
        num = oracle.numeric_joint_moment(th)
        res["numeric"] = num
        res["rel_diff"] = abs(res["e_xy"] / num - 1.0)
    return res


def load_scenario(path) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(raw, dict) or "theta" not in raw:
        raise ParseError(f"{path}: scenario needs a 'theta' entry")
    theta = raw["theta"]
    if isinstance(theta, str):
        if theta not in montecarlo.SCENARIOS:
            raise ParseError(f"{path}: unknown scenario name {theta!r}")
        theta = montecarlo.SCENARIOS[theta]
    if len(theta) != 5:
        raise ParseError(f"{path}: theta must have 5 entries")
    return {"theta": [float(t) for t in theta],
            "sizes": [int(n) for n in raw.get("sizes", [50, 100, 150, 200, 1000])],
            "reps": int(raw.get("reps", 1000)),
            "seed": int(raw.get("seed", DEFAULT_SEED)),
            "level": float(raw.get("level", 0.95))}


def format_summary(summary: montecarlo.McSummary) -> str:
    lines = ["n,parameter,mean,bias,rmse,coverage,replications,non_converged"]
    for r in summary.rows:
        lines.append(f"{r.n},{r.parameter},{r.mean!r},{r.bias!r},{r.rmse!r},{r.coverage!r},"
                     f"{summary.replications[r.n]},{summary.non_converged[r.n]}")
    return "\n".join(lines) + "\n"


def cmd_simulate(scenario, reps=None, seed=None, out=None) -> montecarlo.McSummary:
    sc = load_scenario(scenario)
    cfg = montecarlo.ScenarioConfig(BivParams.from_vector(sc["theta"]), tuple(sc["sizes"]),
                                    sc["reps"] if reps is None else reps,
                                    sc["seed"] if seed is None else seed, sc["level"])
    summary = montecarlo.run_scenario(cfg)
    _emit(format_summary(summary), out)
    return summary


def density_grid(th: BivParams, k: int, eps: float = GRID_EPS) -> np.ndarray:
    """``(k+1)^2`` rows of ``(y1, y2, density)`` on the lattice over ``[eps, 1-eps]^2``."""
    if k < 1:
        raise DomainError(f"resolution must be at least 1, got {k}")
    if not 0.0 < eps < 0.5:
        raise DomainError("eps must lie in (0, 0.5)")
    ax = np.linspace(eps, 1.0 - eps, k + 1)
    from . import simplex
    f1, f2 = simplex.pdf(ax, th.m1), simplex.pdf(ax, th.m2)
    w1 = 2.0 * simplex.cdf(ax, th.m1) - 1.0
    w2 = 2.0 * simplex.cdf(ax, th.m2) - 1.0
    dens = np.outer(f1, f2) * np.maximum(1.0 + th.lam * np.outer(w1, w2), 0.0)
    Y1, Y2 = np.meshgrid(ax, ax, indexing="ij")
    return np.column_stack([Y1.ravel(), Y2.ravel(), dens.ravel()])


def cmd_grid(params, resolution, out=None, eps: float = GRID_EPS) -> np.ndarray:
    grid = density_grid(_theta(*params), resolution, eps)
    lines = ["y1,y2,density"] + [f"{a!r},{b!r},{c!r}" for a, b, c in grid.tolist()]
    _emit("\n".join(lines) + "\n", out)
    return grid


def cmd_check(quick: bool = False) -> list[tuple[str, bool, str]]:
    results = oracle.run_checks(include_slow=not quick)
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    n_fail = sum(not ok for _, ok, _ in results)
    print(f"{len(results) - n_fail}/{len(results)} checks passed")
    return results


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bsimplex",
                                description="Bivariate Simplex / FGM copula toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def theta_flags(sp):
        for flag in ("--mu1", "--mu2", "--s1", "--s2"):
            sp.add_argument(flag, type=float, required=True)
        sp.add_argument("--lambda", dest="lam", type=float, required=True)

    sp = sub.add_parser("fit", help="fit a two-column pair file")
    sp.add_argument("input")
    sp.add_argument("--level", type=float, default=0.95)
    sp.add_argument("--out")

    sp = sub.add_parser("sample", help="draw pairs")
    theta_flags(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--out")

    sp = sub.add_parser("moment", help="closed-form E[y1 y2]")
    theta_flags(sp)
    sp.add_argument("--oracle", action="store_true", help="also print the quadrature value")

    sp = sub.add_parser("simulate", help="Monte Carlo study from a scenario file")
    sp.add_argument("--scenario", required=True)
    sp.add_argument("--reps", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out")

    sp = sub.add_parser("grid", help="density on a regular lattice")
    sp.add_argument("--params", type=float, nargs=5, required=True,
                    metavar=("MU1", "MU2", "S1", "S2", "LAMBDA"))
    sp.add_argument("--resolution", type=int, required=True)
    sp.add_argument("--eps", type=float, default=GRID_EPS)
    sp.add_argument("--out")

    sp = sub.add_parser("check", help="run the oracle battery")
    sp.add_argument("--quick", action="store_true", help="skip the quadrature-heavy checks")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.command == "fit":
            doc = cmd_fit(args.input, args.level, args.out)
            return EXIT_OK if doc["converged"] else EXIT_NUMERIC
        if args.command == "sample":
            cmd_sample(args.mu1, args.mu2, args.s1, args.s2, args.lam, args.n, args.seed, args.out)
        elif args.command == "moment":
            res = cmd_moment(args.mu1, args.mu2, args.s1, args.s2, args.lam, args.oracle)
            if args.oracle:
                print(f"closed_form {res['e_xy']!r}\nnumeric {res['numeric']!r}\n"
                      f"rel_diff {res['rel_diff']:.3e}")
            else:
                print(repr(res["e_xy"]))
        elif args.command == "simulate":
            cmd_simulate(args.scenario, args.reps, args.seed, args.out)
        elif args.command == "grid":
            cmd_grid(args.params, args.resolution, args.out, args.eps)
        elif args.command == "check":
            results = cmd_check(args.quick)
            return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_NUMERIC
    except (ParseError, DomainError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (NumericError, EstimationError, BSimplexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main_entry() -> None:
    sys.exit(main())
