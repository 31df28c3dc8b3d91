"""Command-line harness tying generation, solving, and detection together.

Subcommands: ``generate``, ``solve``, ``detect``, ``bench``.  Matrices
travel as headerless CSV; structured results are JSON with a versioned
``schema_version`` field (currently 1).  Wall-time fields are informational
only and excluded from golden comparisons.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from .detection import (
    AbsoluteThreshold,
    LargestGap,
    RelativeMedian,
    detection_metrics,
    flag_corrupted,
    score_columns,
)
from .errors import NonFiniteIterateError, RobustRepError
from .matrix import column_norms
from .matrix_io import read_matrix_csv, write_matrix_csv
from .problem import ProblemSpec, Variant
from .solvers import (
    SolverOptions,
    solve_irls,
    solve_ladmap,
    solve_sparse_ladmap,
    solve_weighted_ladmap,
)
from .synthetic import CorruptionGroundTruth, GenSpec, generate_instance

__all__ = ["RunConfig", "run_command", "main"]

SCHEMA_VERSION = 1

_SOLVER_VARIANTS = {
    "ladmap": Variant.PLAIN,
    "irls": Variant.PLAIN,
    "weighted": Variant.WEIGHTED,
    "sparse": Variant.SPARSE,
}
_SOLVER_FUNCS = {
    "ladmap": solve_ladmap,
    "irls": solve_irls,
    "weighted": solve_weighted_ladmap,
    "sparse": solve_sparse_ladmap,
}


@dataclass
class RunConfig:
    """One CLI invocation, fully resolved."""

    command: str
    out: Path = Path(".")
    seed: int = 0
    # generation knobs (generate, bench)
    m: int = 40
    k: int = 20
    n: int = 100
    corruption_fraction: float = 0.1
    corruption_magnitude: float = 10.0
    noise_sigma: float = 0.01
    coeff_sparsity: float = 0.2
    # solve knobs
    solver: str = "ladmap"
    lam: float = 1.0
    beta: float = 0.0
    x: Path | None = None
    d: Path | None = None
    rho: float | None = None
    mu0: float | None = None
    mu_max: float | None = None
    eps: float | None = None
    max_iter: int | None = None
    # detect knobs
    z: Path | None = None
    truth: Path | None = None
    strategy: str = "gap"


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _gen_spec(config: RunConfig) -> GenSpec:
    return GenSpec(
        m=config.m,
        k=config.k,
        n=config.n,
        corruption_fraction=config.corruption_fraction,
        corruption_magnitude=config.corruption_magnitude,
        clean_coeff_sparsity=config.coeff_sparsity,
        noise_sigma=config.noise_sigma,
        seed=config.seed,
    )


def _solver_options(config: RunConfig) -> SolverOptions:
    base = SolverOptions.irls_defaults() if config.solver == "irls" else SolverOptions()
    overrides = {}
    if config.rho is not None:
        overrides["rho"] = config.rho
    if config.mu0 is not None:
        overrides["mu0"] = config.mu0
    if config.mu_max is not None:
        overrides["mu_max"] = config.mu_max
    if config.eps is not None:
        overrides["eps_tol"] = config.eps
    if config.max_iter is not None:
        overrides["max_iter"] = config.max_iter
    return replace(base, **overrides) if overrides else base


def _parse_strategy(text: str):
    if text == "gap":
        return LargestGap()
    if text.startswith("median:"):
        return RelativeMedian(fraction=float(text.removeprefix("median:")))
    if text.startswith("abs:"):
        return AbsoluteThreshold(tau=float(text.removeprefix("abs:")))
    raise ValueError(f"unknown strategy {text!r} (expected gap, median:<frac>, or abs:<tau>)")


def _unconstrained_objective(X, D, Z, lam) -> float:
    fit = X - D @ Z
    return float(column_norms(Z).sum() + 0.5 * lam * (fit * fit).sum())


def _relative_fit_error(X, D, Z) -> float:
    denom = float(np.linalg.norm(X))
    if denom == 0.0:
        return 0.0
    return float(np.linalg.norm(X - D @ Z)) / denom


def _report_payload(report, config: RunConfig, X, D, wall_time: float) -> dict:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "solver": report.solver_name,
        "converged": report.converged,
        "iterations": report.iterations,
        "objective_trace": report.objective_trace,
        "residual_trace": report.residual_trace,
        "final_objective": report.objective_trace[-1] if report.objective_trace else None,
        "relative_fit_error": _relative_fit_error(X, D, report.Z),
        "lambda": config.lam,
        "beta": config.beta,
        "wall_time_s": wall_time,
    }
    return payload


def _cmd_generate(config: RunConfig) -> int:
    gen = _gen_spec(config)
    spec, truth, z_true = generate_instance(gen)
    out = config.out
    write_matrix_csv(spec.X, out / "X.csv")
    write_matrix_csv(spec.D, out / "D.csv")
    write_matrix_csv(z_true, out / "Z_true.csv")
    _write_json(
        out / "truth.json",
        {
            "schema_version": SCHEMA_VERSION,
            "corrupted_indices": sorted(truth.corrupted_indices),
            "corruption_magnitude": truth.corruption_magnitude,
            "seed": truth.seed,
            "orthogonal_complement": truth.orthogonal_complement,
            "gen": asdict(gen),
        },
    )
    return 0


def _cmd_solve(config: RunConfig) -> int:
    if config.x is None or config.d is None:
        raise ValueError("solve requires --x and --d")
    if config.solver == "sparse" and not config.beta > 0:
        raise ValueError("solver=sparse requires --beta > 0")
    X = read_matrix_csv(config.x)
    D = read_matrix_csv(config.d)
    spec = ProblemSpec(
        X=X, D=D, variant=_SOLVER_VARIANTS[config.solver], lam=config.lam, beta=config.beta
    )
    opts = _solver_options(config)
    out = config.out
    start = time.perf_counter()
    try:
        report = _SOLVER_FUNCS[config.solver](spec, opts)
    except NonFiniteIterateError as exc:
        wall = time.perf_counter() - start
        partial = exc.report
        if partial is not None:
            write_matrix_csv(partial.Z, out / "Z.csv")
            write_matrix_csv(partial.E, out / "E.csv")
            payload = _report_payload(partial, config, X, D, wall)
            payload["aborted_non_finite"] = True
            _write_json(out / "report.json", payload)
        raise
    wall = time.perf_counter() - start
    write_matrix_csv(report.Z, out / "Z.csv")
    write_matrix_csv(report.E, out / "E.csv")
    _write_json(out / "report.json", _report_payload(report, config, X, D, wall))
    return 0


def _cmd_detect(config: RunConfig) -> int:
    if config.z is None:
        raise ValueError("detect requires --z")
    Z = read_matrix_csv(config.z)
    scores = score_columns(Z)
    result = flag_corrupted(scores, _parse_strategy(config.strategy))
    payload = {
        "schema_version": SCHEMA_VERSION,
        "strategy": config.strategy,
        "scores": [float(s) for s in result.scores],
        "flagged": sorted(result.flagged),
        "threshold": result.threshold_used,
    }
    if config.truth is not None:
        with open(config.truth) as fh:
            raw = json.load(fh)
        truth = CorruptionGroundTruth(
            corrupted_indices=frozenset(raw["corrupted_indices"]),
            corruption_magnitude=raw["corruption_magnitude"],
            seed=raw["seed"],
            orthogonal_complement=raw.get("orthogonal_complement", True),
        )
        precision, recall = detection_metrics(result, truth)
        payload["precision"] = precision
        payload["recall"] = recall
    _write_json(config.out / "detection.json", payload)
    return 0


def _cmd_bench(config: RunConfig) -> int:
    gen = _gen_spec(config)
    spec, _, _ = generate_instance(gen)
    spec = replace(spec, lam=config.lam)

    results = {}
    for name, solver, opts in (
        ("ladmap", solve_ladmap, SolverOptions()),
        ("irls", solve_irls, SolverOptions.irls_defaults()),
    ):
        start = time.perf_counter()
        report = solver(spec, opts)
        wall = time.perf_counter() - start
        results[name] = {
            "objective": _unconstrained_objective(spec.X, spec.D, report.Z, config.lam),
            "iterations": report.iterations,
            "converged": report.converged,
            "wall_time_s": wall,
        }
    obj_a = results["ladmap"]["objective"]
    obj_b = results["irls"]["objective"]
    gap = abs(obj_a - obj_b) / max(abs(obj_a), abs(obj_b), np.finfo(float).tiny)
    _write_json(
        config.out / "bench.json",
        {
            "schema_version": SCHEMA_VERSION,
            "lambda": config.lam,
            "seed": config.seed,
            "gen": asdict(gen),
            "ladmap": results["ladmap"],
            "irls": results["irls"],
            "relative_objective_gap": gap,
        },
    )
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "solve": _cmd_solve,
    "detect": _cmd_detect,
    "bench": _cmd_bench,
}


def run_command(config: RunConfig) -> int:
    """Execute one command; on failure print a JSON error object to stderr.

    Exit status 0 on success, 2 when a solver iterate went non-finite (the
    partial report is preserved), 1 for any other error.
    """
    try:
        config.out = Path(config.out)
        config.out.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[config.command](config)
    except NonFiniteIterateError as exc:
        _print_error(exc)
        return 2
    except (RobustRepError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        _print_error(exc)
        return 1


def _print_error(exc: Exception) -> None:
    print(
        json.dumps({"error": {"type": type(exc).__name__, "message": str(exc)}}),
        file=sys.stderr,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="robustrep",
        description="Robust dictionary-based data representation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_shared(p):
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument("--seed", type=int, default=0)

    def add_gen_flags(p, m, k, n):
        p.add_argument("--m", type=int, default=m)
        p.add_argument("--k", type=int, default=k)
        p.add_argument("--n", type=int, default=n)
        p.add_argument("--corruption-fraction", type=float, default=0.1, dest="corruption_fraction")
        p.add_argument(
            "--corruption-magnitude", type=float, default=10.0, dest="corruption_magnitude"
        )
        p.add_argument("--noise-sigma", type=float, default=0.01, dest="noise_sigma")
        p.add_argument("--coeff-sparsity", type=float, default=0.2, dest="coeff_sparsity")

    gen = sub.add_parser("generate", help="write a synthetic instance with ground truth")
    add_shared(gen)
    add_gen_flags(gen, m=40, k=20, n=100)

    solve = sub.add_parser("solve", help="solve an instance from X.csv and D.csv")
    add_shared(solve)
    solve.add_argument("--x", type=Path, required=True, help="data matrix CSV")
    solve.add_argument("--d", type=Path, required=True, help="dictionary matrix CSV")
    solve.add_argument(
        "--solver", choices=sorted(_SOLVER_FUNCS), default="ladmap", help="solver to run"
    )
    solve.add_argument("--lambda", type=float, default=1.0, dest="lam")
    solve.add_argument("--beta", type=float, default=0.0)
    solve.add_argument("--rho", type=float, default=None)
    solve.add_argument("--mu0", type=float, default=None)
    solve.add_argument("--mu-max", type=float, default=None, dest="mu_max")
    solve.add_argument("--eps", type=float, default=None)
    solve.add_argument("--max-iter", type=int, default=None, dest="max_iter")

    detect = sub.add_parser("detect", help="flag corrupted columns from a solution Z.csv")
    add_shared(detect)
    detect.add_argument("--z", type=Path, required=True, help="coefficient matrix CSV")
    detect.add_argument("--truth", type=Path, default=None, help="optional truth.json")
    detect.add_argument(
        "--strategy", default="gap", help="gap | median:<fraction> | abs:<tau>"
    )

    bench = sub.add_parser("bench", help="cross-check ladmap and irls on one generated instance")
    add_shared(bench)
    add_gen_flags(bench, m=20, k=30, n=50)
    bench.add_argument("--lambda", type=float, default=1.0, dest="lam")

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run_command(RunConfig(**vars(args)))


if __name__ == "__main__":
    sys.exit(main())
