"""Command-line front end.

Exit codes: 0 on success, 1 for domain errors (validation failures,
infeasible constraints, off-frontier parameters), 2 for I/O and parse errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .decision import (
    DecisionProblem,
    NormalizePolicy,
    solve,
    solve_single,
    validate_constraints,
    validate_pairwise,
)
from .errors import ShapeError, TropiRankError
from .io import (
    ProblemFileError,
    csv_text,
    dump_json,
    fmt,
    load_csv_problem,
    load_problem,
    num,
    vec,
)
from .linsys import spectral_radius, tr_det
from .polyfront import FrontierDescription, sigma_theta
from .tropcore import DEFAULT_TOL, TropScalar

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2
TOL_ENV = "TROPIRANK_TOL"


class UsageError(Exception):
    pass


def _tolerance() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV} must be a number, got {raw!r}") from None
    if not tol > 0:
        raise UsageError(f"{TOL_ENV} must be positive")
    return tol


def _load(args):
    if args.matrix_csv:
        if args.input:
            raise UsageError("give either a problem file or --matrix-csv, not both")
        labels = args.labels.split(",") if args.labels else None
        return load_csv_problem(args.matrix_csv, labels)
    if not args.input:
        raise UsageError("a problem file (or --matrix-csv) is required")
    pf = load_problem(args.input)
    if args.labels:
        pf = type(pf)(pf.A, pf.B, pf.C, tuple(args.labels.split(",")))
    return pf


def _problem(args, tol: float) -> DecisionProblem:
    pf = _load(args)
    return DecisionProblem.build(
        pf.A, pf.B, pf.C, labels=pf.labels, strict=not args.permissive, tol=tol
    )


def _emit(text: str, output: str | None) -> None:
    if output:
        try:
            Path(output).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise ProblemFileError(f"cannot write {output}: {exc.strerror or exc}") from exc
    else:
        sys.stdout.write(text)


def _frontier_doc(front: FrontierDescription, samples: int, log: bool) -> dict:
    doc = {
        "kind": front.kind,
        "alpha_min": num(front.alpha_min, log),
        "alpha_max": num(front.alpha_max, log),
        "beta_at_alpha_min": num(front.beta_at_alpha_min, log),
        "beta_at_alpha_max": num(front.beta_at_alpha_max, log),
        "lambda_sigma": num(front.lambda_sigma, log),
        "mu_theta": num(front.mu_theta, log),
        "pieces": [
            {
                "alpha_lo": num(p.alpha_lo, log),
                "alpha_hi": num(p.alpha_hi, log),
                "m": p.m,
                "l": p.l,
                "coeff": num(p.coeff, log),
                "exponent": str(p.exponent),
                "scale": num(TropScalar(p.coeff.logval / p.l), log),
            }
            for p in front.pieces
        ],
    }
    if samples:
        doc["samples"] = [
            {"alpha": num(a, log), "beta": num(b, log)} for a, b in front.sample(samples)
        ]
    return doc


def _diagnostics(problem: DecisionProblem, log: bool) -> dict:
    A, B, C = problem.A, problem.B, problem.C
    return {
        "lambda": num(spectral_radius(A), log),
        "mu": num(spectral_radius(B), log),
        "sigma": num(sigma_theta(A, C), log),
        "theta": num(sigma_theta(B, C), log),
        "trC": num(tr_det(C), log),
        "validation": [v.describe() for v in problem.repaired],
    }


def _rating_doc(sol, labels, log: bool) -> dict:
    return {
        "alpha": num(sol.chosen_alpha, log),
        "beta": num(sol.chosen_beta, log),
        "generators": [vec(g, log) for g in sol.generators],
        "ratings": dict(zip(labels, vec(sol.ratings, log))),
    }


def cmd_validate(args, tol: float) -> int:
    pf = _load(args)
    violations = validate_pairwise(pf.A, args.tol_rel, "A") + validate_pairwise(pf.B, args.tol_rel, "B")
    if pf.C is not None:
        violations += validate_constraints(pf.C, tol)
    report = {
        "valid": not violations,
        "order": pf.A.rows,
        "violations": [
            {
                "matrix": v.matrix,
                "kind": v.kind,
                "i": v.i + 1,
                "j": v.j + 1,
                "value": fmt(v.value),
                "cycle": [k + 1 for k in v.cycle],
                "message": v.describe(),
            }
            for v in violations
        ],
    }
    _emit(dump_json(report), args.output)
    return EXIT_OK if not violations else EXIT_DOMAIN


def cmd_solve(args, tol: float) -> int:
    problem = _problem(args, tol)
    front, factory = solve(problem, tol=tol)
    alpha = None
    if args.alpha is not None:
        alpha = TropScalar.of(args.alpha)
    sol = factory(alpha, args.normalize)
    log = args.log
    doc = {
        "frontier": _frontier_doc(front, args.samples, log),
        "chosen": {
            "alpha": num(sol.chosen_alpha, log),
            "beta": num(sol.chosen_beta, log),
            "alpha_defaulted": sol.alpha_defaulted and not front.is_point,
        },
        "normalization": sol.policy.value,
        "ratings": dict(zip(problem.labels, vec(sol.ratings, log))),
        "generators": [vec(g, log) for g in sol.generators],
        "labels": list(problem.labels),
        "diagnostics": _diagnostics(problem, log),
    }
    if not front.is_point:
        doc["endpoints"] = [
            _rating_doc(factory(a, args.normalize), problem.labels, log)
            for a in (front.alpha_min, front.alpha_max)
        ]
    if args.format == "csv":
        rows = [[label, value] for label, value in doc["ratings"].items()]
        _emit(csv_text(["label", "rating"], rows), args.output)
    else:
        _emit(dump_json(doc), args.output)
    return EXIT_OK


def cmd_frontier(args, tol: float) -> int:
    problem = _problem(args, tol)
    front, _ = solve(problem, tol=tol)
    if args.format == "csv":
        count = args.samples or (1 if front.is_point else 2)
        rows = [[num(a, args.log), num(b, args.log)] for a, b in front.sample(count)]
        _emit(csv_text(["alpha", "beta"], rows), args.output)
    else:
        _emit(dump_json(_frontier_doc(front, args.samples, args.log)), args.output)
    return EXIT_OK


def cmd_single(args, tol: float) -> int:
    problem = _problem(args, tol)
    M = problem.A if args.criterion == "A" else problem.B
    delta, gens = solve_single(M, problem.C, tol=tol)
    doc = {
        "criterion": args.criterion,
        "delta": num(delta, args.log),
        "log_error": num(delta, True),
        "generators": [vec(g, args.log) for g in gens],
        "labels": list(problem.labels),
    }
    _emit(dump_json(doc), args.output)
    return EXIT_OK


def cmd_oracle(args, tol: float) -> int:
    from . import oracle

    problem = _problem(args, tol)
    A, B, C = problem.A, problem.B, problem.C
    n = problem.n
    r = {
        f"{k},{l},{m}": num(oracle.enum_rklm(A, B, C, k, l, m))
        for k in range(1, n)
        for l in range(1, k + 1)
        for m in range(1, n - k + 1)
    }
    doc = {
        "sigma": num(oracle.enum_sigma_theta(A, C)),
        "theta": num(oracle.enum_sigma_theta(B, C)),
        "karp_lambda": num(oracle.karp_radius(A)),
        "karp_mu": num(oracle.karp_radius(B)),
        "r_klm": r,
        "trace_binomial_AB": oracle.check_trace_binomial(A, B, tol),
    }
    if args.grid:
        grid = oracle.GridSpec(points_per_axis=args.points)
        doc["grid_pareto"] = [[num(a), num(b)] for a, b in oracle.grid_pareto(problem, grid, tol)]
    _emit(dump_json(doc), args.output)
    return EXIT_OK


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", nargs="?", help="problem JSON file")
    p.add_argument("--matrix-csv", nargs="+", metavar="CSV", help="read A, B and optional C from CSV files")
    p.add_argument("--labels", help="comma-separated alternative names (overrides the file)")
    p.add_argument("--output", "-o", help="write the result here instead of stdout")


def _add_solver_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--permissive", action="store_true", help="symmetrize slightly non-reciprocal input instead of refusing it")
    p.add_argument("--log", action="store_true", help="emit natural logs instead of ratio-scale values")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tropirank",
        description="Pareto-optimal ratings from two pairwise-comparison matrices under rating constraints.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="{validate,solve,frontier,single}")
    sub.required = True

    p = sub.add_parser("validate", help="check reciprocity and constraint feasibility")
    _add_input(p)
    p.add_argument("--tol-rel", type=float, default=1e-6, help="relative reciprocity tolerance")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="frontier plus Pareto-optimal ratings")
    _add_input(p)
    _add_solver_opts(p)
    p.add_argument("--alpha", help="first-criterion error level on the frontier (number or p/q)")
    p.add_argument("--normalize", choices=[x.value for x in NormalizePolicy], default="max")
    p.add_argument("--samples", type=int, default=0, help="add N log-spaced frontier samples")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("frontier", help="Pareto frontier only")
    _add_input(p)
    _add_solver_opts(p)
    p.add_argument("--samples", type=int, default=0)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_frontier)

    p = sub.add_parser("single", help="single-criterion problem under the constraints")
    _add_input(p)
    _add_solver_opts(p)
    p.add_argument("--criterion", choices=["A", "B"], default="A")
    p.set_defaults(func=cmd_single)

    # no help= so the command stays out of the listing
    p = sub.add_parser("oracle")
    _add_input(p)
    _add_solver_opts(p)
    p.add_argument("--grid", action="store_true", help="also run the grid Pareto search")
    p.add_argument("--points", type=int, default=61)
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_IO if exc.code else EXIT_OK
    if getattr(args, "samples", 0) and args.samples < 0:
        print("tropirank: --samples must be non-negative", file=sys.stderr)
        return EXIT_IO
    try:
        tol = _tolerance()
        return args.func(args, tol)
    except (ProblemFileError, UsageError, ShapeError) as exc:
        print(f"tropirank: {exc}", file=sys.stderr)
        return EXIT_IO
    except TropiRankError as exc:
        print(f"tropirank: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        # malformed --alpha literals and similar argument problems
        print(f"tropirank: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
