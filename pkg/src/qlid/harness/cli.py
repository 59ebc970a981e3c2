"""Command-line entry point: ``qlid <command> ...``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from ..calibration import DEFAULT_GRID, NoThetaSolution, fit_theta, sweep_expected_utility, sweep_probability
from ..decision import classical_meu, quantum_meu
from ..network import DegenerateQueryError, infer, infer_classical
from . import corpus
from .csvio import emit_csv, fmt
from .records import DEFECT_OUTCOME, QUERY, ExperimentRecord, build_problem
from .report import format_report, reproduce
from .specfile import SpecError, load_spec, write_spec

EXIT_OK = 0
EXIT_SPEC = 2
EXIT_DEGENERATE = 3
EXIT_NO_THETA = 4

log = logging.getLogger("qlid")


def resolve_spec(ref: str):
    """A spec path, or the name of a built-in experiment."""
    path = Path(ref)
    if path.exists():
        return load_spec(path)
    if ref in corpus.BY_NAME:
        record = corpus.get(ref)
        return build_problem(record), record
    raise SpecError("no such file or built-in experiment", ref)


def _parse_evidence(items: Sequence[str] | None) -> dict[str, str]:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise SpecError(f"evidence must look like VAR=OUTCOME, got {item!r}", "--evidence")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _theta_or_fail(args: argparse.Namespace, record: ExperimentRecord) -> float:
    if args.theta is not None:
        return args.theta
    if record.theta_reported is not None:
        return record.theta_reported
    raise SpecError("spec has no theta; pass --theta", record.name, field="experiment.theta")


def cmd_infer(args: argparse.Namespace) -> int:
    problem, record = resolve_spec(args.spec)
    evidence = _parse_evidence(args.evidence)
    try:
        if args.classical:
            result = infer_classical(problem.network, args.query, evidence)
        else:
            result = infer(problem.network, args.query, evidence, _theta_or_fail(args, record))
    except ValueError as exc:
        if isinstance(exc, DegenerateQueryError):
            raise
        raise SpecError(str(exc), record.name) from None
    print(f"query {result.query}  gamma={fmt(result.gamma)}")
    print("outcome,classical_part,interference_part,unnormalized,probability")
    for x in result.outcomes:
        print(
            f"{x},{fmt(result.classical_part[x])},{fmt(result.interference_part[x])},"
            f"{fmt(result.unnormalized[x])},{fmt(result.normalized[x])}"
        )
    return EXIT_OK


def cmd_meu(args: argparse.Namespace) -> int:
    problem, record = resolve_spec(args.spec)
    if args.mode == "classical":
        result = classical_meu(problem)
    else:
        result = quantum_meu(problem, _theta_or_fail(args, record))
    header = f"mode={result.mode.value}" + (f" theta={fmt(result.theta)}" if result.theta is not None else "")
    print(header)
    print("context," + ",".join(f"eu_action_{a}" for a in problem.actions) + ",chosen")
    for z in problem.context.outcomes:
        cells = ",".join(fmt(result.expected_utility[(z, a)]) for a in problem.actions)
        print(f"{z},{cells},{result.chosen[z]}")
    return EXIT_OK


def cmd_fit_theta(args: argparse.Namespace) -> int:
    problem, record = resolve_spec(args.spec)
    target = record.p_unknown_observed if args.target is None else args.target
    if not 0.0 <= target <= 1.0:
        raise SpecError(f"target must lie in [0, 1], got {target!r}", "--target")
    fit = fit_theta(problem.network, QUERY, None, target, DEFECT_OUTCOME, grid=args.grid)
    print(f"target={fmt(target)} grid_resolution={fmt(fit.grid_resolution)}")
    print("theta,residual")
    for s, r in zip(fit.solutions, fit.residuals):
        print(f"{s:.10f},{fmt(r)}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    problem, _ = resolve_spec(args.spec)
    if args.steps < 2:
        raise SpecError("--steps must be at least 2", "--steps")
    if args.what == "prob":
        curve = sweep_probability(problem.network, QUERY, None, DEFECT_OUTCOME, args.steps)
        written = emit_csv(curve, args.out)
    else:
        sweep = sweep_expected_utility(problem, args.steps)
        written = emit_csv(sweep, args.out, problem.actions)
    for p in written:
        print(p)
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace) -> int:
    report = reproduce(args.dataset, grid=args.grid, jobs=args.jobs)
    print(format_report(report))
    if args.out:
        emit_csv(report, args.out)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    problem, record = resolve_spec(args.spec)
    print(f"{record.name}: ok ({len(problem.network.variables)} variables, actions {', '.join(problem.actions)})")
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    out = Path(args.out)
    names = list(corpus.BY_NAME) if args.name == "all" else [args.name]
    if len(names) > 1:
        out.mkdir(parents=True, exist_ok=True)
    for name in names:
        record = corpus.get(name)
        target = out / f"{name}.spec" if out.is_dir() else out
        print(write_spec(record, target))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qlid", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("infer", help="query P(X2) in the unknown condition")
    p.add_argument("--spec", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--theta", type=float)
    group.add_argument("--classical", action="store_true")
    p.add_argument("--query", default=QUERY)
    p.add_argument("--evidence", action="append", metavar="VAR=OUTCOME")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("meu", help="expected utilities and the optimal decision rule")
    p.add_argument("--spec", required=True)
    p.add_argument("--mode", choices=("classical", "quantum"), required=True)
    p.add_argument("--theta", type=float)
    p.set_defaults(func=cmd_meu)

    p = sub.add_parser("fit-theta", help="phase differences reproducing a target probability")
    p.add_argument("--spec", required=True)
    p.add_argument("--target", type=float, help="default: the spec's observed p_unknown")
    p.add_argument("--grid", type=int, default=DEFAULT_GRID)
    p.set_defaults(func=cmd_fit_theta)

    p = sub.add_parser("sweep", help="sweep theta over [0, 2pi) and write CSV")
    p.add_argument("--spec", required=True)
    p.add_argument("--what", choices=("prob", "eu"), required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("reproduce", help="recompute the published tables")
    p.add_argument("--dataset", default="builtin")
    p.add_argument("--out")
    p.add_argument("--grid", type=int, default=DEFAULT_GRID)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("validate", help="check a spec file")
    p.add_argument("--spec", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("export", help="write built-in experiments as spec files")
    p.add_argument("--name", default="all", choices=("all", *corpus.BY_NAME))
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SPEC
    except DegenerateQueryError as exc:
        print(f"error: degenerate query: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except NoThetaSolution as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_THETA
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
