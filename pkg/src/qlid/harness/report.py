"""End-to-end reproduction of the PD experiments against published values."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from ..calibration import DEFAULT_GRID, NoThetaSolution, ThetaFitResult, fit_theta, mirror_distance
from ..decision import MeuResult, classical_meu, quantum_meu
from ..network import infer, infer_classical
from . import corpus
from .records import ACTIONS, DEFECT_OUTCOME, QUERY, RISK, ExperimentRecord, build_problem
from .specfile import load_spec

TOL_CLASSICAL_P = 5e-4
TOL_QUANTUM_P = 5e-3
TOL_THETA = 2e-3
TOL_CL_MEU = 0.01
TOL_QL_MEU = 0.1


@dataclass(frozen=True)
class Comparison:
    experiment: str
    quantity: str
    paper_value: float | str
    computed: float | str
    delta: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.delta <= self.tolerance


@dataclass(frozen=True)
class ExperimentRun:
    record: ExperimentRecord
    p_classical: float
    p_quantum: float | None
    theta_fit: ThetaFitResult | None
    classical: MeuResult
    quantum: MeuResult | None
    comparisons: tuple[Comparison, ...]


@dataclass(frozen=True)
class RunReport:
    runs: tuple[ExperimentRun, ...]

    @property
    def comparisons(self) -> list[Comparison]:
        return [c for run in self.runs for c in run.comparisons]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.comparisons)

    def failures(self) -> list[Comparison]:
        return [c for c in self.comparisons if not c.passed]


def expected_decisions(record: ExperimentRecord) -> tuple[str, str]:
    """(classical, quantum) delta* expected in every context."""
    if record.stp_violation:
        return "defect", "cooperate"
    if record.name == "li2002_game6":
        return "defect", "defect"
    return "defect", ""


def _num(experiment: str, quantity: str, published: float, computed: float, tol: float) -> Comparison:
    return Comparison(experiment, quantity, published, computed, abs(computed - published), tol)


def _choice(experiment: str, quantity: str, published: str, computed: str) -> Comparison:
    return Comparison(experiment, quantity, published, computed, 0.0 if published == computed else 1.0, 0.0)


def run_experiment(record: ExperimentRecord, grid: int = DEFAULT_GRID) -> ExperimentRun:
    problem = build_problem(record)
    net = problem.network
    name = record.name
    rows: list[Comparison] = []

    p_cl = infer_classical(net, QUERY).normalized[DEFECT_OUTCOME]
    rows.append(_num(name, "p_defect_classical", record.p_classical, p_cl, TOL_CLASSICAL_P))

    classical = classical_meu(problem)
    quantum = None
    p_q = None
    fit = None
    if record.theta_reported is not None:
        theta = record.theta_reported
        p_q = infer(net, QUERY, None, theta).normalized[DEFECT_OUTCOME]
        rows.append(_num(name, "p_defect_quantum", record.p_unknown_observed, p_q, TOL_QUANTUM_P))
        quantum = quantum_meu(problem, theta)

    try:
        fit = fit_theta(net, QUERY, None, record.p_unknown_observed, DEFECT_OUTCOME, grid=grid)
    except NoThetaSolution:
        fit = None
    if record.theta_reported is not None:
        if fit is None:
            rows.append(Comparison(name, "theta_fit", record.theta_reported, "none", math.inf, TOL_THETA))
        else:
            best = fit.closest(record.theta_reported)
            rows.append(
                Comparison(
                    name, "theta_fit", record.theta_reported, best,
                    mirror_distance(best, record.theta_reported), TOL_THETA,
                )
            )

    for mode, result, tol in (("cl", classical, TOL_CL_MEU), ("ql", quantum, TOL_QL_MEU)):
        if result is None:
            continue
        for z in RISK.outcomes:
            for a in ACTIONS:
                key = f"{mode}_{z}_{a}"
                if key not in record.reference_meu or (name, key) in corpus.EXCLUDED:
                    continue
                published = record.reference_meu[key]
                value = result.expected_utility[(z, a)]
                if (name, key) in corpus.MAGNITUDE_ONLY:
                    rows.append(_num(name, f"meu_{key}_abs", abs(published), abs(value), tol))
                else:
                    rows.append(_num(name, f"meu_{key}", published, value, tol))

    want_cl, want_ql = expected_decisions(record)
    for z in RISK.outcomes:
        rows.append(_choice(name, f"decision_cl_{z}", want_cl, classical.chosen[z]))
        if quantum is not None and want_ql:
            rows.append(_choice(name, f"decision_ql_{z}", want_ql, quantum.chosen[z]))

    return ExperimentRun(record, p_cl, p_q, fit, classical, quantum, tuple(rows))


def resolve_dataset(dataset: str | Path) -> list[ExperimentRecord]:
    """'builtin', a built-in experiment name, a spec file, or a directory of ``*.spec`` files."""
    if str(dataset) == "builtin":
        return list(corpus.BUILTIN)
    if str(dataset) in corpus.BY_NAME and not Path(dataset).exists():
        return [corpus.get(str(dataset))]
    path = Path(dataset)
    if path.is_dir():
        files = sorted(path.glob("*.spec"))
        if not files:
            raise FileNotFoundError(f"no *.spec files in {path}")
        return [load_spec(f)[1] for f in files]
    return [load_spec(path)[1]]


def reproduce(
    dataset: str | Path | Sequence[ExperimentRecord] = "builtin",
    grid: int = DEFAULT_GRID,
    jobs: int = 1,
) -> RunReport:
    records: Iterable[ExperimentRecord]
    if isinstance(dataset, (str, Path)):
        records = resolve_dataset(dataset)
    else:
        records = list(dataset)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            runs = list(pool.map(lambda r: run_experiment(r, grid), records))
    else:
        runs = [run_experiment(r, grid) for r in records]
    return RunReport(tuple(runs))


def format_report(report: RunReport) -> str:
    lines = []
    for run in report.runs:
        r = run.record
        lines.append(f"== {r.name} (sure-thing violation: {'yes' if r.stp_violation else 'no'})")
        for c in run.comparisons:
            flag = "ok  " if c.passed else "FAIL"
            published = c.paper_value if isinstance(c.paper_value, str) else f"{c.paper_value:.6g}"
            comp = c.computed if isinstance(c.computed, str) else f"{c.computed:.6g}"
            lines.append(f"  {flag} {c.quantity:<36} published={published:<12} computed={comp:<12} delta={c.delta:.3g}")
    fails = report.failures()
    lines.append(f"{len(report.comparisons) - len(fails)}/{len(report.comparisons)} comparisons within tolerance")
    return "\n".join(lines)
