"""Phase fitting and theta sweeps.

``fit_theta`` finds every phase difference in [0, 2*pi) at which the
normalised probability of an outcome hits a target.  It scans a dense grid
for sign changes, then bisects each bracket, evaluating with ``infer``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from .amplitude import TWO_PI
from .decision import DecisionProblem, quantum_meu
from .network import (
    AmplitudeNetwork,
    DegenerateQueryError,
    Evidence,
    VarRef,
    infer,
    path_set,
)

DEFAULT_GRID = 1_000_000
RESIDUAL_TOL = 1e-6
BRACKET_TOL = 1e-13
ENDPOINT_TOL = 1e-6


class NoThetaSolution(ValueError):
    def __init__(self, target: float, envelope: tuple[float, float]):
        self.target = target
        self.envelope = envelope
        lo, hi = envelope
        super().__init__(
            f"target probability {target!r} is not attainable; "
            f"attainable range over theta is [{lo:.6g}, {hi:.6g}]"
        )


@dataclass(frozen=True)
class ThetaFitResult:
    solutions: tuple[float, ...]
    residuals: tuple[float, ...]
    grid_resolution: float
    envelope: tuple[float, float]

    @property
    def residual(self) -> float:
        return max(self.residuals, default=0.0)

    def closest(self, theta: float) -> float:
        """Solution nearest to ``theta`` (solution sets are mirror-closed)."""
        return min(self.solutions, key=lambda s: circular_distance(s, theta))


@dataclass(frozen=True)
class SweepCurve:
    thetas: np.ndarray
    values: np.ndarray
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.thetas)


@dataclass(frozen=True)
class EuSweep:
    curves: dict[tuple[str, str], SweepCurve]
    dominance: dict[str, tuple[tuple[float, float], ...]]
    action: str
    rival: str


def circular_distance(a: float, b: float) -> float:
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


def mirror_distance(a: float, b: float) -> float:
    return min(circular_distance(a, b), circular_distance(a, TWO_PI - b))


def theta_grid(steps: int) -> np.ndarray:
    if steps < 2:
        raise ValueError("need at least 2 theta samples")
    return np.arange(steps) * (TWO_PI / steps)


@lru_cache(maxsize=4)
def _cos_grid(steps: int) -> tuple[np.ndarray, np.ndarray]:
    thetas = theta_grid(steps)
    return thetas, np.cos(thetas)


def _probability_on_grid(
    net: AmplitudeNetwork, query: VarRef, evidence: Evidence | None, outcome: str, steps: int
) -> tuple[np.ndarray, np.ndarray]:
    """Normalised probability of ``outcome`` on the theta grid, vectorised.

    Each score has the form a + b*cos(theta + offset) when there are two
    configurations, so the grid never needs a Python-level loop.
    """
    paths = path_set(net, query, evidence)
    if len(paths.configurations) != 2:
        raise ValueError(
            f"phase fitting needs exactly 2 unobserved configurations, got {len(paths.configurations)}"
        )
    paths.query.index(outcome)
    thetas, cos_t = _cos_grid(steps)
    sin_t = None
    scores = {}
    for x in paths.query.outcomes:
        m1, m2 = paths.magnitudes[x]
        offset = paths.phases[x][0] - paths.phases[x][1]
        if offset == 0.0:
            cos_shift = cos_t
        else:
            if sin_t is None:
                sin_t = np.sin(thetas)
            cos_shift = cos_t * math.cos(offset) - sin_t * math.sin(offset)
        scores[x] = np.maximum(m1 * m1 + m2 * m2 + 2.0 * m1 * m2 * cos_shift, 0.0)
    total = sum(scores.values())
    with np.errstate(invalid="ignore", divide="ignore"):
        prob = np.where(total > 0.0, scores[outcome] / total, np.nan)
    return thetas, prob


def bisect(f: Callable[[float], float], lo: float, hi: float, f_lo: float, tol: float = BRACKET_TOL) -> float:
    """Bisection on a bracket with f(lo) and f(hi) of opposite sign."""
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if (f_mid < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def fit_theta(
    net: AmplitudeNetwork,
    query: VarRef,
    evidence: Evidence | None,
    target_probability: float,
    target_outcome: str,
    grid: int = DEFAULT_GRID,
) -> ThetaFitResult:
    """All theta in [0, 2*pi) with P(target_outcome | evidence; theta) == target."""
    if not 0.0 <= target_probability <= 1.0:
        raise ValueError(f"target probability must lie in [0, 1], got {target_probability!r}")
    thetas, prob = _probability_on_grid(net, query, evidence, target_outcome, grid)
    finite = np.isfinite(prob)
    if not finite.any():
        raise DegenerateQueryError("query is degenerate at every theta")
    envelope = (float(np.min(prob[finite])), float(np.max(prob[finite])))

    def residual(theta: float) -> float:
        return infer(net, query, evidence, theta).normalized[target_outcome] - target_probability

    diff = prob - target_probability
    # close the circle: the sample after the last grid point is theta = 2*pi
    ext = np.append(diff, diff[0])
    ext_t = np.append(thetas, TWO_PI)
    roots: list[float] = list(ext_t[:-1][ext[:-1] == 0.0])
    crossing = np.flatnonzero((np.sign(ext[:-1]) * np.sign(ext[1:])) < 0.0)
    for k in crossing:
        lo, hi = float(ext_t[k]), float(ext_t[k + 1])
        roots.append(bisect(residual, lo, hi, float(ext[k])))

    if not roots:
        # tangent touch at an extremum: accept the best grid point if close enough
        k = int(np.nanargmin(np.abs(diff)))
        if abs(diff[k]) <= RESIDUAL_TOL:
            roots.append(float(thetas[k]))
            mirror = (TWO_PI - float(thetas[k])) % TWO_PI
            roots.append(mirror)
        else:
            raise NoThetaSolution(target_probability, envelope)

    resolution = TWO_PI / grid
    solutions: list[float] = []
    for r in sorted(r % TWO_PI for r in roots):
        if solutions and circular_distance(r, solutions[-1]) <= resolution:
            continue
        solutions.append(r)
    if len(solutions) > 1 and circular_distance(solutions[0], solutions[-1]) <= resolution:
        solutions.pop()
    residuals = tuple(abs(residual(s)) for s in solutions)
    return ThetaFitResult(tuple(solutions), residuals, resolution, envelope)


def sweep_probability(
    net: AmplitudeNetwork, query: VarRef, evidence: Evidence | None, outcome: str, steps: int
) -> SweepCurve:
    thetas = theta_grid(steps)
    values = np.empty(steps)
    for i, theta in enumerate(thetas):
        try:
            values[i] = infer(net, query, evidence, float(theta)).normalized[outcome]
        except DegenerateQueryError:
            values[i] = np.nan
    name = query if isinstance(query, str) else query.name
    return SweepCurve(thetas, values, f"P({name}={outcome})", {"query": name, "outcome": outcome})


def probability_envelope(
    net: AmplitudeNetwork, query: VarRef, evidence: Evidence | None, outcome: str, steps: int
) -> tuple[float, float]:
    curve = sweep_probability(net, query, evidence, outcome, steps)
    return float(np.nanmin(curve.values)), float(np.nanmax(curve.values))


def _eu_gap(problem: DecisionProblem, context: str, action: str, rival: str) -> Callable[[float], float]:
    def gap(theta: float) -> float:
        eu = quantum_meu(problem, theta).expected_utility
        return eu[(context, action)] - eu[(context, rival)]

    return gap


def sweep_expected_utility(
    problem: DecisionProblem, steps: int, action: str | None = None, rival: str | None = None
) -> EuSweep:
    """Quantum expected utility curves and where ``action`` beats ``rival``.

    Defaults: ``action`` is the first declared action and ``rival`` the last,
    which for the PD problems means cooperate against defect.
    """
    action = action or problem.actions[0]
    rival = rival or problem.actions[-1]
    if action == rival or {action, rival} - set(problem.actions):
        raise ValueError("action and rival must be two distinct declared actions")
    thetas = theta_grid(steps)
    contexts = problem.context.outcomes
    table = {key: np.empty(steps) for key in ((z, a) for z in contexts for a in problem.actions)}
    for i, theta in enumerate(thetas):
        eu = quantum_meu(problem, float(theta)).expected_utility
        for key in table:
            table[key][i] = eu[key]
    curves = {
        (z, a): SweepCurve(thetas, vals, f"EU[{a} | {z}]", {"context": z, "action": a})
        for (z, a), vals in table.items()
    }

    dominance = {}
    for z in contexts:
        gap_fn = _eu_gap(problem, z, action, rival)
        gap = np.append(table[(z, action)] - table[(z, rival)], 0.0)
        gap[-1] = gap_fn(TWO_PI)
        ext_t = np.append(thetas, TWO_PI)
        intervals: list[tuple[float, float]] = []
        start = 0.0 if gap[0] > 0.0 else None
        for k in range(steps):
            a_pos, b_pos = gap[k] > 0.0, gap[k + 1] > 0.0
            if a_pos == b_pos:
                continue
            edge = bisect(gap_fn, float(ext_t[k]), float(ext_t[k + 1]), float(gap[k]), ENDPOINT_TOL)
            if b_pos:
                start = edge
            else:
                intervals.append((start, edge))
                start = None
        if start is not None:
            intervals.append((start, TWO_PI))
        dominance[z] = tuple(intervals)
    return EuSweep(curves, dominance, action, rival)
