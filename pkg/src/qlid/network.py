"""Quantum-like Bayesian networks and exact inference.

Conditional tables hold amplitudes instead of probabilities.  Inference
enumerates the joint configurations of the unobserved variables, and each
configuration becomes one path.  Squaring the summed path amplitudes gives
a classical part (the squared path magnitudes) plus an interference part
(the pairwise cosine cross terms).  The scores are then renormalised.

Interference phases are attached to the unobserved configurations when a
query is made.  They are not stored in the tables.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Iterator, Mapping, Sequence, Union

import numpy as np

from .amplitude import ONE, Amplitude, from_probability, multiply

NORMALIZATION_TOL = 1e-9
CLAMP_TOL = 1e-12
ORACLE_MAX_BITS = 20.0


class DegenerateQueryError(ValueError):
    """Every outcome of the query scored zero, so no normalisation exists."""


@dataclass(frozen=True)
class Variable:
    name: str
    outcomes: tuple[str, ...]

    def __post_init__(self) -> None:
        outcomes = tuple(str(o) for o in self.outcomes)
        if not self.name:
            raise ValueError("variable name must be non-empty")
        if len(outcomes) < 2:
            raise ValueError(f"variable {self.name!r} needs at least two outcomes")
        if len(set(outcomes)) != len(outcomes):
            raise ValueError(f"variable {self.name!r} has duplicate outcome labels")
        object.__setattr__(self, "outcomes", outcomes)

    @property
    def arity(self) -> int:
        return len(self.outcomes)

    def index(self, outcome: str) -> int:
        try:
            return self.outcomes.index(outcome)
        except ValueError:
            raise ValueError(f"{outcome!r} is not an outcome of {self.name!r}") from None


@dataclass(frozen=True)
class AmplitudeCPT:
    """psi(variable | parents), one amplitude column per parent assignment.

    Keys of ``table`` are tuples of parent outcome labels in ``parents`` order;
    a root variable uses the empty tuple.
    """

    variable: Variable
    parents: tuple[Variable, ...]
    table: Mapping[tuple[str, ...], tuple[Amplitude, ...]]

    def __post_init__(self) -> None:
        parents = tuple(self.parents)
        object.__setattr__(self, "parents", parents)
        expected = set(itertools.product(*(p.outcomes for p in parents)))
        table = {tuple(k): tuple(v) for k, v in self.table.items()}
        if set(table) != expected:
            missing = sorted(expected - set(table))
            extra = sorted(set(table) - expected)
            raise ValueError(
                f"table for {self.variable.name!r} must cover every parent assignment "
                f"(missing={missing}, unexpected={extra})"
            )
        for key, column in table.items():
            if len(column) != self.variable.arity:
                raise ValueError(
                    f"column {key} of {self.variable.name!r} has {len(column)} entries, "
                    f"expected {self.variable.arity}"
                )
            total = sum(a.magnitude**2 for a in column)
            if abs(total - 1.0) > NORMALIZATION_TOL:
                raise ValueError(
                    f"column {key} of {self.variable.name!r} has squared magnitudes "
                    f"summing to {total!r}, not 1"
                )
        object.__setattr__(self, "table", table)

    @classmethod
    def from_probabilities(
        cls,
        variable: Variable,
        parents: Sequence[Variable],
        probabilities: Mapping[tuple[str, ...], Sequence[float]],
        phases: Mapping[tuple[str, ...], Sequence[float]] | None = None,
    ) -> AmplitudeCPT:
        """Build a table of magnitudes sqrt(p); phases default to zero."""
        table = {}
        for key, column in probabilities.items():
            col_phases = phases[key] if phases is not None else [0.0] * len(column)
            table[tuple(key)] = tuple(
                from_probability(p, ph) for p, ph in zip(column, col_phases, strict=True)
            )
        return cls(variable, tuple(parents), table)

    def amplitude(self, assignment: Mapping[str, str]) -> Amplitude:
        key = tuple(assignment[p.name] for p in self.parents)
        return self.table[key][self.variable.index(assignment[self.variable.name])]


@dataclass(frozen=True)
class AmplitudeNetwork:
    variables: tuple[Variable, ...]
    cpts: tuple[AmplitudeCPT, ...]
    _by_name: dict[str, Variable] = field(init=False, repr=False, compare=False)
    _cpt_of: dict[str, AmplitudeCPT] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        variables = tuple(self.variables)
        cpts = tuple(self.cpts)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "cpts", cpts)

        by_name: dict[str, Variable] = {}
        for v in variables:
            if v.name in by_name:
                raise ValueError(f"duplicate variable {v.name!r}")
            by_name[v.name] = v
        cpt_of: dict[str, AmplitudeCPT] = {}
        for cpt in cpts:
            name = cpt.variable.name
            if by_name.get(name) != cpt.variable:
                raise ValueError(f"table given for unknown variable {name!r}")
            if name in cpt_of:
                raise ValueError(f"variable {name!r} has more than one table")
            for parent in cpt.parents:
                if by_name.get(parent.name) != parent:
                    raise ValueError(f"{name!r} references unknown parent {parent.name!r}")
            cpt_of[name] = cpt
        missing = [v.name for v in variables if v.name not in cpt_of]
        if missing:
            raise ValueError(f"variables without a table: {missing}")
        try:
            graph = {n: [p.name for p in c.parents] for n, c in cpt_of.items()}
            tuple(TopologicalSorter(graph).static_order())
        except CycleError as exc:
            raise ValueError(f"parent relation has a cycle: {exc.args[1]}") from None
        object.__setattr__(self, "_by_name", by_name)
        object.__setattr__(self, "_cpt_of", cpt_of)

    def variable(self, name: str | Variable) -> Variable:
        key = name.name if isinstance(name, Variable) else name
        try:
            return self._by_name[key]
        except KeyError:
            raise ValueError(f"unknown variable {key!r}") from None

    def cpt(self, name: str | Variable) -> AmplitudeCPT:
        return self._cpt_of[self.variable(name).name]


VarRef = Union[str, Variable]
Evidence = Mapping[VarRef, str]
PhaseAssignment = Union[float, Sequence[float]]


@dataclass(frozen=True)
class InferenceResult:
    query: str
    outcomes: tuple[str, ...]
    classical_part: dict[str, float]
    interference_part: dict[str, float]
    unnormalized: dict[str, float]
    gamma: float
    normalized: dict[str, float]

    def __getitem__(self, outcome: str) -> float:
        return self.normalized[outcome]


@dataclass(frozen=True)
class PathSet:
    """Path magnitudes and intrinsic phases per query outcome.

    ``magnitudes[x]`` and ``phases[x]`` are arrays indexed by unobserved
    configuration, in enumeration order.
    """

    query: Variable
    unobserved: tuple[Variable, ...]
    configurations: tuple[tuple[str, ...], ...]
    magnitudes: dict[str, np.ndarray]
    phases: dict[str, np.ndarray]


def _name(ref: VarRef) -> str:
    return ref.name if isinstance(ref, Variable) else ref


def _normalize_evidence(net: AmplitudeNetwork, evidence: Evidence | None) -> dict[str, str]:
    out: dict[str, str] = {}
    for ref, outcome in (evidence or {}).items():
        var = net.variable(_name(ref))
        if var.name in out:
            raise ValueError(f"variable {var.name!r} appears twice in evidence")
        var.index(outcome)
        out[var.name] = outcome
    return out


def _query_setup(
    net: AmplitudeNetwork, query: VarRef, evidence: Evidence | None
) -> tuple[Variable, dict[str, str], tuple[Variable, ...]]:
    qvar = net.variable(_name(query))
    ev = _normalize_evidence(net, evidence)
    if qvar.name in ev:
        raise ValueError(f"query variable {qvar.name!r} must not be observed")
    unobserved = tuple(v for v in net.variables if v.name != qvar.name and v.name not in ev)
    return qvar, ev, unobserved


def unobserved_configurations(
    net: AmplitudeNetwork, query: VarRef, evidence: Evidence | None = None
) -> tuple[tuple[str, ...], ...]:
    """Unobserved joint configurations in phase-index order.

    The order is lexicographic over the unobserved variables, taken in network
    declaration order, with each variable's outcomes in declared order.
    """
    _, _, unobserved = _query_setup(net, query, evidence)
    return tuple(itertools.product(*(v.outcomes for v in unobserved)))


def joint_amplitude(net: AmplitudeNetwork, full_assignment: Mapping[VarRef, str]) -> Amplitude:
    """psi(X_1, ..., X_N): the product of the selected table entries."""
    assignment = {_name(k): v for k, v in full_assignment.items()}
    missing = [v.name for v in net.variables if v.name not in assignment]
    if missing:
        raise ValueError(f"assignment is missing variables {missing}")
    for name, outcome in assignment.items():
        net.variable(name).index(outcome)
    result = ONE
    for cpt in net.cpts:
        result = multiply(result, cpt.amplitude(assignment))
    return result


def path_set(net: AmplitudeNetwork, query: VarRef, evidence: Evidence | None = None) -> PathSet:
    qvar, ev, unobserved = _query_setup(net, query, evidence)
    configs = tuple(itertools.product(*(v.outcomes for v in unobserved)))
    magnitudes: dict[str, np.ndarray] = {}
    phases: dict[str, np.ndarray] = {}
    for x in qvar.outcomes:
        mags = np.empty(len(configs))
        angs = np.empty(len(configs))
        for i, y in enumerate(configs):
            assignment = dict(ev)
            assignment[qvar.name] = x
            assignment.update(zip((v.name for v in unobserved), y))
            amp = joint_amplitude(net, assignment)
            mags[i] = amp.magnitude
            angs[i] = amp.phase
        magnitudes[x] = mags
        phases[x] = angs
    return PathSet(qvar, unobserved, configs, magnitudes, phases)


def _phase_vector(phases: PhaseAssignment, n_configs: int) -> np.ndarray:
    if np.ndim(phases) == 0:
        if n_configs != 2:
            raise ValueError(
                f"a scalar phase difference needs exactly 2 unobserved configurations, "
                f"this query has {n_configs}"
            )
        vec = np.array([float(phases), 0.0])
    else:
        vec = np.asarray(phases, dtype=float)
        if vec.shape != (n_configs,):
            raise ValueError(f"expected {n_configs} phases, got {vec.size}")
    if not np.all(np.isfinite(vec)):
        raise ValueError("phases must be finite")
    return vec


def _finish(
    qvar: Variable,
    classical: dict[str, float],
    interference: dict[str, float],
) -> InferenceResult:
    unnormalized = {}
    for x in qvar.outcomes:
        score = classical[x] + interference[x]
        if score < 0.0:
            if score < -CLAMP_TOL:
                raise ArithmeticError(f"negative score {score!r} for outcome {x!r}")
            score = 0.0
        unnormalized[x] = score
    total = sum(unnormalized.values())
    if total <= 0.0:
        raise DegenerateQueryError(f"every outcome of {qvar.name!r} has zero score")
    gamma = 1.0 / total
    normalized = {x: gamma * s for x, s in unnormalized.items()}
    return InferenceResult(
        qvar.name, qvar.outcomes, classical, interference, unnormalized, gamma, normalized
    )


def interference_term(magnitudes: np.ndarray, angles: np.ndarray) -> float:
    """2 * sum_{i<j} m_i m_j cos(angle_i - angle_j)."""
    if magnitudes.size < 2:
        return 0.0
    cross = np.outer(magnitudes, magnitudes) * np.cos(angles[:, None] - angles[None, :])
    return float(2.0 * np.triu(cross, k=1).sum())


def infer(
    net: AmplitudeNetwork,
    query: VarRef,
    evidence: Evidence | None,
    phases: PhaseAssignment,
) -> InferenceResult:
    """Quantum-like marginal of ``query`` given ``evidence``.

    ``phases`` holds one phase per unobserved configuration (see
    :func:`unobserved_configurations`).  When there are exactly two
    configurations a scalar is accepted as the difference theta_1 - theta_2.
    Path phases from the tables are added to the supplied phases, so tables
    with all-zero phases leave the supplied phases unchanged.
    """
    paths = path_set(net, query, evidence)
    theta = _phase_vector(phases, len(paths.configurations))
    classical: dict[str, float] = {}
    interference: dict[str, float] = {}
    for x in paths.query.outcomes:
        mags = paths.magnitudes[x]
        classical[x] = float(np.dot(mags, mags))
        interference[x] = interference_term(mags, theta + paths.phases[x])
    return _finish(paths.query, classical, interference)


def infer_classical(net: AmplitudeNetwork, query: VarRef, evidence: Evidence | None = None) -> InferenceResult:
    """Inference with every interference term switched off."""
    paths = path_set(net, query, evidence)
    classical = {x: float(np.dot(m, m)) for x, m in paths.magnitudes.items()}
    return _finish(paths.query, classical, {x: 0.0 for x in classical})


def enumerate_joint_oracle(
    net: AmplitudeNetwork,
    query: VarRef,
    evidence: Evidence | None,
    phases: PhaseAssignment,
) -> InferenceResult:
    """Brute-force reference for :func:`infer`.

    Works in rectangular complex arithmetic over the full joint table and
    never expands the interference sum.  Only used to check ``infer``.
    """
    qname = _name(query)
    bits = sum(math.log2(v.arity) for v in net.variables)
    if bits > ORACLE_MAX_BITS:
        raise ValueError(f"network too large to enumerate ({bits:.1f} binary-equivalent variables)")
    ev = {_name(k): v for k, v in (evidence or {}).items()}
    for k, v in ev.items():
        net.variable(k).index(v)
    if qname in ev:
        raise ValueError(f"query variable {qname!r} must not be observed")
    names = [v.name for v in net.variables]
    unobserved = [v for v in net.variables if v.name != qname and v.name not in ev]
    configs = list(itertools.product(*(v.outcomes for v in unobserved)))
    if np.ndim(phases) == 0:
        theta = [float(phases), 0.0] if len(configs) == 2 else None
        if theta is None:
            raise ValueError("scalar phase needs exactly 2 unobserved configurations")
    else:
        theta = [float(t) for t in phases]
        if len(theta) != len(configs):
            raise ValueError(f"expected {len(configs)} phases, got {len(theta)}")
    config_index = {c: i for i, c in enumerate(configs)}

    qvar = net.variable(qname)
    sums = {x: 0j for x in qvar.outcomes}
    squares = {x: 0.0 for x in qvar.outcomes}
    for full in itertools.product(*(v.outcomes for v in net.variables)):
        assignment = dict(zip(names, full))
        if any(assignment[k] != v for k, v in ev.items()):
            continue
        z = 1 + 0j
        for cpt in net.cpts:
            key = tuple(assignment[p.name] for p in cpt.parents)
            entry = cpt.table[key][cpt.variable.outcomes.index(assignment[cpt.variable.name])]
            z *= cmath.rect(entry.magnitude, entry.phase)
        y = tuple(assignment[v.name] for v in unobserved)
        sums[assignment[qname]] += z * cmath.exp(1j * theta[config_index[y]])
        squares[assignment[qname]] += abs(z) ** 2

    scores = {x: abs(s) ** 2 for x, s in sums.items()}
    total = sum(scores.values())
    if total <= 0.0:
        raise DegenerateQueryError(f"every outcome of {qname!r} has zero score")
    return InferenceResult(
        qname,
        qvar.outcomes,
        classical_part=squares,
        interference_part={x: scores[x] - squares[x] for x in scores},
        unnormalized=scores,
        gamma=1.0 / total,
        normalized={x: s / total for x, s in scores.items()},
    )


def iter_full_assignments(net: AmplitudeNetwork) -> Iterator[dict[str, str]]:
    names = [v.name for v in net.variables]
    for full in itertools.product(*(v.outcomes for v in net.variables)):
        yield dict(zip(names, full))


def classical_marginal(net: AmplitudeNetwork, names: Sequence[VarRef]) -> dict[tuple[str, ...], float]:
    """Classical joint marginal over ``names`` (squared magnitudes, summed)."""
    keys = [_name(n) for n in names]
    for k in keys:
        net.variable(k)
    out: dict[tuple[str, ...], float] = {
        k: 0.0 for k in itertools.product(*(net.variable(n).outcomes for n in keys))
    }
    for assignment in iter_full_assignments(net):
        out[tuple(assignment[k] for k in keys)] += joint_amplitude(net, assignment).magnitude ** 2
    return out
