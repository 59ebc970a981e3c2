"""Influence diagrams on top of a quantum-like Bayesian network.

One decision node, one utility node.  The utility depends on the outcome of
a chance parent (X_1) and the action.  The decision is conditioned on a
context variable (X_2).  The classical factor is

    mu(z, a) = sum_x1 Pr(x1, z) U(x1, a)

The quantum factor extends it with the interference entry of the binary
chance parent, weighted by the product of that parent's two utilities:

    mu(z, a) = <q|u>,  q = [p_t, p_f, Interf],  u = [U_t, U_f, U_t * U_f]
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from .network import AmplitudeNetwork, Variable, classical_marginal


class Mode(str, Enum):
    CLASSICAL = "classical"
    QUANTUM = "quantum"


@dataclass(frozen=True)
class UtilityTable:
    """U(chance-parent outcome, action) -> payoff."""

    values: Mapping[tuple[str, str], float]

    def __post_init__(self) -> None:
        values = {tuple(k): float(v) for k, v in self.values.items()}
        for key, v in values.items():
            if not math.isfinite(v):
                raise ValueError(f"utility for {key} is not finite")
        object.__setattr__(self, "values", values)

    def __call__(self, state: str, action: str) -> float:
        return self.values[(state, action)]

    def check_covers(self, states: Sequence[str], actions: Sequence[str]) -> None:
        expected = {(s, a) for s in states for a in actions}
        if set(self.values) != expected:
            missing = sorted(expected - set(self.values))
            extra = sorted(set(self.values) - expected)
            raise ValueError(f"utility table mismatch (missing={missing}, unexpected={extra})")


@dataclass(frozen=True)
class DecisionProblem:
    network: AmplitudeNetwork
    actions: tuple[str, ...]
    utility: UtilityTable
    chance_parent: str
    context_variable: str

    def __post_init__(self) -> None:
        actions = tuple(self.actions)
        if len(actions) < 2 or len(set(actions)) != len(actions):
            raise ValueError("a decision needs at least two distinct actions")
        object.__setattr__(self, "actions", actions)
        parent = self.network.variable(self.chance_parent)
        context = self.network.variable(self.context_variable)
        if parent.name == context.name:
            raise ValueError("chance parent and context variable must differ")
        self.utility.check_covers(parent.outcomes, actions)

    @property
    def parent(self) -> Variable:
        return self.network.variable(self.chance_parent)

    @property
    def context(self) -> Variable:
        return self.network.variable(self.context_variable)


@dataclass(frozen=True)
class QuantumMeuFactor:
    q_vector: tuple[float, ...]
    u_vector: tuple[float, ...]
    value: float

    @property
    def interference(self) -> float:
        return self.q_vector[-1]


@dataclass(frozen=True)
class MeuResult:
    mode: Mode
    expected_utility: dict[tuple[str, str], float]
    chosen: dict[str, str]
    actions: tuple[str, ...]
    theta: float | None = None
    factors: dict[tuple[str, str], QuantumMeuFactor] = field(default_factory=dict)

    def __getitem__(self, key: tuple[str, str]) -> float:
        return self.expected_utility[key]


def expected_utility(dist: Mapping[str, float], utility: Mapping[str, float]) -> float:
    """sum_i Pr(x_i) U(x_i)."""
    if set(dist) != set(utility):
        raise ValueError(
            f"distribution and utility keys differ: {sorted(dist)} vs {sorted(utility)}"
        )
    for k, p in dist.items():
        if p < 0.0:
            raise ValueError(f"negative probability for {k!r}")
    return math.fsum(dist[k] * utility[k] for k in dist)


def argmax_action(values: Mapping[str, float], actions: Sequence[str]) -> str:
    # strict '>' keeps the earliest declared action on ties
    best = actions[0]
    for a in actions[1:]:
        if values[a] > values[best]:
            best = a
    return best


def _decide(eu: Mapping[tuple[str, str], float], contexts: Sequence[str], actions: Sequence[str]) -> dict[str, str]:
    return {z: argmax_action({a: eu[(z, a)] for a in actions}, actions) for z in contexts}


def _joint_weights(problem: DecisionProblem) -> dict[tuple[str, str], float]:
    return classical_marginal(problem.network, [problem.chance_parent, problem.context_variable])


def classical_meu(problem: DecisionProblem) -> MeuResult:
    weights = _joint_weights(problem)
    parent, context = problem.parent, problem.context
    eu = {}
    for z in context.outcomes:
        for a in problem.actions:
            eu[(z, a)] = expected_utility(
                {x: weights[(x, z)] for x in parent.outcomes},
                {x: problem.utility(x, a) for x in parent.outcomes},
            )
    return MeuResult(Mode.CLASSICAL, eu, _decide(eu, context.outcomes, problem.actions), problem.actions)


def quantum_factor(p_t: float, p_f: float, u_t: float, u_f: float, theta: float) -> QuantumMeuFactor:
    interf = 2.0 * math.sqrt(p_t * p_f) * math.cos(theta)
    q = (p_t, p_f, interf)
    u = (u_t, u_f, u_t * u_f)
    return QuantumMeuFactor(q, u, math.fsum(qi * ui for qi, ui in zip(q, u)))


def quantum_meu(problem: DecisionProblem, theta: float) -> MeuResult:
    """Expected utilities with the interference entry at phase difference ``theta``.

    The chance parent must be binary; its first outcome plays the role of
    ``t`` and its second ``f``.  Path weights are left unnormalised.
    """
    parent, context = problem.parent, problem.context
    if parent.arity != 2:
        raise ValueError(f"chance parent {parent.name!r} must be binary, has {parent.arity} outcomes")
    if not math.isfinite(theta):
        raise ValueError("theta must be finite")
    weights = _joint_weights(problem)
    t, f = parent.outcomes
    eu = {}
    factors = {}
    for z in context.outcomes:
        for a in problem.actions:
            factor = quantum_factor(
                weights[(t, z)], weights[(f, z)], problem.utility(t, a), problem.utility(f, a), theta
            )
            factors[(z, a)] = factor
            eu[(z, a)] = factor.value
    return MeuResult(
        Mode.QUANTUM, eu, _decide(eu, context.outcomes, problem.actions), problem.actions, theta, factors
    )


def decision_rule(meu: MeuResult) -> dict[str, str]:
    """delta*: the argmax action per context (first declared action on ties)."""
    contexts = list(dict.fromkeys(z for z, _ in meu.expected_utility))
    return _decide(meu.expected_utility, contexts, meu.actions)
