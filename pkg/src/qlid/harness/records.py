"""Prisoner's Dilemma experiment records and the two-node decision problem."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from ..amplitude import from_probability
from ..decision import DecisionProblem, UtilityTable
from ..network import AmplitudeCPT, AmplitudeNetwork, Variable

PRIOR = 0.5
CLASSICAL_TOL = 5e-4

# X1: the opponent-side strategy the utility depends on; X2: risk attitude
STRATEGY = Variable("X1", ("defect", "cooperate"))
RISK = Variable("X2", ("risk_averse", "risk_seeking"))
ACTIONS = ("cooperate", "defect")
PAYOFF_KEYS = ("dd", "dc", "cd", "cc")
# payoff key -> (X1 outcome, action)
PAYOFF_CELLS = {
    "dd": ("defect", "defect"),
    "dc": ("defect", "cooperate"),
    "cd": ("cooperate", "defect"),
    "cc": ("cooperate", "cooperate"),
}
# reference MEU cells, keyed "<mode>_<context>_<action>"
MEU_KEYS = tuple(
    f"{mode}_{z}_{a}" for mode in ("cl", "ql") for z in RISK.outcomes for a in ACTIONS
)


class RecordError(ValueError):
    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


@dataclass(frozen=True)
class ExperimentRecord:
    name: str
    p_known_defect: float
    p_known_cooperate: float
    p_unknown_observed: float
    p_classical: float
    payoffs: Mapping[str, float]
    theta_reported: float | None = None
    stp_violation: bool = True
    reference_meu: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.name or not self.name.replace("-", "_").replace(".", "_").isidentifier():
            raise RecordError("name", f"not a valid identifier: {self.name!r}")
        for fname in ("p_known_defect", "p_known_cooperate", "p_unknown_observed", "p_classical"):
            value = getattr(self, fname)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                raise RecordError(fname, f"not a finite number: {value!r}")
            if not 0.0 <= value <= 1.0:
                raise RecordError(fname, f"probability out of range: {value!r}")
        expected = 0.5 * (self.p_known_defect + self.p_known_cooperate)
        if abs(self.p_classical - expected) > CLASSICAL_TOL:
            raise RecordError(
                "p_classical",
                f"{self.p_classical!r} differs from the neutral-prior value {expected:.6g} "
                f"by more than {CLASSICAL_TOL}",
            )
        if set(self.payoffs) != set(PAYOFF_KEYS):
            raise RecordError("payoffs", f"need exactly the keys {PAYOFF_KEYS}, got {sorted(self.payoffs)}")
        for k, v in self.payoffs.items():
            if not math.isfinite(v):
                raise RecordError(f"payoffs.{k}", f"not finite: {v!r}")
        if self.theta_reported is not None and not math.isfinite(self.theta_reported):
            raise RecordError("theta", f"not finite: {self.theta_reported!r}")
        unknown = set(self.reference_meu) - set(MEU_KEYS)
        if unknown:
            raise RecordError("reference", f"unknown keys {sorted(unknown)}")
        object.__setattr__(self, "payoffs", {k: float(self.payoffs[k]) for k in PAYOFF_KEYS})
        object.__setattr__(self, "reference_meu", dict(self.reference_meu))


def build_network(p_known_defect: float, p_known_cooperate: float) -> AmplitudeNetwork:
    """Two binary nodes, X1 -> X2, neutral prior on X1, zero table phases."""
    prior = AmplitudeCPT(STRATEGY, (), {(): (from_probability(PRIOR), from_probability(1.0 - PRIOR))})
    risk = AmplitudeCPT(
        RISK,
        (STRATEGY,),
        {
            ("defect",): (from_probability(p_known_defect), from_probability(1.0 - p_known_defect)),
            ("cooperate",): (from_probability(p_known_cooperate), from_probability(1.0 - p_known_cooperate)),
        },
    )
    return AmplitudeNetwork((STRATEGY, RISK), (prior, risk))


def build_problem(record: ExperimentRecord) -> DecisionProblem:
    utility = UtilityTable({PAYOFF_CELLS[k]: v for k, v in record.payoffs.items()})
    return DecisionProblem(
        build_network(record.p_known_defect, record.p_known_cooperate),
        ACTIONS,
        utility,
        chance_parent=STRATEGY.name,
        context_variable=RISK.name,
    )


# the defect probability in every PD arm is P(X2 = risk_averse)
QUERY = RISK.name
DEFECT_OUTCOME = "risk_averse"
