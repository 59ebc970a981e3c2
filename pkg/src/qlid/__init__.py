"""Quantum-like Bayesian networks and influence diagrams."""

from .amplitude import Amplitude, born_probability, from_probability, multiply
from .calibration import (
    NoThetaSolution,
    SweepCurve,
    ThetaFitResult,
    fit_theta,
    sweep_expected_utility,
    sweep_probability,
)
from .decision import (
    DecisionProblem,
    MeuResult,
    QuantumMeuFactor,
    UtilityTable,
    classical_meu,
    decision_rule,
    expected_utility,
    quantum_meu,
)
from .network import (
    AmplitudeCPT,
    AmplitudeNetwork,
    DegenerateQueryError,
    InferenceResult,
    Variable,
    enumerate_joint_oracle,
    infer,
    infer_classical,
    joint_amplitude,
    unobserved_configurations,
)

__version__ = "0.1.0"
