"""Built-in Prisoner's Dilemma corpus.

Probabilities, phase parameters, payoffs and reference MEU values are
stored exactly as published.  Everything else is computed.
The Li et al. (2002) "Average" row is left out because it has no phase or
payoff data.
"""

from __future__ import annotations

from .records import MEU_KEYS, ExperimentRecord


def _meu(*values: float) -> dict[str, float]:
    # order: cl averse (coop, def), cl seeking (coop, def), ql averse, ql seeking
    return dict(zip(MEU_KEYS, values, strict=True))


def _payoffs(dd: float, dc: float, cd: float, cc: float) -> dict[str, float]:
    return {"dd": dd, "dc": dc, "cd": cd, "cc": cc}


BUILTIN: tuple[ExperimentRecord, ...] = (
    ExperimentRecord(
        "shafir1992", 0.9700, 0.8400, 0.6300, 0.9050, _payoffs(30, 25, 85, 75), 2.8151, True,
        _meu(43.63, 50.25, 6.38, 7.25, -1559.46, -2129.94, 116.66, -160.08),
    ),
    ExperimentRecord(
        "li2002_game1", 0.7333, 0.6670, 0.6000, 0.7000, _payoffs(30, 25, 85, 75), 3.0170, True,
        _meu(34.19, 39.35, 15.82, 18.15, -1263.63, -1730.21, -538.62, -735.89),
    ),
    ExperimentRecord(
        "li2002_game2", 0.8000, 0.7667, 0.6300, 0.7833, _payoffs(73, 25, 85, 75), 3.0758, True,
        _meu(38.75, 61.78, 11.25, 17.22, -1422.69, -4787.28, -392.89, -1320.22),
    ),
    ExperimentRecord(
        "li2002_game3", 0.9000, 0.8667, 0.8667, 0.8834, _payoffs(30, 25, 85, 36), 2.8052, False,
        _meu(26.85, 50.33, 3.65, 26.85, -702.24, -2075.58, -94.44, -270.75),
    ),
    ExperimentRecord(
        "li2002_game4", 0.8333, 0.8000, 0.7000, 0.8167, _payoffs(80, 78, 85, 83), 3.2313, True,
        _meu(65.70, 67.33, 14.80, 15.17, -5198.14, -5462.41, -1162.55, -1221.47),
    ),
    ExperimentRecord(
        "li2002_game5", 0.8333, 0.7333, 0.7000, 0.7833, _payoffs(43, 10, 85, 46), 2.8519, True,
        _meu(16.27, 34.50, 5.23, 10.5, -221.05, -1313.94, -61.44, -353.22),
    ),
    ExperimentRecord(
        "li2002_game6", 0.7667, 0.8333, 0.8000, 0.8000, _payoffs(30, 10, 60, 33), 1.5708, False,
        _meu(17.58, 36.50, 3.92, 8.50, 28.83, 36.49, 3.91, 8.50),
    ),
    ExperimentRecord(
        "li2002_game7", 0.8667, 0.7333, 0.7667, 0.8000, _payoffs(30, 10, 60, 33), 3.7812, False,
        _meu(16.43, 35.00, 5.07, 10.00, -184.75, -1116.33, -44.86, -262.30),
    ),
)

BY_NAME = {r.name: r for r in BUILTIN}

# published cells checked by absolute value only (sign disagrees with the formula)
MAGNITUDE_ONLY = {("shafir1992", "ql_risk_seeking_cooperate")}
# published cells with no stated derivation; reported but never compared
EXCLUDED = {
    ("li2002_game6", "ql_risk_averse_cooperate"),
    ("li2002_game6", "ql_risk_seeking_cooperate"),
}


def get(name: str) -> ExperimentRecord:
    try:
        return BY_NAME[name]
    except KeyError:
        raise KeyError(f"no built-in experiment {name!r}; known: {', '.join(BY_NAME)}") from None
