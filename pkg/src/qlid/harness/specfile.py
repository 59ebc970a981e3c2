"""Experiment spec files.

The format is line-oriented ``key = value`` text, grouped into sections::

    # comments start with '#' or ';'
    [experiment]
    name = shafir1992
    stp_violation = true          ; optional, default true
    theta = 2.8151                ; optional, radians

    [network]
    p_known_defect = 0.97         ; P(defect | opponent known to defect)
    p_known_cooperate = 0.84      ; P(defect | opponent known to cooperate)

    [observed]
    p_unknown = 0.63              ; P(defect | opponent unknown), measured
    p_classical = 0.905           ; neutral-prior classical prediction

    [payoffs]                     ; deciding player's points, <X1><action>
    dd = 30
    dc = 25
    cd = 85
    cc = 75

    [reference]                   ; optional published MEU values
    cl_risk_averse_cooperate = 43.63
    ...

Sections and keys are case-sensitive.  Unknown sections or keys are errors.
Floats are written with ``repr`` so files round-trip bit for bit.
"""

from __future__ import annotations

import configparser
import math
import re
from pathlib import Path

from ..decision import DecisionProblem
from .records import MEU_KEYS, PAYOFF_KEYS, ExperimentRecord, RecordError, build_problem

SCHEMA = {
    "experiment": {"name": True, "stp_violation": False, "theta": False},
    "network": {"p_known_defect": True, "p_known_cooperate": True},
    "observed": {"p_unknown": True, "p_classical": True},
    "payoffs": {k: True for k in PAYOFF_KEYS},
    "reference": {k: False for k in MEU_KEYS},
}
OPTIONAL_SECTIONS = {"reference"}

# record field -> (section, key) for diagnostics
FIELD_SOURCE = {
    "name": ("experiment", "name"),
    "theta": ("experiment", "theta"),
    "p_known_defect": ("network", "p_known_defect"),
    "p_known_cooperate": ("network", "p_known_cooperate"),
    "p_unknown_observed": ("observed", "p_unknown"),
    "p_classical": ("observed", "p_classical"),
    "payoffs": ("payoffs", None),
    "reference": ("reference", None),
}


class SpecError(ValueError):
    def __init__(self, message: str, source: str = "<spec>", line: int | None = None, field: str | None = None):
        self.source = source
        self.line = line
        self.field = field
        where = f"{source}:{line}" if line is not None else source
        prefix = f"{where}: [{field}] " if field else f"{where}: "
        super().__init__(prefix + message)


def _locate(text: str, section: str, key: str | None) -> int | None:
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        m = re.match(r"^\[([^\]]+)\]", line)
        if m:
            current = m.group(1).strip()
            if key is None and current == section:
                return lineno
            continue
        if current == section and key is not None:
            if re.match(rf"^{re.escape(key)}\s*[=:]", line):
                return lineno
    return None


def _parser() -> configparser.ConfigParser:
    parser = configparser.ConfigParser(
        inline_comment_prefixes=(";", "#"), interpolation=None, default_section="__none__"
    )
    parser.optionxform = str  # keep keys case-sensitive
    return parser


def parse_spec(text: str, source: str = "<spec>") -> ExperimentRecord:
    parser = _parser()
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        raise SpecError(f"parse error: {exc.message if hasattr(exc, 'message') else exc}", source, line) from None

    def fail(msg: str, section: str, key: str | None) -> SpecError:
        field = f"{section}.{key}" if key else section
        return SpecError(msg, source, _locate(text, section, key), field)

    for section in parser.sections():
        if section not in SCHEMA:
            raise fail(f"unknown section; expected one of {sorted(SCHEMA)}", section, None)
        for key in parser[section]:
            if key not in SCHEMA[section]:
                raise fail("unknown key", section, key)
    for section, keys in SCHEMA.items():
        if section not in parser:
            if section in OPTIONAL_SECTIONS:
                continue
            raise SpecError(f"missing section [{section}]", source, None, section)
        for key, required in keys.items():
            if required and key not in parser[section]:
                raise fail("missing required key", section, key)

    def number(section: str, key: str) -> float:
        raw = parser[section][key]
        try:
            value = float(raw)
        except ValueError:
            raise fail(f"not a number: {raw!r}", section, key) from None
        if not math.isfinite(value):
            raise fail(f"not finite: {raw!r}", section, key)
        return value

    exp = parser["experiment"]
    theta = number("experiment", "theta") if "theta" in exp else None
    stp = True
    if "stp_violation" in exp:
        try:
            stp = exp.getboolean("stp_violation")
        except ValueError:
            raise fail(f"not a boolean: {exp['stp_violation']!r}", "experiment", "stp_violation") from None
    reference = {}
    if "reference" in parser:
        reference = {k: number("reference", k) for k in parser["reference"]}
    try:
        return ExperimentRecord(
            name=exp["name"].strip(),
            p_known_defect=number("network", "p_known_defect"),
            p_known_cooperate=number("network", "p_known_cooperate"),
            p_unknown_observed=number("observed", "p_unknown"),
            p_classical=number("observed", "p_classical"),
            payoffs={k: number("payoffs", k) for k in PAYOFF_KEYS},
            theta_reported=theta,
            stp_violation=stp,
            reference_meu=reference,
        )
    except RecordError as exc:
        head = exc.field.split(".")[0]
        section, key = FIELD_SOURCE.get(head, (None, None))
        if head == "payoffs" and "." in exc.field:
            key = exc.field.split(".", 1)[1]
        msg = str(exc).split(": ", 1)[1]
        if section is None:
            raise SpecError(msg, source, None, exc.field) from None
        raise fail(msg, section, key) from None


def load_spec(path: str | Path) -> tuple[DecisionProblem, ExperimentRecord]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read file: {exc.strerror}", str(path)) from None
    record = parse_spec(text, str(path))
    return build_problem(record), record


def dump_spec(record: ExperimentRecord) -> str:
    lines = ["[experiment]", f"name = {record.name}", f"stp_violation = {str(record.stp_violation).lower()}"]
    if record.theta_reported is not None:
        lines.append(f"theta = {record.theta_reported!r}")
    lines += [
        "",
        "[network]",
        f"p_known_defect = {record.p_known_defect!r}",
        f"p_known_cooperate = {record.p_known_cooperate!r}",
        "",
        "[observed]",
        f"p_unknown = {record.p_unknown_observed!r}",
        f"p_classical = {record.p_classical!r}",
        "",
        "[payoffs]",
    ]
    lines += [f"{k} = {record.payoffs[k]!r}" for k in PAYOFF_KEYS]
    if record.reference_meu:
        lines += ["", "[reference]"]
        lines += [f"{k} = {record.reference_meu[k]!r}" for k in MEU_KEYS if k in record.reference_meu]
    return "\n".join(lines) + "\n"


def write_spec(record: ExperimentRecord, path: str | Path) -> Path:
    path = Path(path)
    try:
        path.write_text(dump_spec(record), encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from None
    return path
