"""Experiment files, the built-in PD corpus, reports and the CLI."""

from .records import ExperimentRecord, build_network, build_problem
from .report import RunReport, reproduce
from .specfile import SpecError, dump_spec, load_spec, parse_spec
