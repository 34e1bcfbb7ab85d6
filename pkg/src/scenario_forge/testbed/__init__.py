"""Desk-scale testbed: kinematic simulator, failure oracles, mutation fuzzing."""

from .fuzz import FuzzStats, NoValidSeeds, concretize, fuzz
from .mutate import MUTATION_KINDS, MutationInapplicable, mutate
from .sim import (
    DEFAULT_DT,
    DEFAULT_DURATION,
    AgentView,
    BugReport,
    InvalidScenario,
    Trace,
    TraceStep,
    load_minisim,
    naive_agent,
    no_op_agent,
    run,
)

__all__ = [
    "FuzzStats",
    "NoValidSeeds",
    "concretize",
    "fuzz",
    "MUTATION_KINDS",
    "MutationInapplicable",
    "mutate",
    "DEFAULT_DT",
    "DEFAULT_DURATION",
    "AgentView",
    "BugReport",
    "InvalidScenario",
    "Trace",
    "TraceStep",
    "load_minisim",
    "naive_agent",
    "no_op_agent",
    "run",
]
