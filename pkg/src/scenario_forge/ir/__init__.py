"""Scenario IR: domain types, validation, serialization, tree encoding."""

from .model import (
    ACTOR_KINDS,
    BEHAVIOR_KINDS,
    DEFAULTED,
    PROVENANCE_KINDS,
    REFERENCE_POINTS,
    RELATIVE_POSITIONS,
    ROAD_TYPES,
    SPECIFIED,
    TIME_KINDS,
    TRAFFIC_LIGHT_STATES,
    TRAFFIC_SIGN_KINDS,
    UNSET,
    UNSPECIFIED,
    VEHICLE_KINDS,
    WEATHER_KINDS,
    Environment,
    EgoActor,
    NpcActor,
    Position,
    RoadNetwork,
    Scenario,
    Tri,
    defaulted,
    empty_scenario,
    npc_sort_key,
    specified,
)
from .paths import InvalidPath, apply_updates, clear_fields, field_paths, get_field, set_field
from .serialize import (
    SCENARIO_FILE_SUFFIX,
    DslSyntaxError,
    ScenarioFormatError,
    StructureError,
    VocabularyError,
    emit_dsl,
    load_scenario,
    parse_dsl,
    save_scenario,
)
from .tree import LabeledTree, canonical_tree
from .validate import ValidationReport, Violation, validate

__all__ = [
    "ACTOR_KINDS",
    "BEHAVIOR_KINDS",
    "DEFAULTED",
    "PROVENANCE_KINDS",
    "REFERENCE_POINTS",
    "RELATIVE_POSITIONS",
    "ROAD_TYPES",
    "SPECIFIED",
    "TIME_KINDS",
    "TRAFFIC_LIGHT_STATES",
    "TRAFFIC_SIGN_KINDS",
    "UNSET",
    "UNSPECIFIED",
    "VEHICLE_KINDS",
    "WEATHER_KINDS",
    "Environment",
    "EgoActor",
    "NpcActor",
    "Position",
    "RoadNetwork",
    "Scenario",
    "Tri",
    "defaulted",
    "empty_scenario",
    "npc_sort_key",
    "specified",
    "InvalidPath",
    "apply_updates",
    "clear_fields",
    "field_paths",
    "get_field",
    "set_field",
    "SCENARIO_FILE_SUFFIX",
    "DslSyntaxError",
    "ScenarioFormatError",
    "StructureError",
    "VocabularyError",
    "emit_dsl",
    "load_scenario",
    "parse_dsl",
    "save_scenario",
    "LabeledTree",
    "canonical_tree",
    "ValidationReport",
    "Violation",
    "validate",
]
