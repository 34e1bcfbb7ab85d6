"""Code generation: map search, default filling, placement, script emission."""

from .catalog import Lane, MapCatalog, MapSection, NoSectionFound, default_catalog, find_map_section
from .lower import (
    MPH_TO_MPS,
    SPEED_RANGE_MPH,
    ActorPlacement,
    ConcreteScenario,
    PlacementOverflow,
    fill_defaults,
    place_actors,
)
from .scripts import SCRIPT_SUFFIXES, SCRIPT_TARGETS, emit_script, minisim_dict, stop_line_s

__all__ = [
    "Lane",
    "MapCatalog",
    "MapSection",
    "NoSectionFound",
    "default_catalog",
    "find_map_section",
    "MPH_TO_MPS",
    "SPEED_RANGE_MPH",
    "ActorPlacement",
    "ConcreteScenario",
    "PlacementOverflow",
    "fill_defaults",
    "place_actors",
    "SCRIPT_SUFFIXES",
    "SCRIPT_TARGETS",
    "emit_script",
    "minisim_dict",
    "stop_line_s",
]
