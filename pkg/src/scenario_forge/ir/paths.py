"""Dotted field paths over the scenario IR.

Paths address tri-state fields (``environment.weather``,
``npc_actors[2].lane_idx``) plus the sign list.  ``npc_actors[*]`` expands
over all NPCs.  The same machinery backs field projection, hallucination
injection, and merge-report bookkeeping, so the path vocabulary is defined
once here.

Note: replacing an NPC field re-sorts the actor list into canonical order,
so a batch of updates is applied against the input indices before the new
scenario is constructed.
"""

from __future__ import annotations

import re
from dataclasses import replace

from .model import UNSET, Scenario


class InvalidPath(ValueError):
    """The path does not name an addressable scenario field."""


_ENV_FIELDS = ("weather", "time")
_ROAD_FIELDS = ("road_type", "traffic_signs", "traffic_light", "lane_number")
_ACTOR_FIELDS = ("behavior", "position", "lane_idx", "speed")

_NPC_RE = re.compile(r"^npc_actors\[(\d+|\*)\]\.([a-z_]+)$")


def field_paths(scenario: Scenario) -> list[str]:
    """Every tri-state field path of the scenario, in document order."""
    paths = [f"environment.{f}" for f in _ENV_FIELDS]
    paths += [f"road_network.{f}" for f in _ROAD_FIELDS]
    paths += [f"ego_vehicle.{f}" for f in _ACTOR_FIELDS]
    for i in range(len(scenario.npc_actors)):
        paths += [f"npc_actors[{i}].{f}" for f in _ACTOR_FIELDS]
    return paths


def _expand(scenario: Scenario, path: str) -> list[tuple[str, str, int | None]]:
    """Resolve a path to (section, field, npc_index) triples."""
    if "." not in path:
        raise InvalidPath(f"not a field path: {path!r}")
    head, _, field = path.partition(".")
    sections = {"environment": _ENV_FIELDS, "road_network": _ROAD_FIELDS, "ego_vehicle": _ACTOR_FIELDS}
    if head in sections:
        if field not in sections[head]:
            raise InvalidPath(f"unknown {head} field {field!r}")
        return [(head, field, None)]
    match = _NPC_RE.match(path)
    if match:
        index_text, field = match.groups()
        if field not in _ACTOR_FIELDS:
            raise InvalidPath(f"unknown npc field {field!r} (only tri-state fields can be addressed)")
        if index_text == "*":
            return [("npc_actors", field, i) for i in range(len(scenario.npc_actors))]
        index = int(index_text)
        if index >= len(scenario.npc_actors):
            raise InvalidPath(f"npc index {index} out of range (have {len(scenario.npc_actors)})")
        return [("npc_actors", field, index)]
    raise InvalidPath(f"unknown path {path!r}")


def get_field(scenario: Scenario, path: str):
    """Read the field at a single (non-wildcard) path."""
    triples = _expand(scenario, path)
    if len(triples) != 1:
        raise InvalidPath(f"path {path!r} is not a single field")
    section, field, index = triples[0]
    if section == "environment":
        return getattr(scenario.environment, field)
    if section == "road_network":
        return getattr(scenario.road_network, field)
    if section == "ego_vehicle":
        return getattr(scenario.ego, field)
    return getattr(scenario.npc_actors[index], field)


def apply_updates(scenario: Scenario, updates: list[tuple[str, str, int | None, object]]) -> Scenario:
    """Apply (section, field, npc_index, value) updates in one construction."""
    environment = scenario.environment
    road_network = scenario.road_network
    ego = scenario.ego
    npcs = list(scenario.npc_actors)
    for section, field, index, value in updates:
        if section == "environment":
            environment = replace(environment, **{field: value})
        elif section == "road_network":
            road_network = replace(road_network, **{field: value})
        elif section == "ego_vehicle":
            ego = replace(ego, **{field: value})
        else:
            npcs[index] = replace(npcs[index], **{field: value})
    return Scenario(environment=environment, road_network=road_network, ego=ego, npc_actors=tuple(npcs))


def set_field(scenario: Scenario, path: str, value) -> Scenario:
    """Return a new scenario with the addressed field(s) replaced."""
    updates = [(s, f, i, value) for s, f, i in _expand(scenario, path)]
    return apply_updates(scenario, updates)


def clear_fields(scenario: Scenario, paths) -> Scenario:
    """Set every addressed field back to unspecified (signs: empty list)."""
    updates = []
    for path in paths:
        for section, field, index in _expand(scenario, path):
            value: object = () if field == "traffic_signs" else UNSET
            updates.append((section, field, index, value))
    return apply_updates(scenario, updates)
