"""Scenario IR domain model.

The IR is a tree of immutable values: an environment, a road network, one
ego vehicle, and an ordered list of NPC actors.  Every optional attribute is
a tri-state :class:`Tri` so that "the input never mentioned this" stays
distinguishable from "a default was filled in later".

All types are frozen; operations elsewhere in the package are pure
functions over them, so values can be shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

WEATHER_KINDS = ("rainy", "foggy", "snowy", "wet", "sunny", "clear", "cloudy")
TIME_KINDS = ("daytime", "nighttime")
ROAD_TYPES = ("intersection", "roundabout", "straight", "highway")
TRAFFIC_SIGN_KINDS = ("stop_sign", "speed_limit_sign")
TRAFFIC_LIGHT_STATES = ("red_light", "green_light", "absent")
BEHAVIOR_KINDS = (
    "go_forward",
    "turn_left",
    "turn_right",
    "change_lane_left",
    "change_lane_right",
    "static",
)
ACTOR_KINDS = ("car", "truck", "bus", "train", "motorcycle", "bicycle", "pedestrian")
VEHICLE_KINDS = ("car", "truck", "bus", "train", "motorcycle", "bicycle")
RELATIVE_POSITIONS = ("front", "behind", "left", "right", "on", "front_left", "front_right")
REFERENCE_POINTS = ("ego_vehicle",) + ROAD_TYPES + TRAFFIC_SIGN_KINDS
PROVENANCE_KINDS = ("text", "visual", "both")

# Sort rank used for the canonical actor order: nearer/ahead-of-ego cells
# come first so the ordered tree (and therefore TED) is stable.
_RELATIVE_POSITION_RANK = {
    "front": 0,
    "front_left": 1,
    "front_right": 2,
    "left": 3,
    "right": 4,
    "on": 5,
    "behind": 6,
}

SPECIFIED = "specified"
UNSPECIFIED = "unspecified"
DEFAULTED = "defaulted"


@dataclass(frozen=True)
class Tri:
    """Tri-state attribute value: specified, unspecified, or default-filled.

    ``seed`` records which generator seed produced a defaulted value.  It is
    provenance metadata, excluded from equality: the serialized form keeps
    only the ``# defaulted`` marker, and round-trip identity is defined on
    (state, value).
    """

    state: str
    value: Any = None
    seed: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.state not in (SPECIFIED, UNSPECIFIED, DEFAULTED):
            raise ValueError(f"unknown tri state {self.state!r}")
        if self.state == UNSPECIFIED and self.value is not None:
            raise ValueError("unspecified value must not carry a payload")

    @property
    def has_value(self) -> bool:
        return self.state != UNSPECIFIED

    def value_or(self, fallback: Any) -> Any:
        return self.value if self.has_value else fallback


def specified(value: Any) -> Tri:
    return Tri(SPECIFIED, value)


def defaulted(value: Any, seed: int) -> Tri:
    return Tri(DEFAULTED, value, seed)


UNSET = Tri(UNSPECIFIED)


@dataclass(frozen=True)
class Position:
    """Coarse position: a reference point plus a relation to it."""

    reference_point: str
    relative_position: str


@dataclass(frozen=True)
class Environment:
    weather: Tri = UNSET
    time: Tri = UNSET


@dataclass(frozen=True)
class RoadNetwork:
    road_type: Tri = UNSET
    traffic_signs: tuple[str, ...] = ()
    traffic_light: Tri = UNSET
    lane_number: Tri = UNSET

    def __post_init__(self) -> None:
        # Canonical sign order keeps serialization and tree encoding stable.
        object.__setattr__(self, "traffic_signs", tuple(sorted(self.traffic_signs)))


@dataclass(frozen=True)
class EgoActor:
    behavior: Tri = UNSET
    position: Tri = UNSET
    lane_idx: Tri = UNSET
    speed: Tri = UNSET


@dataclass(frozen=True)
class NpcActor:
    actor_type: str
    behavior: Tri = UNSET
    position: Tri = UNSET
    lane_idx: Tri = UNSET
    speed: Tri = UNSET
    provenance: str = "text"


def _tri_sort_key(tri: Tri, fallback: Any) -> tuple[int, Any]:
    # Unspecified sorts after any concrete value.
    return (0, tri.value) if tri.has_value else (1, fallback)


def npc_sort_key(npc: NpcActor) -> tuple:
    """Total, deterministic order over NPC actors.

    Primary keys follow the documented canonical order (lane index, then
    relation-to-ego rank, then actor type); the remaining fields only break
    ties so that permuting the input list can never change the result.
    """
    position = npc.position.value if npc.position.has_value else None
    rel_rank = _RELATIVE_POSITION_RANK.get(position.relative_position, 99) if position else 99
    return (
        _tri_sort_key(npc.lane_idx, 10**9),
        rel_rank,
        npc.actor_type,
        _tri_sort_key(npc.behavior, ""),
        _tri_sort_key(npc.speed, -1),
        position.reference_point if position else "",
        npc.provenance,
    )


@dataclass(frozen=True)
class Scenario:
    """A full scenario IR.

    NPC actors are normalized to canonical order at construction, so two
    scenarios built from permuted actor lists compare equal and encode to
    identical trees.
    """

    environment: Environment = Environment()
    road_network: RoadNetwork = RoadNetwork()
    ego: EgoActor = EgoActor()
    npc_actors: tuple[NpcActor, ...] = ()

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.npc_actors, key=npc_sort_key))
        object.__setattr__(self, "npc_actors", ordered)

    @property
    def actors(self) -> tuple:
        """Ego first, then NPCs: the order used by overlap checks."""
        return (self.ego,) + self.npc_actors


def empty_scenario() -> Scenario:
    return Scenario()
