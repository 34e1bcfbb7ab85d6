"""Lowering: default filling and actor placement onto a map section.

Default filling resolves the unspecified dynamic attributes (weather sunny,
time daytime, behavior go_forward, speed a seeded uniform integer in 0..30
mph), tagging each filled value with the seed that produced it.  Placement
then assigns every actor a distinct (lane, waypoint) start plus a
behavior-derived target, scanning outward from the ego vehicle for free
slots so starts never collide.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace

from scenario_forge.ir import (
    DEFAULTED,
    EgoActor,
    NpcActor,
    Scenario,
    Tri,
    defaulted,
    validate,
)

from .catalog import MapSection

MPH_TO_MPS = 0.44704
DEFAULT_WEATHER = "sunny"
DEFAULT_TIME = "daytime"
DEFAULT_BEHAVIOR = "go_forward"
SPEED_RANGE_MPH = (0, 30)
NPC_OFFSET_RANGE = (2, 6)  # waypoints ahead/behind of ego for front/behind relations
EGO_TARGET_ADVANCE = 8  # waypoints covered by a go_forward target
VEHICLE_LENGTH_M = 4.5
PEDESTRIAN_LENGTH_M = 0.5


class PlacementOverflow(Exception):
    """More actors than free (lane, waypoint) slots on the section."""


def _fill_tri(tri: Tri, value, seed: int) -> Tri:
    return tri if tri.has_value else defaulted(value, seed)


def fill_defaults(scenario: Scenario, seed: int) -> Scenario:
    """Resolve unspecified dynamic attributes to defaults, reproducibly.

    Speeds are drawn from a generator seeded with ``seed``; actors are
    visited in canonical order, so the same (scenario, seed) always fills
    the same values.  Already-specified fields pass through untouched.
    """
    report = validate(scenario)
    if not report.is_valid:
        raise ValueError(f"cannot fill an invalid scenario:\n{report}")
    rng = random.Random(seed)

    def fill_speed(tri: Tri) -> Tri:
        if tri.has_value:
            return tri
        return defaulted(rng.randint(*SPEED_RANGE_MPH), seed)

    environment = replace(
        scenario.environment,
        weather=_fill_tri(scenario.environment.weather, DEFAULT_WEATHER, seed),
        time=_fill_tri(scenario.environment.time, DEFAULT_TIME, seed),
    )
    ego = replace(
        scenario.ego,
        behavior=_fill_tri(scenario.ego.behavior, DEFAULT_BEHAVIOR, seed),
        speed=fill_speed(scenario.ego.speed),
    )
    npcs = tuple(
        replace(
            npc,
            behavior=_fill_tri(npc.behavior, DEFAULT_BEHAVIOR, seed),
            speed=fill_speed(npc.speed),
        )
        for npc in scenario.npc_actors
    )
    return Scenario(environment=environment, road_network=scenario.road_network, ego=ego, npc_actors=npcs)


@dataclass(frozen=True)
class ActorPlacement:
    actor_id: str
    role: str  # "ego" | "npc"
    actor_type: str
    behavior: str
    speed_mps: float
    start: tuple[str, int]  # (lane_id, waypoint index)
    target: tuple[str, int]
    lane_index: int
    target_lane_index: int
    length_m: float
    defaulted_fields: tuple[str, ...]


@dataclass(frozen=True)
class ConcreteScenario:
    section: MapSection
    weather: str
    time: str
    traffic_light: str | None  # "red" | "green" | None
    actors: tuple[ActorPlacement, ...]  # ego first
    seed: int
    defaulted_fields: tuple[str, ...] = ()  # environment-level defaults

    def __post_init__(self) -> None:
        starts = [a.start for a in self.actors]
        if len(starts) != len(set(starts)):
            raise ValueError("actor starts must be pairwise distinct")


def _resolved(tri: Tri, what: str):
    if not tri.has_value:
        raise ValueError(f"{what} is unspecified; run fill_defaults first")
    return tri.value


def _actor_length(actor_type: str) -> float:
    return PEDESTRIAN_LENGTH_M if actor_type == "pedestrian" else VEHICLE_LENGTH_M


def _scan_free(
    occupied: set[tuple[int, int]],
    section: MapSection,
    base_lane: int,
    base_wp: int,
) -> tuple[int, int]:
    """Nearest free slot scanning outward from (base_lane, base_wp)."""
    candidates = []
    for lane_index, lane in enumerate(section.lanes):
        for wp in range(lane.waypoint_count):
            cost = abs(wp - base_wp) + 3 * abs(lane_index - base_lane)
            candidates.append((cost, lane_index, wp))
    candidates.sort()
    for _, lane_index, wp in candidates:
        if (lane_index, wp) not in occupied:
            return lane_index, wp
    raise PlacementOverflow(
        f"no free slot on section {section.id} for another actor "
        f"(capacity {section.capacity}, occupied {len(occupied)})"
    )


_SIDE_OFFSETS = {
    "left": -1,
    "front_left": -1,
    "right": 1,
    "front_right": 1,
}


def _target_for(behavior: str, section: MapSection, lane_index: int, wp: int) -> tuple[int, int]:
    lane_count = len(section.lanes)
    last = section.lanes[lane_index].waypoint_count - 1
    if behavior == "static":
        return lane_index, wp
    if behavior in ("turn_left", "change_lane_left"):
        target_lane = max(0, lane_index - 1)
    elif behavior in ("turn_right", "change_lane_right"):
        target_lane = min(lane_count - 1, lane_index + 1)
    else:
        target_lane = lane_index
    if behavior in ("turn_left", "turn_right"):
        # Leaving via the adjacent leg: run to the end of the target lane.
        return target_lane, section.lanes[target_lane].waypoint_count - 1
    return target_lane, min(last, wp + EGO_TARGET_ADVANCE)


def place_actors(scenario: Scenario, section: MapSection, seed: int) -> ConcreteScenario:
    """Place every actor on the section with pairwise-distinct starts.

    The ego goes first at its lane index (middle lane when unspecified) and
    a waypoint that leaves room for its behavior target; NPCs follow their
    lane index and relation to the ego, with seeded waypoint offsets.
    """
    rng = random.Random(seed)
    lane_count = len(section.lanes)
    occupied: set[tuple[int, int]] = set()
    placements: list[ActorPlacement] = []

    def place(
        actor: EgoActor | NpcActor, actor_id: str, role: str, actor_type: str, ego_slot=None
    ) -> ActorPlacement:
        behavior = _resolved(actor.behavior, f"{actor_id}.behavior")
        speed_mph = _resolved(actor.speed, f"{actor_id}.speed")
        defaulted_fields = [
            name for name in ("behavior", "speed") if getattr(actor, name).state == DEFAULTED
        ]

        if role == "ego":
            if actor.lane_idx.has_value:
                lane_index = min(actor.lane_idx.value, lane_count - 1)
            else:
                lane_index = lane_count // 2
                defaulted_fields.append("lane_idx")
            last = section.lanes[lane_index].waypoint_count - 1
            wp = min(5, max(0, last - EGO_TARGET_ADVANCE))
        else:
            ego_lane, ego_wp = ego_slot
            relation = (
                actor.position.value.relative_position if actor.position.has_value else None
            )
            if actor.lane_idx.has_value:
                lane_index = min(actor.lane_idx.value, lane_count - 1)
            elif relation in _SIDE_OFFSETS:
                lane_index = min(max(ego_lane + _SIDE_OFFSETS[relation], 0), lane_count - 1)
            elif relation in ("front", "behind", "on"):
                lane_index = ego_lane
            else:
                lane_index = None
            if lane_index is None:
                # Neither lane nor relation: nearest free slot outward from ego.
                lane_index, wp = _scan_free(occupied, section, ego_lane, ego_wp)
            else:
                last = section.lanes[lane_index].waypoint_count - 1
                offset = rng.randint(*NPC_OFFSET_RANGE)
                if relation in ("front", "front_left", "front_right"):
                    wp = min(last, ego_wp + offset)
                elif relation == "behind":
                    wp = max(0, ego_wp - offset)
                else:
                    # left/right/on or bare lane index: alongside the ego.
                    wp = min(last, ego_wp)
        if (lane_index, wp) in occupied:
            lane_index, wp = _scan_free(occupied, section, lane_index, wp)
        occupied.add((lane_index, wp))
        target_lane, target_wp = _target_for(behavior, section, lane_index, wp)
        return ActorPlacement(
            actor_id=actor_id,
            role=role,
            actor_type=actor_type,
            behavior=behavior,
            speed_mps=round(speed_mph * MPH_TO_MPS, 2),
            start=(section.lanes[lane_index].lane_id, wp),
            target=(section.lanes[target_lane].lane_id, target_wp),
            lane_index=lane_index,
            target_lane_index=target_lane,
            length_m=_actor_length(actor_type),
            defaulted_fields=tuple(defaulted_fields),
        )

    ego_placement = place(scenario.ego, "ego", "ego", "car")
    placements.append(ego_placement)
    ego_slot = (ego_placement.lane_index, ego_placement.start[1])
    for i, npc in enumerate(scenario.npc_actors):
        placements.append(place(npc, f"npc_{i}", "npc", npc.actor_type, ego_slot=ego_slot))

    weather = _resolved(scenario.environment.weather, "environment.weather")
    time = _resolved(scenario.environment.time, "environment.time")
    env_defaults = tuple(
        f"environment.{name}"
        for name, tri in (("weather", scenario.environment.weather), ("time", scenario.environment.time))
        if tri.state == DEFAULTED
    )
    light_tri = scenario.road_network.traffic_light
    if light_tri.has_value and light_tri.value in ("red_light", "green_light"):
        traffic_light = light_tri.value.removesuffix("_light")
    else:
        traffic_light = None

    return ConcreteScenario(
        section=section,
        weather=weather,
        time=time,
        traffic_light=traffic_light,
        actors=tuple(placements),
        seed=seed,
        defaulted_fields=env_defaults,
    )
