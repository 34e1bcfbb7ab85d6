"""Scenario mutation operators for the fuzz loop.

Seven operators over the IR: add a participant, move a start, move a
target (the IR derives targets from behavior, so this re-draws the
behavior), and set weather / time / speed / vehicle type.  Every mutation
is seeded, validates, and respects the no-overlap invariant.
"""

from __future__ import annotations

import random
from dataclasses import replace

from scenario_forge.ir import (
    ACTOR_KINDS,
    BEHAVIOR_KINDS,
    RELATIVE_POSITIONS,
    TIME_KINDS,
    UNSET,
    VEHICLE_KINDS,
    WEATHER_KINDS,
    NpcActor,
    Position,
    Scenario,
    specified,
    validate,
)

MUTATION_KINDS = (
    "add_actor",
    "move_start",
    "move_target",
    "set_weather",
    "set_time",
    "set_speed",
    "set_vehicle_type",
)

_MOVEMENT_BEHAVIORS = tuple(b for b in BEHAVIOR_KINDS)


class MutationInapplicable(Exception):
    """The operator has no valid application to this scenario."""


def _occupied_cells(scenario: Scenario) -> set[tuple]:
    cells = set()
    for actor in scenario.actors:
        if actor.lane_idx.has_value and actor.position.has_value:
            pos = actor.position.value
            cells.add((actor.lane_idx.value, pos.reference_point, pos.relative_position))
    return cells


def _lane_cap(scenario: Scenario) -> int:
    lane_number = scenario.road_network.lane_number
    return lane_number.value if lane_number.has_value and lane_number.value > 0 else 4


def _free_cell(scenario: Scenario, rng: random.Random) -> tuple[int, str] | None:
    cap = _lane_cap(scenario)
    occupied = _occupied_cells(scenario)
    cells = [
        (lane, rel)
        for lane in range(cap)
        for rel in RELATIVE_POSITIONS
        if (lane, "ego_vehicle", rel) not in occupied
    ]
    if not cells:
        return None
    return rng.choice(cells)


def _with_npcs(scenario: Scenario, npcs) -> Scenario:
    return Scenario(
        environment=scenario.environment,
        road_network=scenario.road_network,
        ego=scenario.ego,
        npc_actors=tuple(npcs),
    )


def _different_choice(rng: random.Random, vocab, current) -> str:
    options = [v for v in vocab if v != current]
    if not options:
        raise MutationInapplicable(f"no alternative to {current!r}")
    return rng.choice(options)


def mutate(scenario: Scenario, op: str, seed: int) -> Scenario:
    """Apply one mutation operator; deterministic per (scenario, op, seed)."""
    if op not in MUTATION_KINDS:
        raise ValueError(f"unknown mutation {op!r}; expected one of {MUTATION_KINDS}")
    rng = random.Random(seed)
    npcs = list(scenario.npc_actors)

    if op == "add_actor":
        cell = _free_cell(scenario, rng)
        if cell is None:
            raise MutationInapplicable("no free position cell for a new actor")
        lane, rel = cell
        new = NpcActor(
            actor_type=rng.choice(ACTOR_KINDS),
            behavior=specified(rng.choice(_MOVEMENT_BEHAVIORS)),
            position=specified(Position("ego_vehicle", rel)),
            lane_idx=specified(lane),
            speed=specified(rng.randint(0, 30)),
        )
        result = _with_npcs(scenario, npcs + [new])

    elif op == "move_start":
        if not npcs:
            raise MutationInapplicable("no npc actor to move")
        index = rng.randrange(len(npcs))
        cell = _free_cell(scenario, rng)
        if cell is None:
            raise MutationInapplicable("no free cell to move to")
        lane, rel = cell
        npcs[index] = replace(
            npcs[index],
            lane_idx=specified(lane),
            position=specified(Position("ego_vehicle", rel)),
        )
        result = _with_npcs(scenario, npcs)

    elif op == "move_target":
        # Targets are behavior-derived; a different behavior moves the endpoint.
        actors = ["ego"] + list(range(len(npcs)))
        pick = rng.choice(actors)
        if pick == "ego":
            current = scenario.ego.behavior.value if scenario.ego.behavior.has_value else None
            new_behavior = _different_choice(rng, _MOVEMENT_BEHAVIORS, current)
            result = replace(scenario, ego=replace(scenario.ego, behavior=specified(new_behavior)))
        else:
            current = npcs[pick].behavior.value if npcs[pick].behavior.has_value else None
            npcs[pick] = replace(npcs[pick], behavior=specified(_different_choice(rng, _MOVEMENT_BEHAVIORS, current)))
            result = _with_npcs(scenario, npcs)

    elif op == "set_weather":
        current = scenario.environment.weather.value if scenario.environment.weather.has_value else None
        new_weather = _different_choice(rng, WEATHER_KINDS, current)
        result = replace(scenario, environment=replace(scenario.environment, weather=specified(new_weather)))

    elif op == "set_time":
        current = scenario.environment.time.value if scenario.environment.time.has_value else None
        result = replace(
            scenario,
            environment=replace(scenario.environment, time=specified(_different_choice(rng, TIME_KINDS, current))),
        )

    elif op == "set_speed":
        actors = ["ego"] + list(range(len(npcs)))
        pick = rng.choice(actors)
        if pick == "ego":
            current = scenario.ego.speed.value if scenario.ego.speed.has_value else None
            new_speed = _different_choice(rng, tuple(range(31)), current)
            result = replace(scenario, ego=replace(scenario.ego, speed=specified(new_speed)))
        else:
            current = npcs[pick].speed.value if npcs[pick].speed.has_value else None
            npcs[pick] = replace(npcs[pick], speed=specified(_different_choice(rng, tuple(range(31)), current)))
            result = _with_npcs(scenario, npcs)

    else:  # set_vehicle_type
        vehicle_indices = [i for i, npc in enumerate(npcs) if npc.actor_type in VEHICLE_KINDS]
        if not vehicle_indices:
            raise MutationInapplicable("no vehicle npc to retype (pedestrians keep their type)")
        index = rng.choice(vehicle_indices)
        npcs[index] = replace(
            npcs[index], actor_type=_different_choice(rng, VEHICLE_KINDS, npcs[index].actor_type)
        )
        result = _with_npcs(scenario, npcs)

    report = validate(result)
    if not report.is_valid:
        raise MutationInapplicable(f"mutation produced an invalid scenario:\n{report}")
    return result
