"""Structural validation of scenario IR values.

Validation never raises: every broken invariant becomes an entry in the
returned report, addressed by a dotted path such as ``npc_actors[0].lane_idx``.
An empty report is the definition of a valid scenario.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import (
    ACTOR_KINDS,
    BEHAVIOR_KINDS,
    PROVENANCE_KINDS,
    REFERENCE_POINTS,
    RELATIVE_POSITIONS,
    ROAD_TYPES,
    TIME_KINDS,
    TRAFFIC_LIGHT_STATES,
    TRAFFIC_SIGN_KINDS,
    WEATHER_KINDS,
    EgoActor,
    NpcActor,
    Position,
    Scenario,
    Tri,
)


@dataclass(frozen=True)
class Violation:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.is_valid

    def __str__(self) -> str:
        if self.is_valid:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


def _check_vocab(out: list[Violation], path: str, tri: Tri, vocab: tuple[str, ...]) -> None:
    if tri.has_value and tri.value not in vocab:
        out.append(Violation(path, f"value {tri.value!r} not in {sorted(vocab)}"))


def _check_count(out: list[Violation], path: str, tri: Tri) -> None:
    if tri.has_value and (not isinstance(tri.value, int) or tri.value < 0):
        out.append(Violation(path, f"expected a non-negative integer, got {tri.value!r}"))


def _check_position(out: list[Violation], path: str, tri: Tri) -> None:
    if not tri.has_value:
        return
    pos = tri.value
    if not isinstance(pos, Position):
        out.append(Violation(path, f"expected a position, got {pos!r}"))
        return
    if pos.reference_point not in REFERENCE_POINTS:
        out.append(Violation(f"{path}.reference_point", f"value {pos.reference_point!r} not in {sorted(REFERENCE_POINTS)}"))
    if pos.relative_position not in RELATIVE_POSITIONS:
        out.append(Violation(f"{path}.relative_position", f"value {pos.relative_position!r} not in {sorted(RELATIVE_POSITIONS)}"))


def _check_actor(out: list[Violation], path: str, actor: EgoActor | NpcActor, lane_number: Tri) -> None:
    _check_vocab(out, f"{path}.behavior", actor.behavior, BEHAVIOR_KINDS)
    _check_position(out, f"{path}.position", actor.position)
    _check_count(out, f"{path}.lane_idx", actor.lane_idx)
    _check_count(out, f"{path}.speed", actor.speed)
    if (
        actor.lane_idx.has_value
        and lane_number.has_value
        and isinstance(actor.lane_idx.value, int)
        and isinstance(lane_number.value, int)
        and not 0 <= actor.lane_idx.value < lane_number.value
    ):
        out.append(
            Violation(
                f"{path}.lane_idx",
                f"lane {actor.lane_idx.value} outside [0, {lane_number.value})",
            )
        )


def _occupied_cell(actor: EgoActor | NpcActor) -> tuple | None:
    """(lane, reference, relation) when the position is fully specified."""
    if actor.lane_idx.has_value and actor.position.has_value:
        pos = actor.position.value
        return (actor.lane_idx.value, pos.reference_point, pos.relative_position)
    return None


def validate(scenario: Scenario) -> ValidationReport:
    out: list[Violation] = []
    env = scenario.environment
    _check_vocab(out, "environment.weather", env.weather, WEATHER_KINDS)
    _check_vocab(out, "environment.time", env.time, TIME_KINDS)

    rn = scenario.road_network
    _check_vocab(out, "road_network.road_type", rn.road_type, ROAD_TYPES)
    _check_vocab(out, "road_network.traffic_light", rn.traffic_light, TRAFFIC_LIGHT_STATES)
    _check_count(out, "road_network.lane_number", rn.lane_number)
    for i, sign in enumerate(rn.traffic_signs):
        if sign not in TRAFFIC_SIGN_KINDS:
            out.append(Violation(f"road_network.traffic_signs[{i}]", f"value {sign!r} not in {sorted(TRAFFIC_SIGN_KINDS)}"))

    _check_actor(out, "ego_vehicle", scenario.ego, rn.lane_number)
    for i, npc in enumerate(scenario.npc_actors):
        path = f"npc_actors[{i}]"
        if npc.actor_type not in ACTOR_KINDS:
            out.append(Violation(f"{path}.actor_type", f"value {npc.actor_type!r} not in {sorted(ACTOR_KINDS)}"))
        if npc.provenance not in PROVENANCE_KINDS:
            out.append(Violation(f"{path}.provenance", f"value {npc.provenance!r} not in {sorted(PROVENANCE_KINDS)}"))
        _check_actor(out, path, npc, rn.lane_number)

    seen: dict[tuple, str] = {}
    labels = ["ego_vehicle"] + [f"npc_actors[{i}]" for i in range(len(scenario.npc_actors))]
    for label, actor in zip(labels, scenario.actors):
        cell = _occupied_cell(actor)
        if cell is None:
            continue
        if cell in seen:
            out.append(Violation(label, f"occupies the same fully-specified position as {seen[cell]}"))
        else:
            seen[cell] = label

    return ValidationReport(tuple(out))
