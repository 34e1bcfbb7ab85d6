"""Desk-scale kinematic lane simulator with failure oracles.

Fixed-step longitudinal kinematics over the minisim JSON produced by
codegen.  Three oracles watch every step: collision (same lane, interval
overlap), red-light violation (the ego crosses the stop line on red), and
immobility (ego below walking pace for ten seconds short of its target).
Identical inputs produce bit-identical traces.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

DEFAULT_DT = 0.1
DEFAULT_DURATION = 30.0
LANE_CHANGE_WINDOW_S = 2.0
IMMOBILITY_SPEED_MPS = 0.1
IMMOBILITY_WINDOW_S = 10.0
BRAKE_MPS2 = 3.0
HEADWAY_S = 2.0
MIN_GAP_M = 5.0
ACCEL_LIMIT_MPS2 = 2.0


class InvalidScenario(ValueError):
    """The minisim scenario violates its own section geometry."""


@dataclass(frozen=True)
class BugReport:
    kind: str  # "collision" | "red_light_violation" | "immobility"
    time: float
    participants: tuple[str, ...]
    signature: tuple

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "time": self.time,
            "participants": list(self.participants),
            "signature": list(self.signature),
        }


@dataclass
class _Actor:
    actor_id: str
    kind: str
    role: str
    lane: int
    s: float
    v: float
    length: float
    behavior: str
    target_lane: int
    target_s: float
    cruise: float
    change_started: float | None = None

    def lanes_occupied(self, t: float) -> tuple[int, ...]:
        if self.change_started is not None and t < self.change_started + LANE_CHANGE_WINDOW_S:
            return tuple(sorted({self.lane, self.target_lane}))
        if self.change_started is not None:
            return (self.target_lane,)
        return (self.lane,)

    def current_lanes(self, t: float) -> tuple[int, ...]:
        return self.lanes_occupied(t)

    @property
    def interval(self) -> tuple[float, float]:
        half = self.length / 2.0
        return (self.s - half, self.s + half)

    def reached_target(self) -> bool:
        return self.s >= self.target_s - 1e-9


@dataclass(frozen=True)
class TraceStep:
    t: float
    actors: tuple[tuple[str, tuple[int, ...], float, float], ...]  # (id, lanes, s, v)


@dataclass(frozen=True)
class Trace:
    actor_meta: tuple[tuple[str, str, float], ...]  # (id, kind, length)
    steps: tuple[TraceStep, ...]
    dt: float

    def to_dict(self) -> dict:
        return {
            "dt": self.dt,
            "actors": [{"id": i, "kind": k, "length_m": l} for i, k, l in self.actor_meta],
            "steps": [
                {
                    "t": round(step.t, 6),
                    "actors": [
                        {"id": a, "lanes": list(lanes), "s": round(s, 6), "v": round(v, 6)}
                        for a, lanes, s, v in step.actors
                    ],
                }
                for step in self.steps
            ],
        }


@dataclass(frozen=True)
class AgentView:
    """What the ego policy sees each step."""

    speed: float
    cruise: float
    gap_to_leader: float | None  # bumper-to-bumper, same lane ahead
    leader_speed: float | None
    distance_to_stop_line: float | None  # only when the phase is red
    time: float


def naive_agent(view: AgentView) -> float:
    """Car-following ego policy: brake for short headway and red lights,
    otherwise track the cruise speed."""
    if view.distance_to_stop_line is not None and view.distance_to_stop_line > 0:
        braking_distance = view.speed * view.speed / (2.0 * BRAKE_MPS2) + 10.0
        if view.distance_to_stop_line < braking_distance:
            return -BRAKE_MPS2
    if view.gap_to_leader is not None:
        headway = view.gap_to_leader / view.speed if view.speed > 0.01 else float("inf")
        if view.gap_to_leader < MIN_GAP_M or headway < HEADWAY_S:
            return -BRAKE_MPS2
    if view.speed < view.cruise:
        return min(ACCEL_LIMIT_MPS2, view.cruise - view.speed)
    return 0.0


def no_op_agent(view: AgentView) -> float:
    return 0.0


def _load_actors(scenario: dict) -> list[_Actor]:
    lanes = scenario["section"]["lanes"]
    actors = []
    for raw in scenario["actors"]:
        lane = raw["lane_index"]
        if not 0 <= lane < len(lanes):
            raise InvalidScenario(f"actor {raw['id']} on lane {lane}, section has {len(lanes)}")
        behavior = raw["behavior"]
        speed = 0.0 if behavior == "static" else float(raw["speed_mps"])
        actor = _Actor(
            actor_id=raw["id"],
            kind=raw["actor_type"],
            role=raw["role"],
            lane=lane,
            s=float(raw["start_s"]),
            v=speed,
            length=float(raw["length_m"]),
            behavior=behavior,
            target_lane=raw["target_lane_index"],
            target_s=float(raw["target_s"]),
            cruise=float(raw["speed_mps"]),
        )
        if behavior.startswith("change_lane") and actor.target_lane != actor.lane:
            actor.change_started = 0.0
        actors.append(actor)
    return actors


def _signature(kind: str, participants: list[_Actor], lane: int | None) -> tuple:
    return (kind, tuple(sorted(a.kind for a in participants)), lane)


def run(
    scenario: dict,
    agent=None,
    duration: float = DEFAULT_DURATION,
    dt: float = DEFAULT_DT,
    seed: int = 0,
) -> tuple[Trace, list[BugReport]]:
    """Simulate one minisim scenario; returns the trace and deduped bugs.

    ``agent`` maps an AgentView to an ego acceleration; None holds speed.
    The seed is recorded for provenance; the dynamics are deterministic.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if duration < dt:
        raise ValueError("duration must cover at least one step")
    agent = agent or no_op_agent
    actors = _load_actors(scenario)
    ego = next((a for a in actors if a.role == "ego"), None)
    if ego is None:
        raise InvalidScenario("scenario has no ego actor")

    stop_line = scenario["section"].get("stop_line_s")
    phase = scenario.get("traffic_light")

    bugs: list[BugReport] = []
    seen: set[tuple] = set()
    immobile_since: float | None = None
    immobility_reported = False

    def record(kind: str, t: float, participants: list[_Actor], lane: int | None) -> None:
        signature = _signature(kind, participants, lane)
        if signature in seen:
            return
        seen.add(signature)
        bugs.append(BugReport(kind, round(t, 6), tuple(a.actor_id for a in participants), signature))

    steps: list[TraceStep] = []
    n_steps = int(round(duration / dt))
    t = 0.0
    for i in range(1, n_steps + 1):
        prev_ego_s = ego.s
        # Ego control first, from the state at the step start.
        leader_gap = None
        leader_speed = None
        for other in actors:
            if other is ego:
                continue
            if ego.lane in other.current_lanes(t) and other.s > ego.s:
                gap = (other.s - other.length / 2.0) - (ego.s + ego.length / 2.0)
                if leader_gap is None or gap < leader_gap:
                    leader_gap, leader_speed = gap, other.v
        dist_to_stop = None
        if phase == "red" and stop_line is not None and ego.s < stop_line:
            dist_to_stop = stop_line - ego.s
        accel = agent(
            AgentView(
                speed=ego.v,
                cruise=ego.cruise,
                gap_to_leader=leader_gap,
                leader_speed=leader_speed,
                distance_to_stop_line=dist_to_stop,
                time=t,
            )
        )

        t = i * dt
        for actor in actors:
            if actor.behavior == "static":
                actor.v = 0.0
            elif actor is ego:
                actor.v = max(0.0, actor.v + accel * dt)
            actor.s += actor.v * dt
            if actor.change_started is not None and t >= actor.change_started + LANE_CHANGE_WINDOW_S:
                actor.lane = actor.target_lane
                actor.change_started = None

        # Oracles on the post-step state.
        for a_idx in range(len(actors)):
            for b_idx in range(a_idx + 1, len(actors)):
                a, b = actors[a_idx], actors[b_idx]
                shared = set(a.current_lanes(t)) & set(b.current_lanes(t))
                if not shared:
                    continue
                (a0, a1), (b0, b1) = a.interval, b.interval
                if a0 <= b1 and b0 <= a1:
                    record("collision", t, [a, b], min(shared))
        if phase == "red" and stop_line is not None and prev_ego_s < stop_line <= ego.s:
            record("red_light_violation", t, [ego], ego.lane)
        if ego.v < IMMOBILITY_SPEED_MPS and not ego.reached_target():
            if immobile_since is None:
                immobile_since = t - dt  # slow since the previous state
            if not immobility_reported and t - immobile_since >= IMMOBILITY_WINDOW_S:
                record("immobility", t, [ego], ego.lane)
                immobility_reported = True
        else:
            immobile_since = None

        steps.append(
            TraceStep(
                t=round(t, 6),
                actors=tuple(
                    (a.actor_id, a.current_lanes(t), a.s, a.v) for a in actors
                ),
            )
        )

    trace = Trace(
        actor_meta=tuple((a.actor_id, a.kind, a.length) for a in actors),
        steps=tuple(steps),
        dt=dt,
    )
    return trace, bugs


def load_minisim(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
