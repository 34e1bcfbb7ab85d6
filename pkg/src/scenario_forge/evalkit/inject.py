"""Controlled error injection for sensitivity studies.

Text-side: relabel a seeded sample of specified leaves to different
in-vocabulary values (hallucination).  Vision-side: remove a seeded sample
of detected actor boxes (detection misses).  Both use shuffle-prefix
sampling, so raising the rate strictly grows the corrupted set: sweeps are
monotone by construction, and identical (input, rate, seed) triples give
identical outputs.
"""

from __future__ import annotations

import random
from dataclasses import replace

from scenario_forge.ir import (
    ACTOR_KINDS,
    BEHAVIOR_KINDS,
    REFERENCE_POINTS,
    RELATIVE_POSITIONS,
    ROAD_TYPES,
    TIME_KINDS,
    TRAFFIC_LIGHT_STATES,
    TRAFFIC_SIGN_KINDS,
    WEATHER_KINDS,
    NpcActor,
    Position,
    Scenario,
    specified,
    validate,
)
from scenario_forge.vision import DetectionSet


def _sample_size(rate: float, population: int) -> int:
    if not 0 < rate <= 1:
        raise ValueError("rate must be in (0, 1]")
    return max(1, round(rate * population))


# ---------------------------------------------------------------------------
# text hallucination
#
# Mutations run against a mutable store keyed by the ORIGINAL actor order:
# the scenario itself re-sorts actors whenever a sort-key field changes, so
# indices into it would go stale mid-batch.


class _Store:
    def __init__(self, scenario: Scenario):
        self.env = {"weather": scenario.environment.weather, "time": scenario.environment.time}
        rn = scenario.road_network
        self.road = {
            "road_type": rn.road_type,
            "traffic_light": rn.traffic_light,
            "lane_number": rn.lane_number,
        }
        self.signs = list(rn.traffic_signs)
        self.ego = {
            "behavior": scenario.ego.behavior,
            "position": scenario.ego.position,
            "lane_idx": scenario.ego.lane_idx,
            "speed": scenario.ego.speed,
        }
        self.npcs = [
            {
                "actor_type": npc.actor_type,
                "behavior": npc.behavior,
                "position": npc.position,
                "lane_idx": npc.lane_idx,
                "speed": npc.speed,
                "provenance": npc.provenance,
            }
            for npc in scenario.npc_actors
        ]

    def actor(self, index: int | None) -> dict:
        return self.ego if index is None else self.npcs[index]

    def build(self) -> Scenario:
        from scenario_forge.ir import Environment, EgoActor, RoadNetwork

        return Scenario(
            environment=Environment(**self.env),
            road_network=RoadNetwork(traffic_signs=tuple(self.signs), **self.road),
            ego=EgoActor(**self.ego),
            npc_actors=tuple(NpcActor(**fields) for fields in self.npcs),
        )


class _Leaf:
    """One specified leaf: candidates to relabel to, and an application."""

    def __init__(self, key: str, candidates, apply):
        self.key = key
        self.candidates = candidates  # callable(store) -> list of values
        self.apply = apply  # callable(store, value) -> None


def _vocab_options(vocab, current):
    return lambda store: [v for v in vocab if v != current]


def _set_simple(group: str, fieldname: str):
    def apply(store: _Store, value) -> None:
        target = store.env if group == "env" else store.road
        target[fieldname] = specified(value)

    return apply


def _set_actor_field(index, fieldname):
    def apply(store: _Store, value) -> None:
        wrapped = value if fieldname == "actor_type" else specified(value)
        store.actor(index)[fieldname] = wrapped

    return apply


def _set_position_part(index, part):
    def apply(store: _Store, value) -> None:
        pos = store.actor(index)["position"].value
        store.actor(index)["position"] = specified(
            Position(
                reference_point=value if part == "reference_point" else pos.reference_point,
                relative_position=value if part == "relative_position" else pos.relative_position,
            )
        )

    return apply


def _set_sign(index):
    def apply(store: _Store, value) -> None:
        store.signs[index] = value

    return apply


def _enumerate_leaves(scenario: Scenario) -> list[_Leaf]:
    """Every specified leaf of the canonical tree, in document order."""
    leaves: list[_Leaf] = []
    env, rn = scenario.environment, scenario.road_network
    if env.weather.has_value:
        leaves.append(_Leaf("environment.weather", _vocab_options(WEATHER_KINDS, env.weather.value), _set_simple("env", "weather")))
    if env.time.has_value:
        leaves.append(_Leaf("environment.time", _vocab_options(TIME_KINDS, env.time.value), _set_simple("env", "time")))
    if rn.road_type.has_value:
        leaves.append(_Leaf("road_network.road_type", _vocab_options(ROAD_TYPES, rn.road_type.value), _set_simple("road", "road_type")))
    for i, sign in enumerate(rn.traffic_signs):
        leaves.append(_Leaf(f"road_network.traffic_signs[{i}]", _vocab_options(TRAFFIC_SIGN_KINDS, sign), _set_sign(i)))
    if rn.traffic_light.has_value:
        leaves.append(
            _Leaf("road_network.traffic_light", _vocab_options(TRAFFIC_LIGHT_STATES, rn.traffic_light.value), _set_simple("road", "traffic_light"))
        )
    if rn.lane_number.has_value:

        def lane_number_options(store: _Store, current=rn.lane_number.value):
            lanes = [
                fields["lane_idx"].value
                for fields in [store.ego] + store.npcs
                if fields["lane_idx"].has_value
            ]
            floor = max(lanes) + 1 if lanes else 1
            return [v for v in range(floor, floor + 8) if v != current]

        leaves.append(_Leaf("road_network.lane_number", lane_number_options, _set_simple("road", "lane_number")))

    lane_cap = rn.lane_number.value if rn.lane_number.has_value else 8

    def actor_leaves(prefix: str, actor, index) -> list[_Leaf]:
        out: list[_Leaf] = []
        if index is not None:
            out.append(_Leaf(f"{prefix}.actor_type", _vocab_options(ACTOR_KINDS, actor.actor_type), _set_actor_field(index, "actor_type")))
        if actor.behavior.has_value:
            out.append(_Leaf(f"{prefix}.behavior", _vocab_options(BEHAVIOR_KINDS, actor.behavior.value), _set_actor_field(index, "behavior")))
        if actor.position.has_value:
            pos = actor.position.value
            out.append(
                _Leaf(f"{prefix}.position.reference_point", _vocab_options(REFERENCE_POINTS, pos.reference_point), _set_position_part(index, "reference_point"))
            )
            out.append(
                _Leaf(f"{prefix}.position.relative_position", _vocab_options(RELATIVE_POSITIONS, pos.relative_position), _set_position_part(index, "relative_position"))
            )
        if actor.lane_idx.has_value:
            out.append(
                _Leaf(
                    f"{prefix}.lane_idx",
                    lambda store, current=actor.lane_idx.value: [v for v in range(lane_cap) if v != current],
                    _set_actor_field(index, "lane_idx"),
                )
            )
        if actor.speed.has_value:
            out.append(
                _Leaf(
                    f"{prefix}.speed",
                    lambda store, current=actor.speed.value: [v for v in range(31) if v != current],
                    _set_actor_field(index, "speed"),
                )
            )
        return out

    leaves += actor_leaves("ego_vehicle", scenario.ego, None)
    for i, npc in enumerate(scenario.npc_actors):
        leaves += actor_leaves(f"npc_actors[{i}]", npc, i)
    return leaves


def specified_leaf_count(scenario: Scenario) -> int:
    return len(_enumerate_leaves(scenario))


def inject_text_hallucination(ir: Scenario, rate: float, seed: int) -> Scenario:
    """Relabel a seeded fraction of specified leaves to wrong values.

    Exactly max(1, round(rate x specified-leaf-count)) leaves change; the
    structure (node count, tree shape) is untouched, and the result stays
    valid.  Selection is a shuffle prefix, so higher rates corrupt strict
    supersets of the leaves a lower rate corrupts.
    """
    report = validate(ir)
    if not report.is_valid:
        raise ValueError(f"cannot inject into an invalid scenario:\n{report}")
    leaves = _enumerate_leaves(ir)
    if not leaves:
        raise ValueError("scenario has no specified leaf to corrupt")
    k = _sample_size(rate, len(leaves))
    order = list(range(len(leaves)))
    random.Random(seed).shuffle(order)

    store = _Store(ir)
    mutated = 0
    for position in order:
        if mutated == k:
            break
        leaf = leaves[position]
        value_rng = random.Random(f"{seed}:{leaf.key}")
        container, fieldname = _field_ref(store, leaf.key)
        snapshot = container[fieldname]
        options = []
        for option in leaf.candidates(store):
            leaf.apply(store, option)
            if validate(store.build()).is_valid:
                options.append(option)
            container[fieldname] = snapshot
        if not options:
            continue  # no legal wrong value for this leaf; take the next one
        leaf.apply(store, value_rng.choice(options))
        mutated += 1
    if mutated < k:
        raise ValueError(f"only {mutated} of {k} requested leaves could be corrupted")
    return store.build()


def _field_ref(store: _Store, key: str):
    """(container, key) holding the stored value behind a leaf."""
    if key.startswith("environment."):
        return store.env, key.split(".")[1]
    if key.startswith("road_network.traffic_signs"):
        return store.signs, int(key[key.index("[") + 1 : key.index("]")])
    if key.startswith("road_network."):
        return store.road, key.split(".")[1]
    index = None
    if key.startswith("npc_actors["):
        index = int(key[key.index("[") + 1 : key.index("]")])
    fieldname = "position" if ".position." in key else key.rsplit(".", 1)[1]
    return store.actor(index), fieldname


# ---------------------------------------------------------------------------
# detection drop


def inject_detection_drop(ds: DetectionSet, rate: float, seed: int) -> DetectionSet:
    """Remove a seeded fraction of actor boxes.

    Lane boundaries and non-actor boxes (lights, signs) are untouched.
    Higher rates remove strict supersets of the boxes a lower rate removes.
    """
    actor_indices = [i for i, box in enumerate(ds.boxes) if box.is_actor]
    if not actor_indices:
        raise ValueError("detection set has no actor boxes to drop")
    k = _sample_size(rate, len(actor_indices))
    order = list(actor_indices)
    random.Random(seed).shuffle(order)
    dropped = set(order[:k])
    boxes = tuple(box for i, box in enumerate(ds.boxes) if i not in dropped)
    return DetectionSet(ds.image_size, boxes, ds.lane_boundaries)
