"""Canonical ordered-tree encoding of a scenario.

The encoding is the operand of the tree edit distance: internal nodes carry
key labels, leaves carry ``key: value`` labels, and unspecified fields
produce no node at all, so a missing structure costs exactly its node count
in edits.  The section skeleton (root, environment, road_network, actors,
ego_vehicle) is always present; an empty scenario is a five-node tree.

A position contributes two leaves (reference point and relation), matching
the grammar's two terminals; every other field is a single leaf.  This is
one consistent reading of the node-counting rules; see docs/format-ir.md.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import EgoActor, NpcActor, Scenario, Tri


@dataclass(frozen=True)
class LabeledTree:
    """Ordered rooted tree with string labels."""

    label: str
    children: tuple[LabeledTree, ...] = ()

    def node_count(self) -> int:
        return 1 + sum(child.node_count() for child in self.children)

    def iter_labels(self):
        yield self.label
        for child in self.children:
            yield from child.iter_labels()


def _leaf(key: str, tri: Tri) -> list[LabeledTree]:
    if not tri.has_value:
        return []
    return [LabeledTree(f"{key}: {tri.value}")]


def _position_leaves(position: Tri) -> list[LabeledTree]:
    if not position.has_value:
        return []
    pos = position.value
    return [
        LabeledTree(f"reference_point: {pos.reference_point}"),
        LabeledTree(f"relative_position: {pos.relative_position}"),
    ]


def _actor_children(actor: EgoActor | NpcActor) -> list[LabeledTree]:
    children: list[LabeledTree] = []
    if isinstance(actor, NpcActor):
        children.append(LabeledTree(f"actor_type: {actor.actor_type}"))
    children.extend(_leaf("behavior", actor.behavior))
    children.extend(_position_leaves(actor.position))
    children.extend(_leaf("lane_idx", actor.lane_idx))
    children.extend(_leaf("speed", actor.speed))
    return children


def canonical_tree(scenario: Scenario) -> LabeledTree:
    """Deterministic tree for a scenario; NPC order is already canonical."""
    env = scenario.environment
    env_node = LabeledTree(
        "environment",
        tuple(_leaf("weather", env.weather) + _leaf("time", env.time)),
    )

    rn = scenario.road_network
    rn_children: list[LabeledTree] = []
    rn_children.extend(_leaf("road_type", rn.road_type))
    rn_children.extend(LabeledTree(f"traffic_sign: {sign}") for sign in rn.traffic_signs)
    rn_children.extend(_leaf("traffic_light", rn.traffic_light))
    rn_children.extend(_leaf("lane_number", rn.lane_number))
    rn_node = LabeledTree("road_network", tuple(rn_children))

    ego_node = LabeledTree("ego_vehicle", tuple(_actor_children(scenario.ego)))
    npc_nodes = tuple(
        LabeledTree("npc_actor", tuple(_actor_children(npc))) for npc in scenario.npc_actors
    )
    actors_node = LabeledTree("actors", (ego_node,) + npc_nodes)

    return LabeledTree("scenario", (env_node, rn_node, actors_node))
