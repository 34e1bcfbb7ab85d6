"""Alignment of textual and visual IRs into one scenario.

Per-field priority: the environment and all road-network fields except the
lane count come from the textual IR when it speaks; the lane count comes
from the visual IR.  Actors present in both modalities are matched by
position compatibility and merged field-wise (dynamics from text, position
from vision); single-modality actors are admitted after an overlap check.
Every decision lands in a MergeReport that covers each output field exactly
once.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .ir import (
    UNSET,
    Environment,
    EgoActor,
    NpcActor,
    RoadNetwork,
    Scenario,
    Tri,
    npc_sort_key,
    validate,
)

_ACTOR_FIELDS = ("behavior", "position", "lane_idx", "speed")
MATCH_THRESHOLD = 2


@dataclass(frozen=True)
class Conflict:
    path: str
    text_value: object
    visual_value: object
    winner: str  # "text" | "visual"


@dataclass(frozen=True)
class DroppedActor:
    source: str  # modality the actor came from
    actor: NpcActor
    reason: str


@dataclass
class MergeReport:
    field_sources: dict = field(default_factory=dict)  # path -> "text"|"visual"|"unspecified"
    pairs: list = field(default_factory=list)  # (text_index, visual_index) in input order
    text_only_kept: list = field(default_factory=list)
    visual_only_kept: list = field(default_factory=list)
    dropped: list = field(default_factory=list)  # DroppedActor
    conflicts: list = field(default_factory=list)  # Conflict
    demoted_positions: list = field(default_factory=list)  # paths whose position was cleared

    def to_dict(self) -> dict:
        return {
            "field_sources": dict(self.field_sources),
            "matched_pairs": [list(p) for p in self.pairs],
            "text_only_kept": self.text_only_kept,
            "visual_only_kept": self.visual_only_kept,
            "demoted_positions": list(self.demoted_positions),
            "dropped": [
                {"source": d.source, "actor_type": d.actor.actor_type, "reason": d.reason}
                for d in self.dropped
            ],
            "conflicts": [
                {
                    "path": c.path,
                    "text": repr(c.text_value),
                    "visual": repr(c.visual_value),
                    "winner": c.winner,
                }
                for c in self.conflicts
            ],
        }


def match_score(text_npc: NpcActor, visual_npc: NpcActor) -> int:
    """Position compatibility score between actors from the two modalities."""
    score = 0
    if (
        text_npc.lane_idx.has_value
        and visual_npc.lane_idx.has_value
        and text_npc.lane_idx.value == visual_npc.lane_idx.value
    ):
        score += 2
    if (
        text_npc.position.has_value
        and visual_npc.position.has_value
        and text_npc.position.value.relative_position == visual_npc.position.value.relative_position
    ):
        score += 1
    if text_npc.actor_type == visual_npc.actor_type:
        score += 1
    return score


def match_actors(text_npcs, visual_npcs):
    """Greedy one-to-one matching by descending score.

    Both lists must be in canonical order; ties break toward earlier list
    positions, which makes the matching deterministic and permutation
    independent.  A pair requires a score of at least MATCH_THRESHOLD.
    """
    candidates = []
    for ti, text_npc in enumerate(text_npcs):
        for vi, visual_npc in enumerate(visual_npcs):
            score = match_score(text_npc, visual_npc)
            if score >= MATCH_THRESHOLD:
                candidates.append((-score, ti, vi))
    candidates.sort()
    matched_text: set[int] = set()
    matched_visual: set[int] = set()
    pairs: list[tuple[int, int]] = []
    for neg_score, ti, vi in candidates:
        if ti in matched_text or vi in matched_visual:
            continue
        matched_text.add(ti)
        matched_visual.add(vi)
        pairs.append((ti, vi))
    pairs.sort()
    text_only = [i for i in range(len(text_npcs)) if i not in matched_text]
    visual_only = [i for i in range(len(visual_npcs)) if i not in matched_visual]
    return pairs, text_only, visual_only


def _pick(text_tri: Tri, visual_tri: Tri, priority: str) -> tuple[Tri, str, bool]:
    """Resolve one field; returns (value, source, conflicting)."""
    first, second = (text_tri, visual_tri) if priority == "text" else (visual_tri, text_tri)
    first_name, second_name = (priority, "visual" if priority == "text" else "text")
    conflicting = (
        text_tri.has_value and visual_tri.has_value and text_tri.value != visual_tri.value
    )
    if first.has_value:
        return first, first_name, conflicting
    if second.has_value:
        return second, second_name, False
    return first, "unspecified", False


def _cell(actor) -> tuple | None:
    if actor.lane_idx.has_value and actor.position.has_value:
        return (actor.lane_idx.value, actor.position.value.relative_position, actor.position.value.reference_point)
    return None


def merge(text_ir: Scenario, visual_ir: Scenario) -> tuple[Scenario, MergeReport]:
    """Merge two valid IRs under the modality priorities.

    Never raises on conflicts: every disagreement is resolved by priority
    and recorded in the report.
    """
    for name, ir in (("text", text_ir), ("visual", visual_ir)):
        report = validate(ir)
        if not report.is_valid:
            raise ValueError(f"{name} IR is invalid:\n{report}")

    report = MergeReport()
    sources = report.field_sources

    def resolve(path: str, text_tri: Tri, visual_tri: Tri, priority: str) -> Tri:
        value, source, conflicting = _pick(text_tri, visual_tri, priority)
        sources[path] = source
        if conflicting:
            report.conflicts.append(Conflict(path, text_tri.value, visual_tri.value, source))
        return value

    environment = Environment(
        weather=resolve("environment.weather", text_ir.environment.weather, visual_ir.environment.weather, "text"),
        time=resolve("environment.time", text_ir.environment.time, visual_ir.environment.time, "text"),
    )

    text_rn, visual_rn = text_ir.road_network, visual_ir.road_network
    if text_rn.traffic_signs:
        signs, signs_source = text_rn.traffic_signs, "text"
        if visual_rn.traffic_signs and visual_rn.traffic_signs != text_rn.traffic_signs:
            report.conflicts.append(
                Conflict("road_network.traffic_signs", text_rn.traffic_signs, visual_rn.traffic_signs, "text")
            )
    elif visual_rn.traffic_signs:
        signs, signs_source = visual_rn.traffic_signs, "visual"
    else:
        signs, signs_source = (), "unspecified"
    sources["road_network.traffic_signs"] = signs_source

    road_network = RoadNetwork(
        road_type=resolve("road_network.road_type", text_rn.road_type, visual_rn.road_type, "text"),
        traffic_signs=signs,
        traffic_light=resolve("road_network.traffic_light", text_rn.traffic_light, visual_rn.traffic_light, "text"),
        lane_number=resolve("road_network.lane_number", text_rn.lane_number, visual_rn.lane_number, "visual"),
    )

    # Ego: dynamics from text, position detail from vision, like any actor.
    pending_ego = {
        "behavior": ("text", text_ir.ego.behavior, visual_ir.ego.behavior),
        "speed": ("text", text_ir.ego.speed, visual_ir.ego.speed),
        "position": ("visual", text_ir.ego.position, visual_ir.ego.position),
        "lane_idx": ("visual", text_ir.ego.lane_idx, visual_ir.ego.lane_idx),
    }
    ego = EgoActor(
        **{
            fieldname: resolve(f"ego_vehicle.{fieldname}", text_tri, visual_tri, priority)
            for fieldname, (priority, text_tri, visual_tri) in pending_ego.items()
        }
    )

    text_npcs = text_ir.npc_actors
    visual_npcs = visual_ir.npc_actors
    pairs, text_only, visual_only = match_actors(text_npcs, visual_npcs)
    report.pairs = list(pairs)

    # Build output actors with deferred per-field bookkeeping: the canonical
    # order of the merged list decides the report's npc indices.
    staged: list[tuple[NpcActor, dict, list]] = []

    for ti, vi in pairs:
        text_npc, visual_npc = text_npcs[ti], visual_npcs[vi]
        fields: dict = {}
        per_field: dict = {}
        conflicts: list = []
        for fieldname, priority in (
            ("behavior", "text"),
            ("speed", "text"),
            ("position", "visual"),
            ("lane_idx", "visual"),
        ):
            value, source, conflicting = _pick(
                getattr(text_npc, fieldname), getattr(visual_npc, fieldname), priority
            )
            fields[fieldname] = value
            per_field[fieldname] = source
            if conflicting:
                conflicts.append(
                    (fieldname, getattr(text_npc, fieldname).value, getattr(visual_npc, fieldname).value, source)
                )
        if text_npc.actor_type != visual_npc.actor_type:
            conflicts.append(("actor_type", text_npc.actor_type, visual_npc.actor_type, "text"))
        per_field["actor_type"] = "text"
        merged = NpcActor(actor_type=text_npc.actor_type, provenance="both", **fields)
        staged.append((merged, per_field, conflicts))

    # Single-modality actors: vision first (position fidelity), then text,
    # each against everything already placed.
    def try_admit(npc: NpcActor, source: str, kept_list: list) -> None:
        cell = _cell(npc)
        placed_cells = {_cell(existing) for existing, _, _ in staged}
        placed_cells.discard(None)
        if cell is not None and cell in placed_cells:
            report.dropped.append(
                DroppedActor(source, npc, "overlaps an already-placed actor at the same fully-specified position")
            )
            return
        kept_list.append(npc.actor_type)
        per_field = {f: (source if getattr(npc, f).has_value else "unspecified") for f in _ACTOR_FIELDS}
        per_field["actor_type"] = source
        staged.append((npc, per_field, []))

    for vi in visual_only:
        try_admit(visual_npcs[vi], "visual", report.visual_only_kept)
    for ti in text_only:
        try_admit(text_npcs[ti], "text", report.text_only_kept)

    # Safety sweeps.  Each input was valid on its own, but the merge can
    # (a) leave an actor's lane index outside the visually-resolved lane
    # count, and (b) move two actors onto the same fully-specified cell.
    # Offending fields are demoted to unspecified and reported; actors are
    # never dropped here, preserving actor conservation.
    lane_cap = road_network.lane_number.value if road_network.lane_number.has_value else None

    def _lane_ok(tri: Tri) -> bool:
        return lane_cap is None or not tri.has_value or 0 <= tri.value < lane_cap

    if not _lane_ok(ego.lane_idx):
        ego = replace(ego, lane_idx=UNSET)
        sources["ego_vehicle.lane_idx"] = "unspecified"
        report.demoted_positions.append("ego_vehicle.lane_idx")
    demoted = False
    for index, (npc, per_field, conflicts) in enumerate(staged):
        if not _lane_ok(npc.lane_idx):
            staged[index] = (
                replace(npc, lane_idx=UNSET),
                {**per_field, "lane_idx": "unspecified", "_demoted_lane": True},
                conflicts,
            )
            demoted = True

    ordered = sorted(staged, key=lambda item: npc_sort_key(item[0]))

    used_cells = set()
    ego_cell = _cell(ego)
    if ego_cell is not None:
        used_cells.add(ego_cell)
    for index, (npc, per_field, conflicts) in enumerate(ordered):
        cell = _cell(npc)
        if cell is None:
            continue
        if cell in used_cells:
            ordered[index] = (
                replace(npc, position=UNSET),
                {**per_field, "position": "unspecified", "_demoted": True},
                conflicts,
            )
            demoted = True
        else:
            used_cells.add(cell)
    if demoted:
        # Demotion changes sort keys; restore canonical order so report
        # indices line up with the constructed scenario.
        ordered.sort(key=lambda item: npc_sort_key(item[0]))

    merged_scenario = Scenario(
        environment=environment,
        road_network=road_network,
        ego=ego,
        npc_actors=tuple(item[0] for item in ordered),
    )
    for index, (npc, per_field, conflicts) in enumerate(ordered):
        for fieldname in _ACTOR_FIELDS:
            sources[f"npc_actors[{index}].{fieldname}"] = per_field[fieldname]
        if per_field.get("_demoted"):
            report.demoted_positions.append(f"npc_actors[{index}].position")
        if per_field.get("_demoted_lane"):
            report.demoted_positions.append(f"npc_actors[{index}].lane_idx")
        for fieldname, text_value, visual_value, winner in conflicts:
            report.conflicts.append(
                Conflict(f"npc_actors[{index}].{fieldname}", text_value, visual_value, winner)
            )
    return merged_scenario, report
