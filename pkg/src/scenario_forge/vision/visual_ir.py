"""Visual IR construction: detections in, scenario out.

A static image carries no dynamics, so every field the textual modality
owns (weather, time, behavior, speed) stays unspecified here.  The visual
front-end contributes the lane count, the traffic-light state, sign
presence, and one NPC per detected actor with its lane occupancy and
relation to the ego vehicle.
"""

from __future__ import annotations

from scenario_forge.ir import (
    UNSET,
    EgoActor,
    NpcActor,
    Position,
    RoadNetwork,
    Scenario,
    specified,
)

from .detections import Box, DetectionSet
from .lanes import NoLanes, assign_lanes

DEFAULT_DEDUP_IOU = 0.9
FRONT_MARGIN_FRACTION = 0.02  # of image height; avoids front/behind jitter at equality


def _iou(a: Box, b: Box) -> float:
    ax0, ay0, ax1, ay1 = a.bbox
    bx0, by0, bx1, by1 = b.bbox
    ix0, iy0 = max(ax0, bx0), max(ay0, by0)
    ix1, iy1 = min(ax1, bx1), min(ay1, by1)
    if ix0 >= ix1 or iy0 >= iy1:
        return 0.0
    inter = (ix1 - ix0) * (iy1 - iy0)
    union = (ax1 - ax0) * (ay1 - ay0) + (bx1 - bx0) * (by1 - by0) - inter
    return inter / union


def dedup_boxes(boxes: tuple[Box, ...], iou_threshold: float = DEFAULT_DEDUP_IOU) -> tuple[Box, ...]:
    """Merge same-class near-duplicate boxes, keeping the most confident.

    Boxes are swept in a deterministic order so the result is independent
    of input permutation.
    """
    ordered = sorted(boxes, key=lambda b: (-b.confidence, b.cls, b.bbox))
    kept: list[Box] = []
    for box in ordered:
        if any(k.cls == box.cls and _iou(k, box) > iou_threshold for k in kept):
            continue
        kept.append(box)
    return tuple(kept)


def _relation(
    lane: int | None,
    ego_lane: int | None,
    anchor: tuple[float, float],
    ego_anchor: tuple[float, float],
    image_size: tuple[int, int],
) -> str:
    width, height = image_size
    dy = ego_anchor[1] - anchor[1]
    ahead = dy > FRONT_MARGIN_FRACTION * height
    behind = dy < -FRONT_MARGIN_FRACTION * height
    if lane is not None and ego_lane is not None:
        if lane == ego_lane:
            return "behind" if behind else "front"
        side = "left" if lane < ego_lane else "right"
    else:
        dx = anchor[0] - ego_anchor[0]
        if abs(dx) <= FRONT_MARGIN_FRACTION * width:
            return "behind" if behind else "front"
        side = "left" if dx < 0 else "right"
        if lane is None and ego_lane is not None:
            # Off-road anchor: plain side of the outermost boundary.
            return side
    if ahead:
        return f"front_{side}"
    return side


def build_visual_ir(ds: DetectionSet, dedup_iou: float = DEFAULT_DEDUP_IOU) -> Scenario:
    """Scenario extracted from one detection set.

    Lane-dependent fields degrade gracefully: with fewer than two
    boundaries every lane stays unspecified.
    """
    boxes = dedup_boxes(ds.boxes, dedup_iou)
    ds = DetectionSet(ds.image_size, boxes, ds.lane_boundaries)
    width, height = ds.image_size
    ego_anchor = (width / 2.0, float(height))

    try:
        assignment = assign_lanes(ds)
        lane_count: int | None = assignment.lane_count
        actor_lanes = assignment.actor_lanes
        ego_lane = assignment.ego_lane
    except NoLanes:
        lane_count = None
        actor_lanes = tuple(None for _ in ds.actor_boxes)
        ego_lane = None

    lights = [b for b in ds.boxes if b.cls == "traffic_light" and b.light_state]
    traffic_light = UNSET
    if lights:
        best = max(lights, key=lambda b: b.confidence)
        traffic_light = specified(f"{best.light_state}_light")

    signs = tuple(sorted({b.sign_kind for b in ds.boxes if b.cls == "traffic_sign" and b.sign_kind}))

    # The uniqueness invariant allows one actor per fully-specified
    # (lane, relation) cell: the nearest actor keeps the cell, farther
    # ones keep their lane but drop to an unspecified position.
    used_cells: set[tuple[int, str]] = set()
    npcs = []
    actors = sorted(
        zip(ds.actor_boxes, actor_lanes),
        key=lambda pair: (-pair[0].anchor[1], pair[0].bbox),
    )
    for box, lane in actors:
        relation = _relation(lane, ego_lane, box.anchor, ego_anchor, ds.image_size)
        position = specified(Position("ego_vehicle", relation))
        lane_tri = specified(lane) if lane is not None else UNSET
        if lane is not None:
            if (lane, relation) in used_cells:
                position = UNSET
            else:
                used_cells.add((lane, relation))
        npcs.append(
            NpcActor(
                actor_type=box.cls,
                behavior=UNSET,
                position=position,
                lane_idx=lane_tri,
                speed=UNSET,
                provenance="visual",
            )
        )

    road_network = RoadNetwork(
        road_type=UNSET,
        traffic_signs=signs,
        traffic_light=traffic_light,
        lane_number=specified(lane_count) if lane_count is not None else UNSET,
    )
    ego = EgoActor(lane_idx=specified(ego_lane) if ego_lane is not None else UNSET)
    return Scenario(road_network=road_network, ego=ego, npc_actors=tuple(npcs))
