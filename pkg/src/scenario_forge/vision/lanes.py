"""Lane occupancy from box anchors and boundary polylines.

Each actor's anchor (bounding-box bottom-center) is compared against every
boundary polyline evaluated at the anchor's y by linear interpolation; the
lane index is the number of boundaries strictly left of the anchor, minus
one.  Anchors left of the leftmost or right of the rightmost boundary fall
outside the road: they get no lane rather than a clamped one.  The ego lane
is the lane containing the image's bottom-center (dashboard viewpoint).
"""

from __future__ import annotations

from dataclasses import dataclass

from .detections import DetectionSet


class NoLanes(Exception):
    """Fewer than two boundaries: no lanes can be derived."""


@dataclass(frozen=True)
class LaneAssignment:
    actor_lanes: tuple[int | None, ...]  # aligned with ds.actor_boxes; None = off-road
    ego_lane: int | None
    lane_count: int


def boundary_x_at(polyline: tuple[tuple[float, float], ...], y: float) -> float:
    """X of a boundary at row y; end segments extrapolate beyond the polyline."""
    if y <= polyline[0][1]:
        (x0, y0), (x1, y1) = polyline[0], polyline[1]
    elif y >= polyline[-1][1]:
        (x0, y0), (x1, y1) = polyline[-2], polyline[-1]
    else:
        for (x0, y0), (x1, y1) in zip(polyline, polyline[1:]):
            if y0 <= y <= y1:
                break
    if y1 == y0:
        return x0
    t = (y - y0) / (y1 - y0)
    return x0 + t * (x1 - x0)


def lane_of_point(
    boundaries: tuple[tuple[tuple[float, float], ...], ...], x: float, y: float
) -> int | None:
    left_count = sum(1 for line in boundaries if boundary_x_at(line, y) < x)
    if left_count == 0 or left_count == len(boundaries):
        return None
    return left_count - 1


def assign_lanes(ds: DetectionSet) -> LaneAssignment:
    """Lane occupancy for every actor box plus the ego vehicle.

    Raises NoLanes when fewer than two boundaries exist; callers then leave
    lane information unspecified.
    """
    boundaries = ds.lane_boundaries
    if len(boundaries) < 2:
        raise NoLanes(f"need at least 2 lane boundaries, have {len(boundaries)}")
    lane_count = len(boundaries) - 1
    actor_lanes = []
    for box in ds.actor_boxes:
        ax, ay = box.anchor
        actor_lanes.append(lane_of_point(boundaries, ax, ay))
    width, height = ds.image_size
    ego_lane = lane_of_point(boundaries, width / 2.0, float(height))
    return LaneAssignment(tuple(actor_lanes), ego_lane, lane_count)
