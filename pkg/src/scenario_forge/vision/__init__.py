"""Visual front-end: detections schema, lane geometry, visual IR."""

from .detections import (
    DEFAULT_CONFIDENCE_FLOOR,
    Box,
    DetectionSet,
    IoError,
    SchemaError,
    detection_set_from_dict,
    load_detections,
)
from .lanes import LaneAssignment, NoLanes, assign_lanes, boundary_x_at, lane_of_point
from .visual_ir import build_visual_ir, dedup_boxes

__all__ = [
    "DEFAULT_CONFIDENCE_FLOOR",
    "Box",
    "DetectionSet",
    "IoError",
    "SchemaError",
    "detection_set_from_dict",
    "load_detections",
    "LaneAssignment",
    "NoLanes",
    "assign_lanes",
    "boundary_x_at",
    "lane_of_point",
    "build_visual_ir",
    "dedup_boxes",
]
