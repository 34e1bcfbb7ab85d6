"""Detections input: schema validation and loading.

The detections JSON file is the contract between any detector adapter and
the visual front-end.  Coordinates are pixels with a top-left origin; lane
boundaries are polylines ordered top-to-bottom (monotonically increasing
y).  The machine-readable schema ships with the package and is mirrored at
docs/detections.schema.json for adapters to vendor.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import jsonschema

from scenario_forge.ir import ACTOR_KINDS

DEFAULT_CONFIDENCE_FLOOR = 0.25


class IoError(Exception):
    """The detections file could not be read."""


class SchemaError(ValueError):
    """The detections JSON violates the schema or its geometric invariants."""

    def __init__(self, message: str, json_path: str = "$"):
        self.json_path = json_path
        super().__init__(f"{json_path}: {message}")


@dataclass(frozen=True)
class Box:
    cls: str
    bbox: tuple[float, float, float, float]
    confidence: float
    light_state: str | None = None
    sign_kind: str | None = None

    @property
    def is_actor(self) -> bool:
        return self.cls in ACTOR_KINDS

    @property
    def anchor(self) -> tuple[float, float]:
        """Ground-contact estimate: bottom-center of the box."""
        x_min, _, x_max, y_max = self.bbox
        return ((x_min + x_max) / 2.0, y_max)


@dataclass(frozen=True)
class DetectionSet:
    image_size: tuple[int, int]
    boxes: tuple[Box, ...]
    lane_boundaries: tuple[tuple[tuple[float, float], ...], ...]

    @property
    def actor_boxes(self) -> tuple[Box, ...]:
        return tuple(box for box in self.boxes if box.is_actor)


def _schema() -> dict:
    text = resources.files("scenario_forge.vision").joinpath("detections.schema.json").read_text()
    return json.loads(text)


_SCHEMA = _schema()


def _geometry_checks(data: dict) -> None:
    width, height = data["image_size"]
    for i, box in enumerate(data["boxes"]):
        x_min, y_min, x_max, y_max = box["bbox"]
        path = f"$.boxes[{i}].bbox"
        if not (x_min < x_max and y_min < y_max):
            raise SchemaError("expected x_min < x_max and y_min < y_max", path)
        if x_max > width or y_max > height:
            raise SchemaError(f"box exceeds image bounds {width}x{height}", path)
    for i, polyline in enumerate(data["lane_boundaries"]):
        path = f"$.lane_boundaries[{i}]"
        ys = [point[1] for point in polyline]
        if any(b <= a for a, b in zip(ys, ys[1:])):
            raise SchemaError("polyline must be monotonically increasing in y", path)
        for x, y in polyline:
            if x > width or y > height:
                raise SchemaError(f"point exceeds image bounds {width}x{height}", path)


def detection_set_from_dict(data: dict, confidence_floor: float = DEFAULT_CONFIDENCE_FLOOR) -> DetectionSet:
    """Validate raw detections JSON data and build a DetectionSet.

    Boxes under the confidence floor are dropped after validation.
    """
    try:
        jsonschema.validate(data, _SCHEMA)
    except jsonschema.ValidationError as err:
        path = "$" + "".join(
            f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path
        )
        raise SchemaError(err.message, path) from err
    _geometry_checks(data)
    boxes = tuple(
        Box(
            cls=raw["class"],
            bbox=tuple(raw["bbox"]),
            confidence=raw["confidence"],
            light_state=raw.get("light_state"),
            sign_kind=raw.get("sign_kind"),
        )
        for raw in data["boxes"]
        if raw["confidence"] >= confidence_floor
    )
    boundaries = tuple(tuple(tuple(point) for point in line) for line in data["lane_boundaries"])
    return DetectionSet(image_size=tuple(data["image_size"]), boxes=boxes, lane_boundaries=boundaries)


def load_detections(path, confidence_floor: float = DEFAULT_CONFIDENCE_FLOOR) -> DetectionSet:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as err:
        raise IoError(f"cannot read detections file {path}: {err}") from err
    except json.JSONDecodeError as err:
        raise SchemaError(f"not valid JSON: {err}") from err
    return detection_set_from_dict(data, confidence_floor)
