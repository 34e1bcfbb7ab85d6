"""Map catalog: searchable simulator-map sections.

Sections are symbolic at desk scale (lane ids, lengths, waypoint spacing)
rather than parsed from real simulator maps; emitted scripts reference the
lane ids symbolically.  A small default catalog ships with the package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from scenario_forge.ir import RoadNetwork


class NoSectionFound(Exception):
    """No catalog section satisfies the specified road-network constraints."""

    def __init__(self, constraints: list[str]):
        self.constraints = constraints
        super().__init__("no map section satisfies: " + "; ".join(constraints))


@dataclass(frozen=True)
class Lane:
    lane_id: str
    length: float
    waypoint_spacing: float

    def __post_init__(self) -> None:
        if self.waypoint_spacing <= 0:
            raise ValueError("waypoint_spacing must be positive")

    @property
    def waypoint_count(self) -> int:
        return int(self.length // self.waypoint_spacing) + 1


@dataclass(frozen=True)
class MapSection:
    id: str
    road_type: str
    lane_count: int
    has_traffic_light: bool
    traffic_signs: tuple[str, ...]
    lanes: tuple[Lane, ...]

    def __post_init__(self) -> None:
        if self.lane_count != len(self.lanes):
            raise ValueError(f"section {self.id}: lane_count != len(lanes)")

    @property
    def capacity(self) -> int:
        return sum(lane.waypoint_count for lane in self.lanes)


@dataclass(frozen=True)
class MapCatalog:
    sections: tuple[MapSection, ...]

    @classmethod
    def from_dict(cls, data: dict) -> "MapCatalog":
        sections = []
        for raw in data["sections"]:
            sections.append(
                MapSection(
                    id=raw["id"],
                    road_type=raw["road_type"],
                    lane_count=raw["lane_count"],
                    has_traffic_light=raw["has_traffic_light"],
                    traffic_signs=tuple(raw.get("traffic_signs", ())),
                    lanes=tuple(
                        Lane(l["lane_id"], float(l["length"]), float(l["waypoint_spacing"]))
                        for l in raw["lanes"]
                    ),
                )
            )
        return cls(tuple(sections))

    @classmethod
    def from_file(cls, path) -> "MapCatalog":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def default_catalog() -> MapCatalog:
    text = resources.files("scenario_forge.codegen").joinpath("default_catalog.json").read_text()
    return MapCatalog.from_dict(json.loads(text))


def _constraints(rn: RoadNetwork) -> list[tuple[str, callable]]:
    checks: list[tuple[str, callable]] = []
    if rn.road_type.has_value:
        road_type = rn.road_type.value
        checks.append((f"road_type == {road_type}", lambda s: s.road_type == road_type))
    if rn.lane_number.has_value:
        lanes = rn.lane_number.value
        checks.append((f"lane_count >= {lanes}", lambda s: s.lane_count >= lanes))
    if rn.traffic_light.has_value:
        wants_light = rn.traffic_light.value != "absent"
        checks.append(
            (
                "has a traffic light" if wants_light else "has no traffic light",
                lambda s: s.has_traffic_light == wants_light,
            )
        )
    for sign in rn.traffic_signs:
        checks.append((f"offers {sign}", lambda s, sign=sign: sign in s.traffic_signs))
    return checks


def find_map_section(catalog: MapCatalog, rn: RoadNetwork) -> MapSection:
    """First section (catalog order) matching all specified constraints.

    Unspecified constraints match anything.  Raises NoSectionFound listing
    the constraints no single section could satisfy together.
    """
    if not catalog.sections:
        raise NoSectionFound(["catalog is empty"])
    checks = _constraints(rn)
    for section in catalog.sections:
        if all(check(section) for _, check in checks):
            return section
    unsatisfiable = [
        label for label, check in checks if not any(check(s) for s in catalog.sections)
    ]
    raise NoSectionFound(unsatisfiable or [label for label, _ in checks])
