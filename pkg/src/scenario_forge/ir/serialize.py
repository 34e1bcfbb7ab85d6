"""Canonical scenario document format: parse and emit.

The format is a YAML-compatible key/value layout (see docs/format-ir.md)
with top-level keys ``environment``, ``road_network``, ``ego_vehicle`` and
``npc_actors``.  Absent keys and the literal token ``unspecified`` both map
to the unspecified tri-state; default-filled values carry a ``# defaulted``
comment.  The parser is deliberately line-oriented: the layout is a small
closed subset of YAML, and owning the parser lets round-trips preserve
tri-states exactly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import (
    ACTOR_KINDS,
    BEHAVIOR_KINDS,
    DEFAULTED,
    PROVENANCE_KINDS,
    REFERENCE_POINTS,
    RELATIVE_POSITIONS,
    ROAD_TYPES,
    SPECIFIED,
    TIME_KINDS,
    TRAFFIC_LIGHT_STATES,
    TRAFFIC_SIGN_KINDS,
    UNSET,
    WEATHER_KINDS,
    Environment,
    EgoActor,
    NpcActor,
    Position,
    RoadNetwork,
    Scenario,
    Tri,
)
from .validate import validate

SCENARIO_FILE_SUFFIX = ".scn.yaml"
UNSPECIFIED_TOKEN = "unspecified"


class ScenarioFormatError(ValueError):
    """Base class for scenario document errors."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        self.raw_response: str | None = None
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class DslSyntaxError(ScenarioFormatError):
    """The document does not follow the key/value layout."""


class VocabularyError(ScenarioFormatError):
    """A value falls outside the grammar's closed vocabulary."""


class StructureError(ScenarioFormatError):
    """A required structural element (e.g. the ego vehicle) is missing."""


# ---------------------------------------------------------------------------
# Tokenizer


@dataclass
class _Line:
    lineno: int
    indent: int
    item: bool
    key: str
    value: str | None
    defaulted: bool


_KEY_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def _tokenize(text: str) -> list[_Line]:
    lines: list[_Line] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if "\t" in raw:
            raise DslSyntaxError("tab characters are not allowed", lineno)
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        indent = len(raw) - len(raw.lstrip(" "))
        body = raw.strip()
        item = body.startswith("- ")
        if item:
            body = body[2:]
            indent += 2
        defaulted = False
        if "#" in body:
            body, comment = body.split("#", 1)
            body = body.rstrip()
            defaulted = comment.strip() == "defaulted"
        if ":" not in body:
            raise DslSyntaxError(f"expected 'key: value', got {raw.strip()!r}", lineno)
        key, _, rest = body.partition(":")
        key = key.strip()
        if not _KEY_RE.match(key):
            raise DslSyntaxError(f"invalid key {key!r}", lineno)
        value = rest.strip() or None
        lines.append(_Line(lineno, indent, item, key, value, defaulted))
    return lines


# ---------------------------------------------------------------------------
# Block parser: generic nested structure


@dataclass
class _Entry:
    node: object  # str scalar | list[str] flow list | dict | list[dict]
    defaulted: bool
    lineno: int


def _parse_flow_list(value: str, lineno: int) -> list[str]:
    inner = value[1:-1].strip()
    if not inner:
        return []
    return [part.strip() for part in inner.split(",")]


def _parse_mapping(
    lines: list[_Line], pos: int, indent: int, consume_first_item: bool = False
) -> tuple[dict[str, _Entry], int]:
    mapping: dict[str, _Entry] = {}
    first = True
    while pos < len(lines):
        line = lines[pos]
        if line.indent != indent:
            if line.indent > indent:
                raise DslSyntaxError("unexpected indentation", line.lineno)
            break
        if line.item and not (first and consume_first_item):
            break
        first = False
        if line.key in mapping:
            raise DslSyntaxError(f"duplicate key {line.key!r}", line.lineno)
        pos += 1
        if line.value is not None:
            node: object = line.value
            if line.value.startswith("[") and line.value.endswith("]"):
                node = _parse_flow_list(line.value, line.lineno)
            mapping[line.key] = _Entry(node, line.defaulted, line.lineno)
            continue
        # Block opener: nested mapping or list follows.
        if pos >= len(lines) or lines[pos].indent <= indent and not lines[pos].item:
            raise DslSyntaxError(f"key {line.key!r} opens an empty block", line.lineno)
        child = lines[pos]
        if child.item:
            items, pos = _parse_list(lines, pos, child.indent)
            mapping[line.key] = _Entry(items, line.defaulted, line.lineno)
        elif child.indent > indent:
            sub, pos = _parse_mapping(lines, pos, child.indent)
            mapping[line.key] = _Entry(sub, line.defaulted, line.lineno)
        else:
            raise DslSyntaxError(f"key {line.key!r} opens an empty block", line.lineno)
    return mapping, pos


def _parse_list(lines: list[_Line], pos: int, indent: int) -> tuple[list[dict[str, _Entry]], int]:
    items: list[dict[str, _Entry]] = []
    while pos < len(lines) and lines[pos].item and lines[pos].indent == indent:
        item, pos = _parse_mapping(lines, pos, indent, consume_first_item=True)
        items.append(item)
    return items, pos


# ---------------------------------------------------------------------------
# Mapping the generic structure onto the IR


def _tri_from_scalar(entry: _Entry, coerce, path: str) -> Tri:
    if not isinstance(entry.node, str):
        raise DslSyntaxError(f"{path}: expected a scalar value", entry.lineno)
    if entry.node == UNSPECIFIED_TOKEN:
        return UNSET
    value = coerce(entry.node, path, entry.lineno)
    return Tri(DEFAULTED if entry.defaulted else SPECIFIED, value)


def _vocab_coercer(vocab: tuple[str, ...]):
    def coerce(text: str, path: str, lineno: int):
        if text not in vocab:
            raise VocabularyError(f"{path}: value {text!r} not in {sorted(vocab)}", lineno)
        return text

    return coerce


def _count_coercer(text: str, path: str, lineno: int) -> int:
    try:
        value = int(text)
    except ValueError:
        raise VocabularyError(f"{path}: expected a non-negative integer, got {text!r}", lineno) from None
    if value < 0:
        raise VocabularyError(f"{path}: expected a non-negative integer, got {value}", lineno)
    return value


def _reject_unknown(mapping: dict[str, _Entry], allowed: tuple[str, ...], path: str) -> None:
    for key, entry in mapping.items():
        if key not in allowed:
            raise DslSyntaxError(f"{path}: unknown key {key!r}", entry.lineno)


def _tri_field(mapping: dict[str, _Entry], key: str, coerce, path: str) -> Tri:
    if key not in mapping:
        return UNSET
    return _tri_from_scalar(mapping[key], coerce, f"{path}.{key}")


def _parse_position(mapping: dict[str, _Entry], path: str) -> Tri:
    block = mapping.get("position")
    flat_keys = [k for k in ("reference_point", "relative_position") if k in mapping]
    if block is not None and flat_keys:
        raise DslSyntaxError(
            f"{path}: position given both as a block and as flat keys", block.lineno
        )
    if block is not None:
        if isinstance(block.node, str):
            if block.node == UNSPECIFIED_TOKEN:
                return UNSET
            raise DslSyntaxError(f"{path}.position: expected a block or 'unspecified'", block.lineno)
        if not isinstance(block.node, dict):
            raise DslSyntaxError(f"{path}.position: expected a block", block.lineno)
        sub = block.node
        _reject_unknown(sub, ("reference_point", "relative_position"), f"{path}.position")
        missing = [k for k in ("reference_point", "relative_position") if k not in sub]
        if missing:
            raise DslSyntaxError(f"{path}.position: missing {missing[0]!r}", block.lineno)
        ref = _tri_from_scalar(sub["reference_point"], _vocab_coercer(REFERENCE_POINTS), f"{path}.position.reference_point")
        rel = _tri_from_scalar(sub["relative_position"], _vocab_coercer(RELATIVE_POSITIONS), f"{path}.position.relative_position")
        if not (ref.has_value and rel.has_value):
            return UNSET
        state = DEFAULTED if block.defaulted else SPECIFIED
        return Tri(state, Position(ref.value, rel.value))
    if flat_keys:
        ref = _tri_field(mapping, "reference_point", _vocab_coercer(REFERENCE_POINTS), path)
        rel = _tri_field(mapping, "relative_position", _vocab_coercer(RELATIVE_POSITIONS), path)
        if not rel.has_value:
            return UNSET
        # A relation without a stated reference defaults to the ego vehicle.
        return Tri(SPECIFIED, Position(ref.value_or("ego_vehicle"), rel.value))
    return UNSET


_ACTOR_KEYS = ("behavior", "position", "reference_point", "relative_position", "lane_idx", "speed")


def _parse_ego(mapping: dict[str, _Entry], path: str) -> EgoActor:
    _reject_unknown(mapping, _ACTOR_KEYS, path)
    return EgoActor(
        behavior=_tri_field(mapping, "behavior", _vocab_coercer(BEHAVIOR_KINDS), path),
        position=_parse_position(mapping, path),
        lane_idx=_tri_field(mapping, "lane_idx", _count_coercer, path),
        speed=_tri_field(mapping, "speed", _count_coercer, path),
    )


def _parse_npc(mapping: dict[str, _Entry], path: str) -> NpcActor:
    _reject_unknown(mapping, _ACTOR_KEYS + ("actor_type", "provenance"), path)
    if "actor_type" not in mapping:
        raise StructureError(f"{path}: npc actor without an actor_type")
    type_entry = mapping["actor_type"]
    if not isinstance(type_entry.node, str) or type_entry.node == UNSPECIFIED_TOKEN:
        raise VocabularyError(f"{path}.actor_type: an actor type is required", type_entry.lineno)
    actor_type = _vocab_coercer(ACTOR_KINDS)(type_entry.node, f"{path}.actor_type", type_entry.lineno)
    provenance = "text"
    if "provenance" in mapping:
        entry = mapping["provenance"]
        if not isinstance(entry.node, str):
            raise DslSyntaxError(f"{path}.provenance: expected a scalar", entry.lineno)
        provenance = _vocab_coercer(PROVENANCE_KINDS)(entry.node, f"{path}.provenance", entry.lineno)
    return NpcActor(
        actor_type=actor_type,
        behavior=_tri_field(mapping, "behavior", _vocab_coercer(BEHAVIOR_KINDS), path),
        position=_parse_position(mapping, path),
        lane_idx=_tri_field(mapping, "lane_idx", _count_coercer, path),
        speed=_tri_field(mapping, "speed", _count_coercer, path),
        provenance=provenance,
    )


def _parse_signs(mapping: dict[str, _Entry], path: str) -> tuple[str, ...]:
    if "traffic_signs" not in mapping:
        return ()
    entry = mapping["traffic_signs"]
    node = entry.node
    if isinstance(node, str):
        if node == UNSPECIFIED_TOKEN:
            return ()
        node = [node]  # single sign written as a bare scalar
    if not isinstance(node, list) or not all(isinstance(v, str) for v in node):
        raise DslSyntaxError(f"{path}.traffic_signs: expected a list of signs", entry.lineno)
    coerce = _vocab_coercer(TRAFFIC_SIGN_KINDS)
    return tuple(coerce(v, f"{path}.traffic_signs", entry.lineno) for v in node)


def parse_dsl(text: str) -> Scenario:
    """Parse a canonical scenario document into a Scenario.

    Raises DslSyntaxError for malformed layout, VocabularyError for values
    outside the closed vocabularies, and StructureError when the ego vehicle
    section is missing.
    """
    lines = _tokenize(text)
    doc, pos = _parse_mapping(lines, 0, lines[0].indent if lines else 0)
    if pos != len(lines):
        raise DslSyntaxError("unexpected content", lines[pos].lineno)
    _reject_unknown(doc, ("environment", "road_network", "ego_vehicle", "npc_actors"), "document")

    environment = Environment()
    if "environment" in doc:
        entry = doc["environment"]
        if isinstance(entry.node, str):
            if entry.node != UNSPECIFIED_TOKEN:
                raise DslSyntaxError("environment: expected a block", entry.lineno)
        else:
            if not isinstance(entry.node, dict):
                raise DslSyntaxError("environment: expected a block", entry.lineno)
            sub = entry.node
            _reject_unknown(sub, ("weather", "time"), "environment")
            environment = Environment(
                weather=_tri_field(sub, "weather", _vocab_coercer(WEATHER_KINDS), "environment"),
                time=_tri_field(sub, "time", _vocab_coercer(TIME_KINDS), "environment"),
            )

    road_network = RoadNetwork()
    if "road_network" in doc:
        entry = doc["road_network"]
        if isinstance(entry.node, str):
            if entry.node != UNSPECIFIED_TOKEN:
                raise DslSyntaxError("road_network: expected a block", entry.lineno)
        else:
            if not isinstance(entry.node, dict):
                raise DslSyntaxError("road_network: expected a block", entry.lineno)
            sub = entry.node
            _reject_unknown(sub, ("road_type", "traffic_signs", "traffic_light", "lane_number"), "road_network")
            road_network = RoadNetwork(
                road_type=_tri_field(sub, "road_type", _vocab_coercer(ROAD_TYPES), "road_network"),
                traffic_signs=_parse_signs(sub, "road_network"),
                traffic_light=_tri_field(sub, "traffic_light", _vocab_coercer(TRAFFIC_LIGHT_STATES), "road_network"),
                lane_number=_tri_field(sub, "lane_number", _count_coercer, "road_network"),
            )

    if "ego_vehicle" not in doc:
        raise StructureError("document has no ego_vehicle section")
    ego_entry = doc["ego_vehicle"]
    if isinstance(ego_entry.node, str):
        if ego_entry.node != UNSPECIFIED_TOKEN:
            raise DslSyntaxError("ego_vehicle: expected a block", ego_entry.lineno)
        ego = EgoActor()
    elif isinstance(ego_entry.node, dict):
        ego = _parse_ego(ego_entry.node, "ego_vehicle")
    else:
        raise DslSyntaxError("ego_vehicle: expected a block", ego_entry.lineno)

    npcs: list[NpcActor] = []
    if "npc_actors" in doc:
        entry = doc["npc_actors"]
        if isinstance(entry.node, list) and all(isinstance(it, dict) for it in entry.node):
            for i, item in enumerate(entry.node):
                npcs.append(_parse_npc(item, f"npc_actors[{i}]"))
        elif entry.node == [] or entry.node == UNSPECIFIED_TOKEN:
            pass
        else:
            raise DslSyntaxError("npc_actors: expected a list of actors", entry.lineno)

    return Scenario(environment=environment, road_network=road_network, ego=ego, npc_actors=tuple(npcs))


# ---------------------------------------------------------------------------
# Emitter


def _token(tri: Tri, render=str) -> str:
    if not tri.has_value:
        return UNSPECIFIED_TOKEN
    text = render(tri.value)
    if tri.state == DEFAULTED:
        return f"{text}  # defaulted"
    return text


def _emit_position(out: list[str], indent: str, position: Tri) -> None:
    if not position.has_value:
        out.append(f"{indent}position: {UNSPECIFIED_TOKEN}")
        return
    marker = "  # defaulted" if position.state == DEFAULTED else ""
    pos = position.value
    out.append(f"{indent}position:{marker}")
    out.append(f"{indent}  reference_point: {pos.reference_point}")
    out.append(f"{indent}  relative_position: {pos.relative_position}")


def emit_dsl(scenario: Scenario) -> str:
    """Serialize a valid Scenario to its canonical document text.

    The output is deterministic: NPC actors appear in canonical order and
    every field is written, with unspecified fields as the literal token.
    """
    report = validate(scenario)
    if not report.is_valid:
        raise ValueError(f"cannot emit an invalid scenario:\n{report}")

    out: list[str] = []
    env = scenario.environment
    out.append("environment:")
    out.append(f"  weather: {_token(env.weather)}")
    out.append(f"  time: {_token(env.time)}")

    rn = scenario.road_network
    out.append("road_network:")
    out.append(f"  road_type: {_token(rn.road_type)}")
    out.append(f"  traffic_signs: [{', '.join(rn.traffic_signs)}]")
    out.append(f"  traffic_light: {_token(rn.traffic_light)}")
    out.append(f"  lane_number: {_token(rn.lane_number)}")

    ego = scenario.ego
    out.append("ego_vehicle:")
    out.append(f"  behavior: {_token(ego.behavior)}")
    _emit_position(out, "  ", ego.position)
    out.append(f"  lane_idx: {_token(ego.lane_idx)}")
    out.append(f"  speed: {_token(ego.speed)}")

    if not scenario.npc_actors:
        out.append("npc_actors: []")
    else:
        out.append("npc_actors:")
        for npc in scenario.npc_actors:
            out.append(f"- actor_type: {npc.actor_type}")
            out.append(f"  behavior: {_token(npc.behavior)}")
            _emit_position(out, "  ", npc.position)
            out.append(f"  lane_idx: {_token(npc.lane_idx)}")
            out.append(f"  speed: {_token(npc.speed)}")
            out.append(f"  provenance: {npc.provenance}")
    return "\n".join(out) + "\n"


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_dsl(fh.read())


def save_scenario(path, scenario: Scenario) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_dsl(scenario))
