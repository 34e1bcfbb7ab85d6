"""Prompt assembly for the language-model scenario extractor.

A prompt bundle has four fixed segments ahead of the user's description:
a role setting, a six-step extraction walkthrough, the scenario grammar,
and worked input/output examples.  The concatenation order is part of the
contract (the mock provider keys canned responses on a digest of the full
prompt text), so bundles are byte-stable for fixed inputs.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from scenario_forge.ir import (
    ACTOR_KINDS,
    BEHAVIOR_KINDS,
    RELATIVE_POSITIONS,
    ROAD_TYPES,
    TIME_KINDS,
    TRAFFIC_LIGHT_STATES,
    TRAFFIC_SIGN_KINDS,
    WEATHER_KINDS,
    ScenarioFormatError,
    parse_dsl,
)

YAML_START = "<YAML>"
YAML_END = "</YAML>"


class FewshotInvalid(ValueError):
    """A worked example's output does not parse as a scenario document."""


ROLE_SEGMENT = (
    "You are a traffic-scenario test engineer for autonomous driving software. "
    "Given a natural-language description of a driving situation, you produce a "
    "structured test scenario that captures exactly what the description states."
)


def _choices(values) -> str:
    return ", ".join(values)


STEPS_SEGMENT = f"""Work through the description step by step; do not skip a step.
Step 1: Determine the 'weather' of the scenario (one of: {_choices(WEATHER_KINDS)}). If the description does not mention weather, record it as unspecified.
Step 2: Determine the 'time' of day (one of: {_choices(TIME_KINDS)}), or unspecified.
Step 3: Determine the 'road_network': the 'road_type' (one of: {_choices(ROAD_TYPES)}), any 'traffic_sign' entries (one of: {_choices(TRAFFIC_SIGN_KINDS)}), the 'traffic_light' state (one of: {_choices(TRAFFIC_LIGHT_STATES)}), and the 'lane_number'. Record anything the description leaves out as unspecified.
Step 4: Derive the ego vehicle's 'current_behavior' (one of: {_choices(BEHAVIOR_KINDS)}), its 'position_target' and 'position_relation' ({_choices(RELATIVE_POSITIONS)}), its 'lane_idx', and its 'speed' in miles per hour.
Step 5: Identify every actor other than the ego vehicle. For each one, derive its 'type' (one of: {_choices(ACTOR_KINDS)}), 'current_behavior', 'position_target', 'position_relation', 'lane_idx', and 'speed'. Never invent actors the description does not mention.
Step 6: Write all elements from the steps above as a YAML document following the grammar below. The final YAML output must start with '{YAML_START}' and end with '{YAML_END}'."""


GRAMMAR_SEGMENT = f"""Scenario document grammar (every value set is closed; use the literal token 'unspecified' for anything the description does not state):
environment:
  weather: one of {_choices(WEATHER_KINDS)}
  time: one of {_choices(TIME_KINDS)}
road_network:
  road_type: one of {_choices(ROAD_TYPES)}
  traffic_signs: list drawn from {_choices(TRAFFIC_SIGN_KINDS)}
  traffic_light: one of {_choices(TRAFFIC_LIGHT_STATES)}
  lane_number: non-negative integer
ego_vehicle:
  behavior: one of {_choices(BEHAVIOR_KINDS)}
  position: reference_point (ego_vehicle, a road type, or a traffic sign) plus relative_position (one of {_choices(RELATIVE_POSITIONS)})
  lane_idx: non-negative integer, counted from the leftmost lane
  speed: non-negative integer, miles per hour
npc_actors: list of actors, each with
  actor_type: one of {_choices(ACTOR_KINDS)}
  behavior, position, lane_idx, speed: as for the ego vehicle"""


DEFAULT_FEWSHOT: tuple[tuple[str, str], ...] = (
    (
        "It is a rainy day. The ego car drives forward in the second lane of a "
        "three-lane road at 25 mph. A truck ahead in the same lane is going slowly.",
        """environment:
  weather: rainy
  time: daytime
road_network:
  road_type: straight
  traffic_signs: []
  traffic_light: unspecified
  lane_number: 3
ego_vehicle:
  behavior: go_forward
  position: unspecified
  lane_idx: 1
  speed: 25
npc_actors:
- actor_type: truck
  behavior: go_forward
  position:
    reference_point: ego_vehicle
    relative_position: front
  lane_idx: 1
  speed: 10
""",
    ),
    (
        "At night the ego vehicle waits at a red light at an intersection. A "
        "pedestrian crosses in front of it.",
        """environment:
  weather: unspecified
  time: nighttime
road_network:
  road_type: intersection
  traffic_signs: []
  traffic_light: red_light
  lane_number: unspecified
ego_vehicle:
  behavior: static
  position: unspecified
  lane_idx: unspecified
  speed: 0
npc_actors:
- actor_type: pedestrian
  behavior: go_forward
  position:
    reference_point: ego_vehicle
    relative_position: front
  lane_idx: unspecified
  speed: unspecified
""",
    ),
)


@dataclass(frozen=True)
class PromptBundle:
    """The four prompt segments plus the user's description."""

    role_segment: str
    steps_segment: str
    grammar_segment: str
    fewshot_segment: str
    user_description: str

    def text(self) -> str:
        return "\n\n".join(
            (
                self.role_segment,
                self.steps_segment,
                self.grammar_segment,
                self.fewshot_segment,
                self.user_description,
            )
        )

    def digest(self) -> str:
        return hashlib.sha256(self.text().encode("utf-8")).hexdigest()[:32]


def _render_fewshot(fewshot) -> str:
    parts = [
        "Here are worked examples of descriptions and their scenario documents."
    ]
    for description, document in fewshot:
        parts.append(f"Traffic description: {description}")
        parts.append(f"Scenario representation:\n{document.rstrip()}")
    parts.append(
        "Based on the steps, the grammar, and the examples above, convert the "
        "following traffic description to its scenario representation:"
    )
    return "\n\n".join(parts)


def build_prompt(description: str, fewshot=DEFAULT_FEWSHOT) -> PromptBundle:
    """Assemble the prompt for one description.

    Every worked example's output must itself parse as a scenario document;
    at least one example is required.
    """
    if not description or not description.strip():
        raise ValueError("description must be non-empty")
    fewshot = tuple(fewshot)
    if len(fewshot) < 1:
        raise FewshotInvalid("at least one worked example is required")
    for i, (_, document) in enumerate(fewshot):
        try:
            parse_dsl(document)
        except ScenarioFormatError as err:
            raise FewshotInvalid(f"example {i} output does not parse: {err}") from err
    return PromptBundle(
        role_segment=ROLE_SEGMENT,
        steps_segment=STEPS_SEGMENT,
        grammar_segment=GRAMMAR_SEGMENT,
        fewshot_segment=_render_fewshot(fewshot),
        user_description=description.strip(),
    )
