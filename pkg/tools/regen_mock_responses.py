#!/usr/bin/env python3
"""Regenerate the digest-keyed mock LLM responses for the benchmark fixtures.

The mock provider looks responses up by a digest of the full prompt, so any
intentional change to the prompt wording requires re-running this script:

    python3 tools/regen_mock_responses.py
"""

from __future__ import annotations

import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from scenario_forge.textual import build_prompt  # noqa: E402

FIXTURES = REPO / "tests" / "fixtures"
MOCK_DIR = FIXTURES / "mock_llm"

RESPONSES = {
    "rec_001": """Here is the extracted scenario.

<YAML>
environment:
  weather: rainy
  time: daytime
road_network:
  road_type: intersection
  traffic_signs: []
  traffic_light: red_light
  lane_number: 4
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
  lane_idx: unspecified
  speed: 10
- actor_type: car
  behavior: go_forward
  position:
    reference_point: ego_vehicle
    relative_position: front_left
  lane_idx: unspecified
  speed: unspecified
</YAML>
""",
    # Step-walkthrough key style on purpose: exercises the synonym mapping.
    "rec_002": """Step 1: the weather is sunny. Step 2: daytime. Writing the document now.

<YAML>
environment:
  weather: sunny
  time: daytime
road_network:
  road_type: straight
  traffic_sign: speed_limit_sign
  lane_number: 3
ego_vehicle:
  current_behavior: go_forward
  lane_idx: 1
  speed: 30
npc_actors:
- type: car
  current_behavior: go_forward
  position_target: ego_vehicle
  position_relation: front_right
  speed: 20
</YAML>
""",
    "rec_003": """<YAML>
environment:
  weather: cloudy
  time: nighttime
road_network:
  road_type: intersection
  traffic_signs: []
  traffic_light: green_light
  lane_number: 4
ego_vehicle:
  behavior: go_forward
  position: unspecified
  lane_idx: 1
  speed: 20
npc_actors:
- actor_type: car
  behavior: go_forward
  position:
    reference_point: ego_vehicle
    relative_position: front
  lane_idx: 1
  speed: 15
</YAML>
""",
    "sweep_001": """<YAML>
environment:
  weather: rainy
  time: daytime
road_network:
  road_type: unspecified
  traffic_signs: []
  traffic_light: red_light
  lane_number: 4
ego_vehicle:
  behavior: go_forward
  position: unspecified
  lane_idx: unspecified
  speed: 5
npc_actors: []
</YAML>
""",
}


def main() -> None:
    MOCK_DIR.mkdir(parents=True, exist_ok=True)
    for stale in MOCK_DIR.glob("*.txt"):
        stale.unlink()
    for record_id, response in RESPONSES.items():
        group = "sweep" if record_id.startswith("sweep") else "benchmark"
        description = (FIXTURES / group / record_id / "description.txt").read_text(
            encoding="utf-8"
        ).strip()
        digest = build_prompt(description).digest()
        path = MOCK_DIR / f"{digest}.txt"
        path.write_text(response, encoding="utf-8")
        print(f"{record_id}: {path.name}")


if __name__ == "__main__":
    main()
