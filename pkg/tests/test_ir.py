"""Scenario IR: parsing, emission, validation, tree encoding."""

from __future__ import annotations

import random

import pytest
import yaml
from hypothesis import given, settings
from hypothesis import strategies as st

from scenario_forge.ir import (
    DslSyntaxError,
    NpcActor,
    Position,
    Scenario,
    StructureError,
    UNSET,
    VocabularyError,
    canonical_tree,
    defaulted,
    emit_dsl,
    parse_dsl,
    specified,
    validate,
)

from genlib import random_scenario

MINIMAL_DOC = """\
environment:
  weather: rainy
  time: daytime
ego_vehicle:
  lane_idx: 2
"""


def test_parse_direct_field_mapping():
    s = parse_dsl(MINIMAL_DOC)
    assert s.environment.weather == specified("rainy")
    assert s.environment.time == specified("daytime")
    assert s.ego.lane_idx == specified(2)
    assert not s.ego.behavior.has_value
    assert not s.road_network.road_type.has_value
    assert s.npc_actors == ()


def test_parse_absent_key_is_unspecified():
    s = parse_dsl("environment:\n  time: daytime\nego_vehicle:\n  lane_idx: 0\n")
    assert not s.environment.weather.has_value


def test_parse_unknown_vocabulary_rejected():
    with pytest.raises(VocabularyError) as err:
        parse_dsl("environment:\n  weather: volcanic\nego_vehicle:\n  lane_idx: 0\n")
    assert "weather" in str(err.value) and "volcanic" in str(err.value)


def test_parse_fuzzed_vocabulary_corpus():
    rng = random.Random(7)
    fields = [
        ("environment", "weather"),
        ("environment", "time"),
        ("road_network", "road_type"),
        ("road_network", "traffic_light"),
    ]
    for _ in range(50):
        section, key = rng.choice(fields)
        word = "".join(rng.choice("abcdefghijklmnop") for _ in range(8))
        doc = f"{section}:\n  {key}: {word}\nego_vehicle:\n  lane_idx: 0\n"
        with pytest.raises(VocabularyError):
            parse_dsl(doc)


def test_parse_missing_ego_is_structure_error():
    with pytest.raises(StructureError):
        parse_dsl("environment:\n  weather: rainy\n")


@pytest.mark.parametrize(
    "doc",
    [
        "environment\nego_vehicle:\n  lane_idx: 0\n",
        "environment:\n\tweather: rainy\nego_vehicle:\n  lane_idx: 0\n",
        "unknown_section:\n  a: b\nego_vehicle:\n  lane_idx: 0\n",
        "ego_vehicle:\n  lane_idx: 0\n  lane_idx: 1\n",
        "ego_vehicle:\n  wheels: 4\n",
    ],
)
def test_parse_malformed_documents(doc):
    with pytest.raises(DslSyntaxError):
        parse_dsl(doc)


def test_parse_negative_speed_rejected():
    with pytest.raises(VocabularyError):
        parse_dsl("ego_vehicle:\n  speed: -3\n")


def test_defaulted_annotation_round_trip():
    s = Scenario(ego=_ego(speed=defaulted(17, seed=99)))
    text = emit_dsl(s)
    assert "speed: 17  # defaulted" in text
    back = parse_dsl(text)
    assert back.ego.speed.state == "defaulted"
    assert back.ego.speed.value == 17
    assert back == s  # seed is provenance metadata, not part of equality


def test_defaulted_position_block_round_trip():
    s = Scenario(ego=_ego(position=defaulted(Position("ego_vehicle", "on"), seed=3)))
    text = emit_dsl(s)
    assert "position:  # defaulted" in text
    assert parse_dsl(text) == s


def _ego(**kwargs):
    from scenario_forge.ir import EgoActor

    return EgoActor(**kwargs)


def test_emit_lists_npcs_in_canonical_order():
    npc = lambda t, lane, rel: NpcActor(  # noqa: E731
        actor_type=t,
        lane_idx=specified(lane),
        position=specified(Position("ego_vehicle", rel)),
    )
    a, b, c = npc("car", 2, "behind"), npc("truck", 0, "front"), npc("car", 0, "front_left")
    one = Scenario(npc_actors=(a, b, c))
    two = Scenario(npc_actors=(c, a, b))
    assert emit_dsl(one) == emit_dsl(two)
    # lane 0 before lane 2; within lane 0, front before front_left
    text = emit_dsl(one)
    assert text.index("truck") < text.index("front_left")
    assert text.index("front_left") < text.index("behind")


def test_emit_golden_three_npcs(golden):
    s = Scenario(
        environment=_env("rainy", "daytime"),
        road_network=_road("intersection", ("stop_sign",), "red_light", 4),
        ego=_ego(behavior=specified("go_forward"), lane_idx=specified(1), speed=specified(25)),
        npc_actors=(
            NpcActor("car", behavior=specified("turn_left"), position=specified(Position("ego_vehicle", "front_left")), lane_idx=specified(0), speed=specified(20)),
            NpcActor("truck", behavior=specified("go_forward"), position=specified(Position("ego_vehicle", "front")), lane_idx=specified(1), speed=defaulted(12, 42)),
            NpcActor("pedestrian", position=specified(Position("stop_sign", "on")), provenance="visual"),
        ),
    )
    golden.check("emit_three_npcs.scn.yaml", emit_dsl(s))


def _env(weather, time):
    from scenario_forge.ir import Environment

    return Environment(weather=specified(weather), time=specified(time))


def _road(road_type, signs, light, lanes):
    from scenario_forge.ir import RoadNetwork

    return RoadNetwork(
        road_type=specified(road_type),
        traffic_signs=signs,
        traffic_light=specified(light),
        lane_number=specified(lanes),
    )


def test_emitted_documents_are_yaml_compatible():
    rng = random.Random(11)
    for _ in range(25):
        text = emit_dsl(random_scenario(rng))
        loaded = yaml.safe_load(text)
        assert set(loaded) == {"environment", "road_network", "ego_vehicle", "npc_actors"}


def test_round_trip_seeded_sample():
    rng = random.Random(1234)
    for _ in range(200):
        s = random_scenario(rng)
        assert parse_dsl(emit_dsl(s)) == s


@settings(max_examples=120, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_round_trip_property(seed):
    s = random_scenario(random.Random(seed))
    assert parse_dsl(emit_dsl(s)) == s


def test_vocabulary_closure_of_emitted_leaves():
    rng = random.Random(5)
    for _ in range(50):
        s = random_scenario(rng)
        parse_dsl(emit_dsl(s))  # must not raise VocabularyError


# ---------------------------------------------------------------------------
# validate


def test_validate_valid_scenario_is_empty_report():
    report = validate(parse_dsl(MINIMAL_DOC))
    assert report.is_valid
    assert report.violations == ()


def test_validate_lane_out_of_range():
    s = Scenario(
        road_network=_road("straight", (), "absent", 3),
        npc_actors=(NpcActor("car", lane_idx=specified(5)),),
    )
    report = validate(s)
    assert not report.is_valid
    assert report.violations[0].path == "npc_actors[0].lane_idx"


def test_validate_overlapping_fully_specified_positions():
    cell = dict(lane_idx=specified(1), position=specified(Position("ego_vehicle", "front")))
    s = Scenario(npc_actors=(NpcActor("car", **cell), NpcActor("car", **cell)))
    report = validate(s)
    assert any("same fully-specified position" in v.message for v in report.violations)


def test_validate_partially_specified_positions_do_not_overlap():
    s = Scenario(
        npc_actors=(
            NpcActor("car", position=specified(Position("ego_vehicle", "front"))),
            NpcActor("car", position=specified(Position("ego_vehicle", "front"))),
        )
    )
    assert validate(s).is_valid


# ---------------------------------------------------------------------------
# canonical tree


def test_tree_empty_scenario_is_five_nodes():
    tree = canonical_tree(Scenario())
    assert tree.node_count() == 5
    assert tree.label == "scenario"
    assert [c.label for c in tree.children] == ["environment", "road_network", "actors"]


def test_tree_one_more_leaf_adds_one_node():
    base = Scenario()
    assert canonical_tree(base).node_count() == 5
    one = Scenario(environment=_env_weather("rainy"))
    assert canonical_tree(one).node_count() == 6
    two = Scenario(environment=_env_weather("rainy"), ego=_ego(speed=specified(10)))
    assert canonical_tree(two).node_count() == 7


def _env_weather(w):
    from scenario_forge.ir import Environment

    return Environment(weather=specified(w))


def test_tree_hand_counted_benchmark_style_scenario():
    # root(1) + environment(1+2) + road_network(1 + road_type + 3 signs + light + lanes = 7)
    # + actors(1) + ego(1 + behavior + ref + rel + lane + speed = 6)
    # + 2 npcs(1 + type + behavior + ref + rel + lane + speed = 7 each)
    s = Scenario(
        environment=_env("foggy", "nighttime"),
        road_network=_road("intersection", ("stop_sign", "speed_limit_sign", "stop_sign"), "green_light", 4),
        ego=_ego(
            behavior=specified("go_forward"),
            position=specified(Position("intersection", "on")),
            lane_idx=specified(2),
            speed=specified(20),
        ),
        npc_actors=(
            NpcActor("car", specified("go_forward"), specified(Position("ego_vehicle", "front")), specified(2), specified(15)),
            NpcActor("bus", specified("static"), specified(Position("ego_vehicle", "right")), specified(3), specified(0)),
        ),
    )
    assert canonical_tree(s).node_count() == 1 + 3 + 7 + 1 + 6 + 14


def test_tree_deterministic_under_npc_permutation():
    rng = random.Random(21)
    for _ in range(30):
        s = random_scenario(rng, max_npcs=4)
        perm = list(s.npc_actors)
        rng.shuffle(perm)
        permuted = Scenario(s.environment, s.road_network, s.ego, tuple(perm))
        assert canonical_tree(permuted) == canonical_tree(s)


def test_tree_unspecified_is_structural_absence():
    s = Scenario(ego=_ego(speed=specified(10)))
    labels = list(canonical_tree(s).iter_labels())
    assert "speed: 10" in labels
    assert not any(label.startswith("behavior") for label in labels)
