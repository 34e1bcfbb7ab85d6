"""Script emission: one ConcreteScenario, three targets.

All targets consume the same placed scenario, so adding a target never
touches the upstream passes.  The CARLA and LGSVL outputs are syntactically
faithful API-call sequences (not executed here); the minisim output is the
native JSON consumed by the testbed.  Every emission is a pure function of
the ConcreteScenario: byte-identical for identical inputs.
"""

from __future__ import annotations

import json

from .lower import ConcreteScenario

SCRIPT_TARGETS = ("carla", "lgsvl", "minisim")

# Weather presets for the simulator APIs, keyed by IR weather kind.
_CARLA_WEATHER = {
    "sunny": "cloudiness=10.0, precipitation=0.0, wetness=0.0",
    "clear": "cloudiness=0.0, precipitation=0.0, wetness=0.0",
    "cloudy": "cloudiness=80.0, precipitation=0.0, wetness=0.0",
    "rainy": "cloudiness=90.0, precipitation=80.0, wetness=60.0",
    "wet": "cloudiness=40.0, precipitation=0.0, wetness=80.0",
    "foggy": "cloudiness=70.0, precipitation=0.0, wetness=0.0, fog_density=80.0",
    "snowy": "cloudiness=90.0, precipitation=60.0, wetness=30.0",
}
_LGSVL_WEATHER = {
    "sunny": "rain=0.0, fog=0.0, wetness=0.0",
    "clear": "rain=0.0, fog=0.0, wetness=0.0",
    "cloudy": "rain=0.0, fog=0.2, wetness=0.0",
    "rainy": "rain=0.8, fog=0.1, wetness=0.6",
    "wet": "rain=0.0, fog=0.0, wetness=0.8",
    "foggy": "rain=0.0, fog=0.8, wetness=0.0",
    "snowy": "rain=0.6, fog=0.3, wetness=0.3",
}
_CARLA_SUN = {"daytime": 70.0, "nighttime": -20.0}
_LGSVL_CLOCK = {"daytime": 12.0, "nighttime": 0.0}

_CARLA_BLUEPRINT = {
    "car": "vehicle.lincoln.mkz_2020",
    "truck": "vehicle.carlamotors.carlacola",
    "bus": "vehicle.mitsubishi.fusorosa",
    "train": "vehicle.carlamotors.carlacola",
    "motorcycle": "vehicle.yamaha.yzf",
    "bicycle": "vehicle.diamondback.century",
    "pedestrian": "walker.pedestrian.0001",
    "ego": "vehicle.tesla.model3",
}


def _road_header(cs: ConcreteScenario, comment: str) -> str:
    light = cs.traffic_light or "none"
    return (
        f"{comment} road network: section {cs.section.id} "
        f"({cs.section.road_type}, {cs.section.lane_count} lanes, "
        f"traffic light: {light}, signs: {list(cs.section.traffic_signs)})"
    )


def stop_line_s(cs: ConcreteScenario) -> float | None:
    """Stop-line position (meters along the lane), when a light is active."""
    if cs.traffic_light is None:
        return None
    lane = cs.section.lanes[0]
    return round(lane.length * 2.0 / 3.0, 2)


def _emit_carla(cs: ConcreteScenario) -> str:
    out = [
        _road_header(cs, "#"),
        f"# generated by scenario-forge (seed {cs.seed})",
        "import carla",
        "",
        'client = carla.Client("localhost", 2000)',
        "client.set_timeout(10.0)",
        "world = client.get_world()",
        "blueprints = world.get_blueprint_library()",
        "",
        "# environment",
        f"weather = carla.WeatherParameters({_CARLA_WEATHER[cs.weather]}, "
        f"sun_altitude_angle={_CARLA_SUN[cs.time]})",
        "world.set_weather(weather)",
    ]
    if cs.traffic_light is not None:
        state = "Red" if cs.traffic_light == "red" else "Green"
        out += [
            "for light in world.get_actors().filter('traffic.traffic_light'):",
            f"    light.set_state(carla.TrafficLightState.{state})",
            "    light.freeze(True)",
        ]
    for actor in cs.actors:
        blueprint = _CARLA_BLUEPRINT["ego" if actor.role == "ego" else actor.actor_type]
        name = actor.actor_id
        out += [
            "",
            f"# {name}: {actor.actor_type} behavior={actor.behavior} speed={actor.speed_mps} m/s",
            f'{name}_bp = blueprints.find("{blueprint}")',
            f'{name}_start = lane_waypoint(world, "{actor.start[0]}", {actor.start[1]})',
            f"{name} = world.spawn_actor({name}_bp, {name}_start.transform)",
            f'{name}_goal = lane_waypoint(world, "{actor.target[0]}", {actor.target[1]})',
        ]
        if actor.role == "ego":
            out.append(f'{name}.set_attribute("role_name", "hero")')
    return "\n".join(out) + "\n"


def _emit_lgsvl(cs: ConcreteScenario) -> str:
    out = [
        _road_header(cs, "#"),
        f"# generated by scenario-forge (seed {cs.seed})",
        "import lgsvl",
        "",
        'sim = lgsvl.Simulator("localhost", 8181)',
        "",
        "# environment",
        f"sim.weather = lgsvl.WeatherState({_LGSVL_WEATHER[cs.weather]})",
        f"sim.set_time_of_day({_LGSVL_CLOCK[cs.time]})",
    ]
    for actor in cs.actors:
        name = actor.actor_id
        agent_type = "AgentType.EGO" if actor.role == "ego" else "AgentType.NPC"
        if actor.actor_type == "pedestrian":
            agent_type = "AgentType.PEDESTRIAN"
        out += [
            "",
            f"# {name}: {actor.actor_type} behavior={actor.behavior} speed={actor.speed_mps} m/s",
            f"{name}_state = lgsvl.AgentState()",
            f'{name}_state.transform = sim.lane_waypoint("{actor.start[0]}", {actor.start[1]})',
            f"{name}_state.velocity = forward_velocity({name}_state.transform, {actor.speed_mps})",
            f'{name} = sim.add_agent("{name}_{actor.actor_type}", lgsvl.{agent_type}, {name}_state)',
            f'{name}.follow_lane_to(sim.lane_waypoint("{actor.target[0]}", {actor.target[1]}))',
        ]
    return "\n".join(out) + "\n"


def minisim_dict(cs: ConcreteScenario) -> dict:
    return {
        "section": {
            "id": cs.section.id,
            "road_type": cs.section.road_type,
            "lanes": [
                {"lane_id": lane.lane_id, "length_m": lane.length, "spacing_m": lane.waypoint_spacing}
                for lane in cs.section.lanes
            ],
            "stop_line_s": stop_line_s(cs),
        },
        "environment": {"weather": cs.weather, "time": cs.time},
        "traffic_light": cs.traffic_light,
        "actors": [
            {
                "id": actor.actor_id,
                "role": actor.role,
                "actor_type": actor.actor_type,
                "behavior": actor.behavior,
                "lane_index": actor.lane_index,
                "start_s": round(actor.start[1] * cs.section.lanes[actor.lane_index].waypoint_spacing, 2),
                "target_lane_index": actor.target_lane_index,
                "target_s": round(
                    actor.target[1] * cs.section.lanes[actor.target_lane_index].waypoint_spacing, 2
                ),
                "speed_mps": actor.speed_mps,
                "length_m": actor.length_m,
                "defaulted": list(actor.defaulted_fields),
            }
            for actor in cs.actors
        ],
        "seed": cs.seed,
        "defaulted": list(cs.defaulted_fields),
    }


def _emit_minisim(cs: ConcreteScenario) -> str:
    return json.dumps(minisim_dict(cs), indent=2) + "\n"


def emit_script(cs: ConcreteScenario, target: str) -> str:
    """Render one target's script for a placed scenario."""
    if target == "carla":
        return _emit_carla(cs)
    if target == "lgsvl":
        return _emit_lgsvl(cs)
    if target == "minisim":
        return _emit_minisim(cs)
    raise ValueError(f"unknown target {target!r}; expected one of {SCRIPT_TARGETS}")


SCRIPT_SUFFIXES = {
    "carla": ".carla.py.txt",
    "lgsvl": ".lgsvl.py.txt",
    "minisim": ".minisim.json",
}
