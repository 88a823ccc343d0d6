"""Scenario documents: road, zones, vehicles, obstacles, run settings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .codec import DEFAULT_ADDRESS
from .rf_channel import ChannelParams
from .vehicle import GovernorParams, VehicleState
from .zone_control import ValidationError, ZoneConfig, parse_clock, zone_from_dict


class ScenarioInvalid(ValueError):
    """Bad scenario document; location names the offending field or line."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location


@dataclass
class Scenario:
    road_length: float
    duration: float
    zones: list[ZoneConfig] = field(default_factory=list)
    vehicles: list[VehicleState] = field(default_factory=list)
    obstacles: list[float] = field(default_factory=list)
    dt: float = 0.1
    seed: int = 0
    clock: float = parse_clock("09:00")
    address: int = DEFAULT_ADDRESS
    channel: ChannelParams = ChannelParams()


def _number(doc, key, path, default=None, minimum=None):
    value = doc.get(key, default)
    if value is None:
        raise ScenarioInvalid(f"{path}.{key}", "missing required field")
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioInvalid(f"{path}.{key}", f"expected a number, got {value!r}")
    if minimum is not None and value <= minimum:
        raise ScenarioInvalid(f"{path}.{key}", f"must be > {minimum}, got {value}")
    return float(value)


def parse_scenario(doc: dict) -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioInvalid("scenario", "top level must be an object")

    road_length = _number(doc, "road_length", "scenario", minimum=0)
    duration = _number(doc, "duration", "scenario", minimum=0)
    dt = _number(doc, "dt", "scenario", default=0.1, minimum=0)
    seed = int(_number(doc, "seed", "scenario", default=0))
    try:
        clock = parse_clock(doc.get("clock", "09:00"))
    except ValidationError as exc:
        raise ScenarioInvalid("scenario.clock", str(exc))
    address = int(_number(doc, "address", "scenario", default=DEFAULT_ADDRESS))
    if not 0 <= address < 256:
        raise ScenarioInvalid("scenario.address", f"{address} outside 8-bit range")

    channel_doc = doc.get("channel", {})
    if not isinstance(channel_doc, dict):
        raise ScenarioInvalid("scenario.channel", "must be an object")
    try:
        channel = ChannelParams(
            bit_error_rate=float(channel_doc.get("bit_error_rate", 0.0)),
            rng_seed=seed)
    except (TypeError, ValueError) as exc:
        raise ScenarioInvalid("scenario.channel.bit_error_rate", str(exc))

    zones: list[ZoneConfig] = []
    seen_zone_ids = set()
    for i, zone_doc in enumerate(doc.get("zones", [])):
        path = f"zones[{i}]"
        try:
            zone = zone_from_dict(zone_doc)
        except ValidationError as exc:
            raise ScenarioInvalid(f"{path}.{exc.field}", str(exc))
        if zone.id in seen_zone_ids:
            raise ScenarioInvalid(f"{path}.id", f"duplicate zone id {zone.id!r}")
        if not (0 <= zone.interval[0] and zone.interval[1] <= road_length):
            raise ScenarioInvalid(f"{path}.interval",
                                  f"{list(zone.interval)} outside road [0, {road_length}]")
        seen_zone_ids.add(zone.id)
        zones.append(zone)

    gears = GovernorParams().gears
    vehicles: list[VehicleState] = []
    seen_vehicle_ids = set()
    for i, v_doc in enumerate(doc.get("vehicles", [])):
        path = f"vehicles[{i}]"
        if not isinstance(v_doc, dict):
            raise ScenarioInvalid(path, "vehicle entry must be an object")
        if "id" not in v_doc:
            raise ScenarioInvalid(f"{path}.id", "missing required field")
        vid = str(v_doc["id"])
        if vid in seen_vehicle_ids:
            raise ScenarioInvalid(f"{path}.id", f"duplicate vehicle id {vid!r}")
        position = _number(v_doc, "position", path, default=0.0, minimum=None)
        if not 0 <= position <= road_length:
            raise ScenarioInvalid(f"{path}.position",
                                  f"{position} outside road [0, {road_length}]")
        demand = _number(v_doc, "demand", path)
        speed = _number(v_doc, "speed", path, default=0.0)
        gear = int(_number(v_doc, "gear", path, default=4))
        if not 1 <= gear <= len(gears.caps):
            raise ScenarioInvalid(f"{path}.gear",
                                  f"{gear} outside 1..{len(gears.caps)}")
        if speed < 0 or demand < 0:
            raise ScenarioInvalid(f"{path}.speed", "speed and demand must be >= 0")
        seen_vehicle_ids.add(vid)
        vehicles.append(VehicleState(
            id=vid, position=position, speed=speed, driver_demand=demand,
            gear=gear, horn_request=bool(v_doc.get("horn", False))))

    obstacles: list[float] = []
    for i, pos in enumerate(doc.get("obstacles", [])):
        if isinstance(pos, bool) or not isinstance(pos, (int, float)):
            raise ScenarioInvalid(f"obstacles[{i}]", f"expected a number, got {pos!r}")
        if not 0 <= pos <= road_length:
            raise ScenarioInvalid(f"obstacles[{i}]",
                                  f"{pos} outside road [0, {road_length}]")
        obstacles.append(float(pos))

    return Scenario(road_length=road_length, duration=duration, zones=zones,
                    vehicles=vehicles, obstacles=obstacles, dt=dt, seed=seed,
                    clock=clock, address=address, channel=channel)


def load_scenario(path: str | Path) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioInvalid(str(path), f"cannot read scenario: {exc}")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioInvalid(f"{path}:{exc.lineno}:{exc.colno}", exc.msg)
    return parse_scenario(doc)
