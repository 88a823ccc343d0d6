"""Deterministic discrete-time world: broadcast, propagate, govern, move.

Tick order is fixed: every zone decides its broadcast, the channel
delivers per-frequency bits to each vehicle, frames are decoded and
triple-validated, receptions and the obstacle guard update governance,
then vehicles move.  Reception precedes motion so a boundary crossing
takes effect the tick it is received.  The trace is a pure function of
(scenario, seed).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from . import codec, rf_channel, vehicle, zone_control
from .codec import Codeword, TripleValidator
from .rf_channel import ChannelParams, TransmitterSite
from .scenario import Scenario
from .vehicle import Governed, GovernorParams, Halted, VehicleState
from .zone_control import ZoneConfig, ZoneRegistry, format_clock

EVENT_KINDS = ("rx_valid", "governed", "released", "halted", "horn_suppressed",
               "violation", "collision_averted", "config_change")

VIOLATION_TOLERANCE_KMH = 0.1


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.3f}"
    return str(value)


@dataclass(frozen=True)
class Event:
    time: float
    kind: str
    subject: str
    detail: dict

    def line(self) -> str:
        detail = " ".join(f"{k}={_fmt(v)}" for k, v in self.detail.items())
        return f"{self.time:.3f}\t{self.kind}\t{self.subject}\t{detail}"


@dataclass
class Metrics:
    violations: int = 0
    over_speed_sum: float = 0.0
    suppressed_honks: int = 0
    halts: int = 0
    frames_sent: int = 0
    frames_valid: int = 0

    @property
    def mean_over_speed(self) -> float:
        return self.over_speed_sum / self.violations if self.violations else 0.0

    def summary(self) -> dict:
        return {
            "violations": self.violations,
            "mean_over_speed": round(self.mean_over_speed, 3),
            "suppressed_honks": self.suppressed_honks,
            "halts": self.halts,
            "frames_sent": self.frames_sent,
            "frames_valid": self.frames_valid,
        }


def metrics_from_events(events: list[Event], frames_sent: int = 0) -> Metrics:
    """Rebuild metrics by replaying the event log.

    frames_sent is a channel-side counter with no per-frame event, so
    the caller carries it; everything else comes from the log.
    """
    m = Metrics(frames_sent=frames_sent)
    for event in events:
        if event.kind == "violation":
            m.violations += 1
            m.over_speed_sum += float(event.detail["over"])
        elif event.kind == "horn_suppressed":
            m.suppressed_honks += 1
        elif event.kind == "halted":
            m.halts += 1
        elif event.kind == "rx_valid":
            m.frames_valid += 1
    return m


def violation_check(state: VehicleState, zone: ZoneConfig, clock: float,
                    now: float, decel_max: float,
                    entered: tuple[float, float] | None = None,
                    tolerance: float = VIOLATION_TOLERANCE_KMH) -> bool:
    """Over the limit inside an active zone, once past the settle window.

    Governed vehicles are measured against their imposed limit after the
    analytic settle time.  Ungoverned vehicles (no receiver, or frames
    never validated) are measured against the zone's own limit once past
    an entry grace covering the validation latency plus the braking a
    compliant vehicle would have needed; `entered` is their (time, speed)
    at zone entry.  Emergency-deactivated zones impose nothing.
    """
    start, end = zone.interval
    if not (start <= state.position <= end):
        return False
    if not zone_control.zone_is_active(zone, clock):
        return False
    zone_limit = zone_control.imposed_limit(zone)
    if zone_limit is None:
        return False
    gov = state.governance
    if isinstance(gov, Halted):
        return False
    if isinstance(gov, Governed):
        if gov.zone_kind != zone.kind:
            return False  # obeying an overlapping zone's command
        if state.governed_since is None or state.governed_entry_speed is None:
            return False
        settle = max(0.0, state.governed_entry_speed - gov.limit) \
            / (decel_max * vehicle.KMH_PER_MS)
        if now - state.governed_since < settle:
            return False
        return state.speed > gov.limit + tolerance
    if entered is None:
        return False
    entry_time, entry_speed = entered
    grace = 3 * rf_channel.DEFAULT_REPEAT_PERIOD_S \
        + max(0.0, entry_speed - zone_limit) / (decel_max * vehicle.KMH_PER_MS)
    if now - entry_time < grace:
        return False
    return state.speed > zone_limit + tolerance


class World:
    """All zones, vehicles and the clock; owns the append-only event log."""

    def __init__(self, registry: ZoneRegistry, vehicles: list[VehicleState],
                 road_length: float, clock: float = 0.0, dt: float = 0.1,
                 channel: ChannelParams = ChannelParams(),
                 address: int = codec.DEFAULT_ADDRESS,
                 params: GovernorParams = GovernorParams(),
                 obstacles: list[float] | None = None):
        if dt <= 0:
            raise ValueError("tick must be positive")
        self.registry = registry
        self.vehicles: dict[str, VehicleState] = {v.id: v for v in vehicles}
        self.road_length = road_length
        self.clock0 = clock
        self.dt = dt
        self.channel = channel
        self.address = address
        self.params = params
        self.obstacles = list(obstacles or [])
        self.tick = 0
        self.events: list[Event] = []
        self.metrics = Metrics()
        self.frequencies = sorted({z.frequency for z in registry.list()})
        self._validators: dict[tuple[str, float], TripleValidator] = {}
        # (vehicle id, zone id) -> (time, speed) at zone-interval entry
        self._zone_entries: dict[tuple[str, str], tuple[float, float]] = {}

    @classmethod
    def from_scenario(cls, scenario: Scenario) -> "World":
        return cls(registry=ZoneRegistry(scenario.zones),
                   vehicles=scenario.vehicles,
                   road_length=scenario.road_length,
                   clock=scenario.clock, dt=scenario.dt,
                   channel=scenario.channel, address=scenario.address,
                   obstacles=scenario.obstacles)

    @property
    def t(self) -> float:
        return self.tick * self.dt

    @property
    def clock(self) -> float:
        return (self.clock0 + self.t) % zone_control.SECONDS_PER_DAY

    def _validator(self, vehicle_id: str, frequency: float) -> TripleValidator:
        key = (vehicle_id, frequency)
        if key not in self._validators:
            self._validators[key] = TripleValidator(self.address)
        return self._validators[key]

    def _emit(self, kind: str, subject: str, detail: dict) -> Event:
        event = Event(time=self.t, kind=kind, subject=subject, detail=detail)
        self.events.append(event)
        return event

    def config_event(self, subject: str, detail: dict) -> Event:
        return self._emit("config_change", subject, detail)

    def _broadcasts(self) -> list[tuple[TransmitterSite, Codeword]]:
        active = []
        for zone in self.registry.list():
            symbol = zone_control.broadcast_decision(zone, self.clock)
            if symbol is None:
                continue
            site = zone.site()
            period_ticks = max(1, round(site.repeat_period / self.dt))
            if self.tick % period_ticks:
                continue
            payload = codec.symbol_to_payload(symbol, honk_free=zone.honk_free)
            frame = codec.encode_frame(self.address, payload.pack())
            active.append((site, frame))
            self.metrics.frames_sent += 1
        return active

    def _distance_ahead(self, state: VehicleState) -> float | None:
        candidates = [v.position for v in self.vehicles.values()
                      if v.id != state.id and v.position > state.position]
        candidates += [p for p in self.obstacles if p > state.position]
        if not candidates:
            return None
        return min(candidates) - state.position

    def _receive(self, state: VehicleState,
                 active: list[tuple[TransmitterSite, Codeword]]) -> VehicleState:
        heard = rf_channel.propagate(active, state.position, self.channel, self.tick)
        rxs = []
        for frequency in self.frequencies:
            bits = heard.get(frequency)
            frame = None
            if bits is not None:
                try:
                    frame = codec.decode_frame(bits)
                except codec.CodecError:
                    frame = None
            vt = self._validator(state.id, frequency).push(frame, now=self.t)
            if vt is not None:
                rxs.append((frequency, vt))

        before = vehicle.underlying(state.governance)
        if rxs:
            for frequency, vt in rxs:
                state = vehicle.apply_reception(state, vt, self.t,
                                                self.registry.limits, self.params)
                self.metrics.frames_valid += 1
                self._emit("rx_valid", state.id, {
                    "freq": frequency, "address": f"0x{vt.address:02X}",
                    "symbol": vt.payload.symbol_index,
                    "honk_free": vt.payload.honk_free})
        else:
            state = vehicle.apply_reception(state, None, self.t,
                                            self.registry.limits, self.params)
        after = vehicle.underlying(state.governance)
        if isinstance(after, Governed) and before != after:
            self._emit("governed", state.id, {
                "zone": after.zone_kind, "limit": after.limit,
                "honk_free": after.honk_free})
        elif isinstance(before, Governed) and not isinstance(after, Governed):
            reason = "release" if rxs else "timeout"
            self._emit("released", state.id, {"zone": before.zone_kind,
                                              "reason": reason})
        return state

    def _guard(self, state: VehicleState) -> VehicleState:
        distance = self._distance_ahead(state)
        was_halted = isinstance(state.governance, Halted)
        state = vehicle.obstacle_guard(state, distance, self.params, self.dt)
        now_halted = isinstance(state.governance, Halted)
        if now_halted and not was_halted:
            self.metrics.halts += 1
            self._emit("halted", state.id, {"distance": distance,
                                            "speed": state.speed})
        elif was_halted and not now_halted:
            self._emit("collision_averted", state.id,
                       {"gap": distance if distance is not None else -1.0})
        return state

    def step(self) -> list[Event]:
        """Advance one tick; returns the events it appended."""
        mark = len(self.events)
        active = self._broadcasts()
        for vid in list(self.vehicles):
            state = self.vehicles[vid]
            state = self._receive(state, active)
            state = self._guard(state)
            state = vehicle.step_vehicle(state, self.dt, self.params)
            if state.horn_request and not vehicle.horn_output(
                    state.horn_request, state.governance):
                # output can only be jammed under honk-free governance
                self.metrics.suppressed_honks += 1
                self._emit("horn_suppressed", vid,
                           {"zone": state.governance.zone_kind})
            self.vehicles[vid] = state
        for zone in self.registry.list():
            start, end = zone.interval
            for vid, state in self.vehicles.items():
                key = (vid, zone.id)
                if start <= state.position <= end:
                    self._zone_entries.setdefault(key, (self.t, state.speed))
                else:
                    self._zone_entries.pop(key, None)
                    continue
                if violation_check(state, zone, self.clock, self.t,
                                   self.params.decel_max,
                                   entered=self._zone_entries.get(key)):
                    limit = state.governance.limit if isinstance(
                        state.governance, Governed) \
                        else zone_control.imposed_limit(zone)
                    over = state.speed - limit
                    self.metrics.violations += 1
                    self.metrics.over_speed_sum += over
                    self._emit("violation", vid, {
                        "zone": zone.id, "speed": state.speed,
                        "limit": limit, "over": over})
        self.tick += 1
        return self.events[mark:]

    def run(self, duration: float) -> None:
        for _ in range(math.ceil(duration / self.dt)):
            self.step()

    def snapshot(self) -> dict:
        """Immutable view of the world for the control plane."""
        def gov_dict(state: VehicleState) -> dict:
            gov = state.governance
            if isinstance(gov, Halted):
                return {"mode": "halted"}
            if isinstance(gov, Governed):
                return {"mode": "governed", "zone": gov.zone_kind,
                        "limit": gov.limit, "honk_free": gov.honk_free}
            return {"mode": "free"}

        return {
            "tick": self.tick,
            "t": round(self.t, 3),
            "clock": format_clock(round(self.clock, 3)),
            "road_length": self.road_length,
            "vehicles": [{
                "id": s.id,
                "position": round(s.position, 3),
                "speed": round(s.speed, 3),
                "demand": s.driver_demand,
                "gear": s.gear,
                "horn_request": s.horn_request,
                "horn": vehicle.horn_output(s.horn_request, s.governance),
                "governance": gov_dict(s),
                "display": [s.display[0], round(s.display[1], 3)],
            } for s in self.vehicles.values()],
            "obstacles": list(self.obstacles),
            "metrics": self.metrics.summary(),
        }


def run_scenario(scenario: Scenario,
                 duration: float | None = None) -> tuple[list[Event], Metrics]:
    """Run a scenario to completion; trace is byte-identical per seed."""
    world = World.from_scenario(scenario)
    world.run(scenario.duration if duration is None else duration)
    return world.events, world.metrics


def trace_lines(events: list[Event]) -> list[str]:
    return [event.line() for event in events]


def write_trace(events: list[Event], path: str | Path) -> None:
    Path(path).write_text("\n".join(trace_lines(events)) + "\n")
