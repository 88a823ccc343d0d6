"""Receiver-side governor: speed decision, horn jamming, obstacle halt.

The governor never drives; it caps.  Target speed is the minimum of
driver demand, gear cap and the zone limit while governed, quantized
down to the nearest attainable speed level (the relay / voltage-divider
steps of the drive).  Silence longer than the loss timeout means the
vehicle has left the zone and reverts to its normal speed.  All
transitions are pure functions of (state, inputs), so fleets can be
stepped in parallel once receptions are computed.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .codec import SYMBOL_MEANING, ValidTransmission
from .zone_control import effective_limit

KMH_PER_MS = 3.6


@dataclass(frozen=True)
class Free:
    pass


@dataclass(frozen=True)
class Governed:
    zone_kind: str
    limit: float
    honk_free: bool = False


@dataclass(frozen=True)
class Halted:
    resume: "Free | Governed"


Governance = Free | Governed | Halted

FREE = Free()


@dataclass(frozen=True)
class GearTable:
    """Per-gear speed caps in km/h; the driver shifts, the governor caps."""

    caps: tuple[float, ...] = (15.0, 30.0, 60.0, 120.0)

    def __post_init__(self) -> None:
        if any(b <= a for a, b in zip(self.caps, self.caps[1:])):
            raise ValueError("gear caps must be strictly increasing")

    def cap(self, gear: int) -> float:
        if not 1 <= gear <= len(self.caps):
            raise ValueError(f"gear {gear} outside 1..{len(self.caps)}")
        return self.caps[gear - 1]


@dataclass(frozen=True)
class SpeedLevels:
    """Attainable steady speeds in km/h, floor-quantized (never exceed)."""

    levels: tuple[float, ...] = (0.0, 15.0, 25.0, 45.0, 60.0, 80.0, 100.0, 120.0)

    def __post_init__(self) -> None:
        if list(self.levels) != sorted(set(self.levels)) or 0.0 not in self.levels:
            raise ValueError("levels must be sorted, unique and contain 0")

    def quantize_down(self, target: float) -> float:
        best = self.levels[0]
        for level in self.levels:
            if level <= target:
                best = level
        return best


@dataclass(frozen=True)
class GovernorParams:
    gears: GearTable = GearTable()
    levels: SpeedLevels = SpeedLevels()
    accel_max: float = 3.0          # m/s^2
    decel_max: float = 5.0          # m/s^2
    loss_timeout: float = 1.0       # s of silence = left the zone
    halt_margin: float = 2.0        # m kept in front of an obstacle
    halt_hysteresis: float = 1.0    # m beyond threshold before resuming


@dataclass(frozen=True)
class VehicleState:
    id: str
    position: float
    speed: float
    driver_demand: float
    gear: int = 4
    horn_request: bool = False
    governance: Governance = FREE
    last_valid_rx: float | None = None
    governed_since: float | None = None
    governed_entry_speed: float | None = None
    display: tuple[str, float] = ("FREE", 0.0)

    def __post_init__(self) -> None:
        if self.speed < 0 or self.driver_demand < 0:
            raise ValueError("speed and demand must be non-negative")


def underlying(gov: Governance) -> Free | Governed:
    """Governance beneath a halt, or the governance itself."""
    return gov.resume if isinstance(gov, Halted) else gov


def _rewrap(old: Governance, inner: Free | Governed) -> Governance:
    return Halted(resume=inner) if isinstance(old, Halted) else inner


def governed_target(driver_demand: float, gear: int, governance: Governance,
                    params: GovernorParams) -> float:
    """min(demand, gear cap, zone limit), quantized down; 0 while halted."""
    if isinstance(governance, Halted):
        return 0.0
    target = min(driver_demand, params.gears.cap(gear))
    if isinstance(governance, Governed):
        target = min(target, governance.limit)
    return params.levels.quantize_down(target)


def apply_reception(state: VehicleState, rx: ValidTransmission | None, now: float,
                    limits: dict[str, float], params: GovernorParams) -> VehicleState:
    """Fold one reception window into governance.

    An active symbol imposes the kind's limit and the in-band honk flag;
    a release symbol frees immediately; silence frees only after the
    loss timeout.  A halt in progress keeps its stashed governance in
    sync instead.
    """
    if rx is None:
        if state.last_valid_rx is None:
            return state
        if now - state.last_valid_rx <= params.loss_timeout:
            return state
        if isinstance(underlying(state.governance), Governed):
            return replace(state, governance=_rewrap(state.governance, FREE),
                           governed_since=None, governed_entry_speed=None)
        return state

    index = rx.payload.symbol_index
    meaning = SYMBOL_MEANING.get(index)
    if index == 0:
        # idle keep-alive: refresh the link, leave governance alone
        return replace(state, last_valid_rx=rx.observed_at)
    if meaning is None:
        return state
    kind, active = meaning
    state = replace(state, last_valid_rx=rx.observed_at)
    if active:
        imposed = Governed(zone_kind=kind,
                           limit=effective_limit(kind, limits),
                           honk_free=rx.payload.honk_free)
        if underlying(state.governance) == imposed:
            return state
        return replace(state, governance=_rewrap(state.governance, imposed),
                       governed_since=now, governed_entry_speed=state.speed)
    if isinstance(underlying(state.governance), Governed):
        return replace(state, governance=_rewrap(state.governance, FREE),
                       governed_since=None, governed_entry_speed=None)
    return state


def horn_output(horn_request: bool, governance: Governance) -> bool:
    """Horn is jammed while governed in a honk-free zone."""
    if isinstance(governance, Governed) and governance.honk_free:
        return False
    return horn_request


def stopping_distance(speed_kmh: float, decel_max: float) -> float:
    v = speed_kmh / KMH_PER_MS
    return v * v / (2.0 * decel_max)


def halt_threshold(speed_kmh: float, params: GovernorParams, dt: float) -> float:
    # Next-tick worst-case speed, so one tick of motion can never carry
    # the vehicle past the point of no return.
    lookahead = speed_kmh + params.accel_max * dt * KMH_PER_MS
    return stopping_distance(lookahead, params.decel_max) + params.halt_margin


def obstacle_guard(state: VehicleState, distance_ahead: float | None,
                   params: GovernorParams, dt: float) -> VehicleState:
    """Halt inside stopping distance of an obstacle; resume with hysteresis."""
    threshold = halt_threshold(state.speed, params, dt)
    if isinstance(state.governance, Halted):
        if distance_ahead is None or distance_ahead > threshold + params.halt_hysteresis:
            return replace(state, governance=state.governance.resume)
        return state
    if distance_ahead is not None and distance_ahead <= threshold:
        return replace(state, governance=Halted(resume=state.governance))
    return state


def _display(governance: Governance, speed: float) -> tuple[str, float]:
    if isinstance(governance, Halted):
        return ("HALT", speed)
    if isinstance(governance, Governed):
        return (f"{governance.zone_kind.upper()} {governance.limit:g}", speed)
    return ("FREE", speed)


def step_vehicle(state: VehicleState, dt: float, params: GovernorParams) -> VehicleState:
    """Slew speed toward the governed target and advance along the road."""
    target = governed_target(state.driver_demand, state.gear, state.governance, params)
    up = params.accel_max * KMH_PER_MS * dt
    down = params.decel_max * KMH_PER_MS * dt
    if state.speed < target:
        speed = min(target, state.speed + up)
    elif state.speed > target:
        speed = max(target, state.speed - down)
    else:
        speed = state.speed
    position = state.position + speed / KMH_PER_MS * dt
    return replace(state, speed=speed, position=position,
                   display=_display(state.governance, speed))
