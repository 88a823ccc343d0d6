"""Transmitter-side control plane: zones, schedules, emergencies, symbols.

Each zone broadcasts its active symbol while open, its release symbol
while an emergency override is set, and stays silent off-hours.  Speed
limits live in a receiver-side table keyed by zone kind, because the
4-bit data nibble cannot carry a numeric speed.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from pathlib import Path

from .codec import SYMBOL_MEANING, SYMBOLS
from .rf_channel import DEFAULT_FREQUENCY_MHZ, DEFAULT_REPEAT_PERIOD_S, TransmitterSite

ZONE_KINDS = ("school", "office", "hospital")

DEFAULT_LIMITS = {"school": 45.0, "office": 45.0, "hospital": 25.0}

# Active / release symbol pair per zone kind, derived from the codec table.
ACTIVE_SYMBOL: dict[str, str] = {}
RELEASE_SYMBOL: dict[str, str] = {}
for _sym, _idx in SYMBOLS.items():
    _kind, _active = SYMBOL_MEANING[_idx]
    (ACTIVE_SYMBOL if _active else RELEASE_SYMBOL)[_kind] = _sym

SECONDS_PER_DAY = 86400

CONFIG_SCHEMA = 1


class UnknownZone(KeyError):
    """Zone id or kind not present in the registry / limits table."""


class ValidationError(ValueError):
    """Rejected config field; carries the field path for API errors."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


class SchemaError(ValueError):
    """Persisted config file is unreadable or has the wrong schema."""


def parse_clock(value) -> float:
    """Seconds since midnight from a number or an HH:MM[:SS] string."""
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if isinstance(value, str):
        parts = value.split(":")
        if 2 <= len(parts) <= 3:
            try:
                nums = [int(p) for p in parts]
            except ValueError:
                raise ValidationError("time", f"bad time: {value!r}")
            h, m = nums[0], nums[1]
            s = nums[2] if len(nums) == 3 else 0
            if 0 <= h < 24 and 0 <= m < 60 and 0 <= s < 60:
                return float(h * 3600 + m * 60 + s)
        raise ValidationError("time", f"bad time: {value!r}")
    raise ValidationError("time", f"bad time: {value!r}")


def format_clock(seconds: float) -> str | float:
    """HH:MM:SS for whole-second times, the raw float otherwise."""
    if seconds == int(seconds):
        t = int(seconds)
        return f"{t // 3600:02d}:{t % 3600 // 60:02d}:{t % 60:02d}"
    return seconds


@dataclass(frozen=True)
class Schedule:
    """Daily open window; wraps past midnight when close < open."""

    open_time: float = 0.0
    close_time: float = 0.0
    always_on: bool = False

    def __post_init__(self) -> None:
        for field in ("open_time", "close_time"):
            value = getattr(self, field)
            if not 0 <= value < SECONDS_PER_DAY:
                raise ValidationError(f"schedule.{field}",
                                      f"{value} outside [0, 86400)")


@dataclass(frozen=True)
class ZoneConfig:
    id: str
    kind: str
    interval: tuple[float, float]
    frequency: float = DEFAULT_FREQUENCY_MHZ
    schedule: Schedule = Schedule(always_on=True)
    normal_limit: float = 45.0
    honk_free: bool = False
    emergency: bool = False
    # None means an emergency deactivates the zone (release broadcast);
    # a number means it imposes that predefined limit instead.
    emergency_limit: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ZONE_KINDS:
            raise ValidationError("kind", f"unknown zone kind {self.kind!r}")
        start, end = self.interval
        if not start < end:
            raise ValidationError("interval", f"start {start} must be < end {end}")
        if self.normal_limit <= 0:
            raise ValidationError("limit", f"{self.normal_limit} must be positive")
        if self.emergency_limit is not None and self.emergency_limit <= 0:
            raise ValidationError("emergency_limit",
                                  f"{self.emergency_limit} must be positive")

    def site(self) -> TransmitterSite:
        # Radio range defaults to the zone half-length, so reception is
        # bounded by the zone extent.
        start, end = self.interval
        return TransmitterSite(zone_id=self.id,
                               position=(start + end) / 2,
                               range_m=(end - start) / 2,
                               frequency=self.frequency,
                               repeat_period=DEFAULT_REPEAT_PERIOD_S)


def zone_is_active(zone: ZoneConfig, clock: float) -> bool:
    """Open right now?  Window is [open, close); close < open wraps midnight."""
    if zone.schedule.always_on:
        return True
    t = clock % SECONDS_PER_DAY
    open_t, close_t = zone.schedule.open_time, zone.schedule.close_time
    if open_t < close_t:
        return open_t <= t < close_t
    if open_t > close_t:
        return t >= open_t or t < close_t
    return False  # zero-length window


def broadcast_decision(zone: ZoneConfig, clock: float) -> str | None:
    """Symbol to broadcast this tick, or None for radio silence off-hours.

    An emergency deactivates the zone (release symbol) unless the zone
    carries a predefined emergency limit, in which case governance stays
    on at that limit (the registry swaps the receiver-side table).
    """
    if not zone_is_active(zone, clock):
        return None
    if zone.emergency and zone.emergency_limit is None:
        return RELEASE_SYMBOL[zone.kind]
    return ACTIVE_SYMBOL[zone.kind]


def effective_limit(kind: str, limits: dict[str, float]) -> float:
    """Receiver-side limit lookup; the nibble carries no numeric speed."""
    try:
        return limits[kind]
    except KeyError:
        raise UnknownZone(kind)


def imposed_limit(zone: ZoneConfig) -> float | None:
    """Limit the zone imposes right now; None when deactivated by emergency."""
    if zone.emergency:
        return zone.emergency_limit
    return zone.normal_limit


class ZoneRegistry:
    """All configured zones plus the receiver-side limits table.

    Configs are immutable; every mutation swaps in a rebuilt ZoneConfig,
    validating on construction (reject, never clamp).  Mutations are
    serialized by the owning simulation loop; reads hand out snapshots.
    """

    def __init__(self, zones: list[ZoneConfig] | None = None):
        self.zones: dict[str, ZoneConfig] = {}
        self.limits: dict[str, float] = dict(DEFAULT_LIMITS)
        for zone in zones or []:
            self.add(zone)

    @classmethod
    def default_three_zones(cls) -> "ZoneRegistry":
        return cls([
            ZoneConfig(id="school", kind="school", interval=(100.0, 500.0),
                       frequency=433.93, normal_limit=45.0, honk_free=False,
                       schedule=Schedule(parse_clock("08:00"), parse_clock("17:00"))),
            ZoneConfig(id="office", kind="office", interval=(700.0, 1100.0),
                       frequency=434.10, normal_limit=45.0, honk_free=False,
                       schedule=Schedule(parse_clock("08:00"), parse_clock("19:00"))),
            ZoneConfig(id="hospital", kind="hospital", interval=(1300.0, 1700.0),
                       frequency=434.27, normal_limit=25.0, honk_free=True,
                       schedule=Schedule(always_on=True)),
        ])

    def add(self, zone: ZoneConfig) -> None:
        if zone.id in self.zones:
            raise ValidationError("id", f"duplicate zone id {zone.id!r}")
        self.zones[zone.id] = zone
        self.limits[zone.kind] = zone.normal_limit

    def get(self, zone_id: str) -> ZoneConfig:
        try:
            return self.zones[zone_id]
        except KeyError:
            raise UnknownZone(zone_id)

    def list(self) -> list[ZoneConfig]:
        return list(self.zones.values())

    def _replace(self, zone_id: str, **changes) -> ZoneConfig:
        updated = dataclasses.replace(self.get(zone_id), **changes)
        self.zones[zone_id] = updated
        return updated

    def set_schedule(self, zone_id: str, open_time: float, close_time: float,
                     always_on: bool = False) -> ZoneConfig:
        return self._replace(zone_id, schedule=Schedule(open_time, close_time, always_on))

    def update(self, zone_id: str, *, schedule: Schedule | None = None,
               limit: float | None = None,
               honk_free: bool | None = None) -> ZoneConfig:
        """Apply several fields in one atomic replace (all or nothing)."""
        changes: dict = {}
        if schedule is not None:
            changes["schedule"] = schedule
        if limit is not None:
            changes["normal_limit"] = float(limit)
        if honk_free is not None:
            changes["honk_free"] = bool(honk_free)
        updated = self._replace(zone_id, **changes)
        if limit is not None:
            self.limits[updated.kind] = updated.normal_limit
        return updated

    def set_limit(self, zone_id: str, limit: float) -> ZoneConfig:
        updated = self._replace(zone_id, normal_limit=float(limit))
        self.limits[updated.kind] = updated.normal_limit
        return updated

    def set_honk_free(self, zone_id: str, honk_free: bool) -> ZoneConfig:
        return self._replace(zone_id, honk_free=bool(honk_free))

    def trigger_emergency(self, zone_id: str) -> ZoneConfig:
        updated = self._replace(zone_id, emergency=True)
        if updated.emergency_limit is not None:
            self.limits[updated.kind] = updated.emergency_limit
        return updated

    def clear_emergency(self, zone_id: str) -> ZoneConfig:
        updated = self._replace(zone_id, emergency=False)
        if updated.emergency_limit is not None:
            self.limits[updated.kind] = updated.normal_limit
        return updated


def zone_to_dict(zone: ZoneConfig) -> dict:
    """Wire/file form of one zone; key names are the API contract."""
    return {
        "id": zone.id,
        "kind": zone.kind,
        "interval": list(zone.interval),
        "frequency": zone.frequency,
        "schedule": {
            "open": format_clock(zone.schedule.open_time),
            "close": format_clock(zone.schedule.close_time),
            "always_on": zone.schedule.always_on,
        },
        "limit": zone.normal_limit,
        "honk_free": zone.honk_free,
        "emergency": zone.emergency,
        "emergency_limit": zone.emergency_limit,
    }


def zone_from_dict(doc: dict) -> ZoneConfig:
    if not isinstance(doc, dict):
        raise ValidationError("zone", "zone entry must be an object")
    try:
        schedule_doc = doc.get("schedule", {})
        schedule = Schedule(
            open_time=parse_clock(schedule_doc.get("open", 0)),
            close_time=parse_clock(schedule_doc.get("close", 0)),
            always_on=bool(schedule_doc.get("always_on", False)),
        )
        interval = doc["interval"]
        return ZoneConfig(
            id=str(doc["id"]),
            kind=str(doc["kind"]),
            interval=(float(interval[0]), float(interval[1])),
            frequency=float(doc.get("frequency", DEFAULT_FREQUENCY_MHZ)),
            schedule=schedule,
            normal_limit=float(doc.get("limit", DEFAULT_LIMITS.get(doc.get("kind"), 45.0))),
            honk_free=bool(doc.get("honk_free", False)),
            emergency=bool(doc.get("emergency", False)),
            emergency_limit=(None if doc.get("emergency_limit") is None
                             else float(doc["emergency_limit"])),
        )
    except KeyError as exc:
        raise ValidationError(str(exc.args[0]), "missing required field")
    except (TypeError, IndexError) as exc:
        raise ValidationError("zone", f"malformed zone entry: {exc}")


def save_zones(zones: list[ZoneConfig], path: str | Path) -> None:
    doc = {"schema": CONFIG_SCHEMA, "zones": [zone_to_dict(z) for z in zones]}
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def load_zones(path: str | Path) -> list[ZoneConfig]:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"unreadable zone config: {exc}")
    if not isinstance(doc, dict) or doc.get("schema") != CONFIG_SCHEMA:
        raise SchemaError(f"expected schema {CONFIG_SCHEMA}, "
                          f"got {doc.get('schema') if isinstance(doc, dict) else type(doc).__name__}")
    try:
        return [zone_from_dict(z) for z in doc.get("zones", [])]
    except ValidationError as exc:
        raise SchemaError(str(exc))
