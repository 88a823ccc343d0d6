"""HTTP control plane: zone CRUD, emergencies, sim control, event stream.

Request handlers never touch the world directly; every mutation runs
under the session lock, which is only free between ticks, and every
accepted change lands on the append-only session log that feeds the
event stream.  Subscribers get a bounded queue; a subscriber that
cannot keep up is closed with an explicit lag error and may reconnect
from its last event index.
"""

from __future__ import annotations

import asyncio
import logging
from contextlib import asynccontextmanager
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import Body, FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles

from .scenario import ScenarioInvalid, parse_scenario
from .sim_engine import Event, World
from .zone_control import (
    Schedule,
    SchemaError,
    UnknownZone,
    ValidationError,
    ZoneRegistry,
    load_zones,
    parse_clock,
    save_zones,
    zone_to_dict,
)

log = logging.getLogger(__name__)

STREAM_BUFFER = 512

DEFAULT_ROAD_LENGTH = 2000.0


@dataclass
class _Subscriber:
    queue: asyncio.Queue = field(default_factory=lambda: asyncio.Queue(maxsize=STREAM_BUFFER))
    lagged: bool = False


class SimSession:
    """One world plus run state; all mutations serialize through the lock."""

    def __init__(self, world: World, config_path: str | Path | None = None):
        self.world = world
        self.config_path = Path(config_path) if config_path else None
        self.log: list[Event] = []
        self.running = False
        self.speed = 1.0
        self.lock = asyncio.Lock()
        self.subscribers: list[_Subscriber] = []
        self._world_cursor = 0
        self._task: asyncio.Task | None = None

    def publish_pending(self) -> None:
        """Move newly appended world events onto the session log and fan out."""
        new = self.world.events[self._world_cursor:]
        self._world_cursor = len(self.world.events)
        for event in new:
            index = len(self.log)
            self.log.append(event)
            for sub in self.subscribers:
                if sub.lagged:
                    continue
                try:
                    sub.queue.put_nowait((index, event))
                except asyncio.QueueFull:
                    sub.lagged = True

    def swap_world(self, world: World) -> None:
        self.world = world
        self._world_cursor = 0

    def persist(self) -> None:
        if self.config_path is not None:
            save_zones(self.world.registry.list(), self.config_path)

    async def start(self) -> None:
        if self.running:
            return
        self.running = True
        self._task = asyncio.create_task(self._run_loop())

    async def pause(self) -> None:
        self.running = False
        if self._task is not None:
            self._task.cancel()
            try:
                await self._task
            except asyncio.CancelledError:
                pass
            self._task = None

    async def _run_loop(self) -> None:
        while self.running:
            async with self.lock:
                self.world.step()
                self.publish_pending()
            await asyncio.sleep(self.world.dt / self.speed)


def default_world(config_path: str | Path | None = None) -> World:
    """World from the persisted zone config, or the stock three zones.

    A corrupted config file is reported and ignored; the service keeps
    the last-good (here: built-in) configuration.
    """
    registry = None
    if config_path is not None and Path(config_path).exists():
        try:
            registry = ZoneRegistry(load_zones(config_path))
        except SchemaError as exc:
            log.warning("ignoring zone config %s: %s", config_path, exc)
    if registry is None:
        registry = ZoneRegistry.default_three_zones()
    return World(registry=registry, vehicles=[], road_length=DEFAULT_ROAD_LENGTH,
                 clock=parse_clock("09:00"))


def _error(status: int, message: str, **extra) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message, **extra})


def _sse(index: int, line: str) -> str:
    return f"id: {index}\ndata: {line}\n\n"


def create_app(config_path: str | Path | None = None,
               session: SimSession | None = None,
               ui_dir: str | Path | None = None) -> FastAPI:
    if session is None:
        session = SimSession(default_world(config_path), config_path=config_path)

    @asynccontextmanager
    async def lifespan(_app: FastAPI):
        yield
        await session.pause()

    app = FastAPI(title="zonegov control plane", lifespan=lifespan)
    app.state.session = session
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    @app.get("/zones")
    async def get_zones() -> dict:
        async with session.lock:
            return {"zones": [zone_to_dict(z) for z in session.world.registry.list()]}

    @app.put("/zones/{zone_id}")
    async def put_zone(zone_id: str, payload: dict = Body(...)):
        schedule = None
        if "schedule" in payload:
            doc = payload["schedule"]
            if not isinstance(doc, dict):
                return _error(400, "schedule must be an object", field="schedule")
            try:
                schedule = Schedule(
                    open_time=parse_clock(doc.get("open", 0)),
                    close_time=parse_clock(doc.get("close", 0)),
                    always_on=bool(doc.get("always_on", False)))
            except ValidationError as exc:
                return _error(400, str(exc), field=f"schedule.{exc.field}")
        limit = payload.get("limit")
        if limit is not None and (isinstance(limit, bool)
                                  or not isinstance(limit, (int, float))):
            return _error(400, "limit must be a number", field="limit")
        honk_free = payload.get("honk_free")

        async with session.lock:
            try:
                updated = session.world.registry.update(
                    zone_id, schedule=schedule, limit=limit, honk_free=honk_free)
            except UnknownZone:
                return _error(404, f"unknown zone {zone_id!r}")
            except ValidationError as exc:
                return _error(400, str(exc), field=exc.field)
            detail = {"change": "update"}
            for key in ("schedule", "limit", "honk_free"):
                if payload.get(key) is not None:
                    detail[key] = str(payload[key])
            session.world.config_event(zone_id, detail)
            session.publish_pending()
            session.persist()
            return zone_to_dict(updated)

    @app.post("/zones/{zone_id}/emergency")
    async def post_emergency(zone_id: str, payload: dict = Body(...)):
        on = payload.get("on")
        if not isinstance(on, bool):
            return _error(400, "body must carry boolean 'on'", field="on")
        async with session.lock:
            try:
                if on:
                    updated = session.world.registry.trigger_emergency(zone_id)
                else:
                    updated = session.world.registry.clear_emergency(zone_id)
            except UnknownZone:
                return _error(404, f"unknown zone {zone_id!r}")
            session.world.config_event(zone_id, {"change": "emergency", "on": on})
            session.publish_pending()
            session.persist()
            return zone_to_dict(updated)

    @app.get("/state")
    async def get_state() -> dict:
        async with session.lock:
            snap = session.world.snapshot()
            snap["running"] = session.running
            snap["speed"] = session.speed
            snap["log_length"] = len(session.log)
            return snap

    @app.post("/sim")
    async def post_sim(payload: dict = Body(...)):
        action = payload.get("action")
        if action == "start":
            await session.start()
            return {"running": True}
        if action == "pause":
            await session.pause()
            async with session.lock:
                return {"running": False, "tick": session.world.tick}
        if action == "step":
            if session.running:
                return _error(409, "cannot step while running; pause first")
            ticks = payload.get("ticks", 1)
            if not isinstance(ticks, int) or isinstance(ticks, bool) \
                    or not 1 <= ticks <= 100_000:
                return _error(400, "ticks must be an integer in 1..100000",
                              field="ticks")
            async with session.lock:
                for _ in range(ticks):
                    session.world.step()
                session.publish_pending()
                return {"running": False, "tick": session.world.tick,
                        "t": round(session.world.t, 3)}
        if action == "speed":
            factor = payload.get("speed")
            if isinstance(factor, bool) or not isinstance(factor, (int, float)) \
                    or factor <= 0:
                return _error(400, "speed must be a positive number", field="speed")
            session.speed = float(factor)
            return {"speed": session.speed}
        return _error(400, f"unknown action {action!r}", field="action")

    @app.post("/scenario")
    async def post_scenario(payload: dict = Body(...)):
        if session.running:
            return _error(409, "cannot load a scenario while running; pause first")
        try:
            scenario = parse_scenario(payload)
        except ScenarioInvalid as exc:
            return _error(400, str(exc), field=exc.location)
        async with session.lock:
            session.swap_world(World.from_scenario(scenario))
            session.world.config_event("sim", {"change": "scenario",
                                               "zones": len(scenario.zones),
                                               "vehicles": len(scenario.vehicles)})
            session.publish_pending()
            return {"loaded": True, "zones": len(scenario.zones),
                    "vehicles": len(scenario.vehicles)}

    @app.get("/events")
    async def get_events(request: Request, after: int = -1, max_events: int = 0):
        # Last-Event-ID (set by reconnecting EventSource clients) wins
        # over the query parameter.
        header = request.headers.get("last-event-id")
        if header is not None:
            try:
                after = int(header)
            except ValueError:
                return _error(400, "Last-Event-ID must be an integer",
                              field="Last-Event-ID")

        async def stream():
            sent = 0
            sub = _Subscriber()
            async with session.lock:
                backlog = list(enumerate(session.log))[max(0, after + 1):]
                session.subscribers.append(sub)
            try:
                for index, event in backlog:
                    yield _sse(index, event.line())
                    sent += 1
                    if max_events and sent >= max_events:
                        return
                while True:
                    if sub.lagged:
                        yield ("event: lag_error\n"
                               "data: subscriber fell behind; reconnect with last index\n\n")
                        return
                    try:
                        index, event = await asyncio.wait_for(sub.queue.get(),
                                                              timeout=1.0)
                    except asyncio.TimeoutError:
                        yield ": keepalive\n\n"
                        continue
                    yield _sse(index, event.line())
                    sent += 1
                    if max_events and sent >= max_events:
                        return
            finally:
                if sub in session.subscribers:
                    session.subscribers.remove(sub)

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app
