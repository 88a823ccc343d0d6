import { describe, expect, test } from "vitest";
import { renderEventLog, renderRoadView, renderZoneEditor } from "../src/render.js";
import type { StateSnapshot, VehicleView, Zone } from "../src/types.js";
import { parseTraceLine } from "../src/trace.js";

const zone = (over: Partial<Zone> = {}): Zone => ({
  id: "office", kind: "office", interval: [500, 900], frequency: 433.93,
  schedule: { open: "08:00", close: "19:00", always_on: false },
  limit: 45, honk_free: false, emergency: false, emergency_limit: null,
  ...over,
});

const vehicle = (over: Partial<VehicleView> = {}): VehicleView => ({
  id: "v1", position: 600, speed: 45, demand: 80, gear: 4,
  horn_request: false, horn: false,
  governance: { mode: "governed", zone: "office", limit: 45, honk_free: false },
  display: ["OFFICE 45", 45],
  ...over,
});

const snapshot = (over: Partial<StateSnapshot> = {}): StateSnapshot => ({
  tick: 100, t: 10, clock: "09:00:00", road_length: 1600,
  vehicles: [vehicle()], obstacles: [1200],
  metrics: { violations: 0, mean_over_speed: 0, suppressed_honks: 0,
             halts: 0, frames_sent: 100, frames_valid: 98 },
  running: false, speed: 1, log_length: 5,
  ...over,
});

describe("road view", () => {
  test("governed vehicle shows the limit badge", () => {
    const html = renderRoadView(snapshot(), [zone()]);
    expect(html).toContain('class="vehicle governed"');
    expect(html).toContain('<span class="badge limit">45</span>');
  });

  test("horn suppression gets a marker", () => {
    const suppressed = vehicle({
      horn_request: true, horn: false,
      governance: { mode: "governed", zone: "hospital", limit: 25, honk_free: true },
    });
    const html = renderRoadView(snapshot({ vehicles: [suppressed] }), []);
    expect(html).toContain('badge muted');

    const honking = vehicle({ horn_request: true, horn: true,
                              governance: { mode: "free" } });
    expect(renderRoadView(snapshot({ vehicles: [honking] }), []))
      .not.toContain("badge muted");
  });

  test("zone band shading follows the schedule and the clock", () => {
    const z = zone();
    expect(renderRoadView(snapshot({ clock: "09:00:00" }), [z]))
      .toContain("zone-band office active");
    expect(renderRoadView(snapshot({ clock: "22:00:00" }), [z]))
      .toContain("zone-band office inactive");
    expect(renderRoadView(snapshot(), [zone({ emergency: true })]))
      .toContain("emergency");
  });

  test("halted vehicle shows HALT", () => {
    const halted = vehicle({ governance: { mode: "halted" }, speed: 0 });
    const html = renderRoadView(snapshot({ vehicles: [halted] }), []);
    expect(html).toContain('class="vehicle halted"');
    expect(html).toContain("HALT");
  });

  test("positions map onto the road extent", () => {
    const html = renderRoadView(snapshot(), [zone()]);
    expect(html).toContain('left:37.50%');          // vehicle at 600/1600
    expect(html).toContain('left:31.25%;width:25.00%'); // zone 500..900
  });
});

describe("zone editor", () => {
  test("renders drafts and inline errors without a request", () => {
    const html = renderZoneEditor(
      [zone()],
      new Map([["office", { open: "25:99", close: "19:00", always_on: false,
                            limit: "45", honk_free: false }]]),
      new Map([["office", { open: "time must be HH:MM or HH:MM:SS" }]]));
    expect(html).toContain('value="25:99"');
    expect(html).toContain('data-err="open"');
  });

  test("emergency badge flips with the flag", () => {
    expect(renderZoneEditor([zone()], new Map(), new Map()))
      .toContain("badge emergency off");
    expect(renderZoneEditor([zone({ emergency: true })], new Map(), new Map()))
      .toContain("badge emergency on");
  });
});

test("event log renders newest first", () => {
  const events = [
    parseTraceLine(0, "1.000\tgoverned\tv1\tzone=office")!,
    parseTraceLine(1, "2.000\treleased\tv1\treason=timeout")!,
  ];
  const html = renderEventLog(events);
  expect(html.indexOf("released")).toBeLessThan(html.indexOf("governed"));
});
