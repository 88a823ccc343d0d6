// HTML renderers: pure (state in, markup out) so they test without a DOM.

import type { Metrics, StateSnapshot, TraceEvent, Zone } from "./types.js";
import type { StreamStatus } from "./store.js";
import { ZoneDraft, draftFromZone, formatClock, parseClock, zoneActive } from "./validate.js";

export function escapeHtml(value: unknown): string {
  return String(value)
    .replaceAll("&", "&amp;").replaceAll("<", "&lt;").replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;").replaceAll("'", "&#39;");
}

const pct = (value: number, total: number) =>
  `${((value / total) * 100).toFixed(2)}%`;

export function renderStatus(status: StreamStatus, sim: StateSnapshot | null): string {
  const clock = sim ? formatClock(sim.clock) : "--:--:--";
  const run = sim ? (sim.running ? `running x${sim.speed}` : "paused") : "";
  return `<span class="dot ${status}"></span> ${status}`
    + ` <span class="clock">${escapeHtml(clock)}</span>`
    + ` <span class="runstate">${escapeHtml(run)} tick ${sim?.tick ?? "-"}</span>`;
}

export function renderRoadView(sim: StateSnapshot | null, zones: Zone[]): string {
  if (!sim) return `<div class="empty">no state yet</div>`;
  const road = sim.road_length;
  const clock = parseClock(sim.clock) ?? 0;

  const bands = zones.map((zone) => {
    const [start, end] = zone.interval;
    const active = zoneActive(zone, clock);
    const classes = ["zone-band", zone.kind,
                     active ? "active" : "inactive",
                     zone.emergency ? "emergency" : ""].join(" ").trim();
    const label = `${zone.id} ${zone.limit}`;
    return `<div class="${classes}" data-zone="${escapeHtml(zone.id)}"`
      + ` style="left:${pct(start, road)};width:${pct(end - start, road)}"`
      + ` title="${escapeHtml(`${zone.kind} ${start}-${end} m`)}">`
      + `${escapeHtml(label)}</div>`;
  }).join("");

  const obstacles = sim.obstacles.map((pos) =>
    `<div class="obstacle" style="left:${pct(pos, road)}" title="obstacle ${pos} m"></div>`,
  ).join("");

  const cars = sim.vehicles.map((v) => {
    const gov = v.governance;
    const badge = gov.mode === "governed"
      ? `<span class="badge limit">${escapeHtml(gov.limit ?? "?")}</span>` : "";
    const halted = gov.mode === "halted" ? `<span class="badge halt">HALT</span>` : "";
    const muted = v.horn_request && !v.horn
      ? `<span class="badge muted" title="horn suppressed">muted</span>` : "";
    return `<div class="vehicle ${gov.mode}" data-vehicle="${escapeHtml(v.id)}"`
      + ` style="left:${pct(v.position, road)}">`
      + `<span class="vid">${escapeHtml(v.id)}</span>`
      + `<span class="speed">${v.speed.toFixed(0)} km/h</span>`
      + badge + halted + muted
      + `</div>`;
  }).join("");

  return `<div class="road" data-length="${road}">`
    + `<div class="track"></div>${bands}${obstacles}${cars}</div>`;
}

export function renderZoneEditor(zones: Zone[],
                                 drafts: Map<string, ZoneDraft>,
                                 errors: Map<string, Record<string, string>>): string {
  return zones.map((zone) => {
    const draft = drafts.get(zone.id) ?? draftFromZone(zone);
    const errs = errors.get(zone.id) ?? {};
    const err = (field: string) => errs[field]
      ? `<span class="err" data-err="${field}">${escapeHtml(errs[field])}</span>` : "";
    const emergencyClass = zone.emergency ? "on" : "off";
    return `<form class="zone-card ${zone.kind}" data-zone="${escapeHtml(zone.id)}">`
      + `<header><b>${escapeHtml(zone.id)}</b> <i>${zone.kind}</i>`
      + ` <span class="badge emergency ${emergencyClass}">`
      + `${zone.emergency ? "EMERGENCY" : "normal"}</span></header>`
      + `<label>open <input name="open" value="${escapeHtml(draft.open)}"></label>${err("open")}`
      + `<label>close <input name="close" value="${escapeHtml(draft.close)}"></label>${err("close")}`
      + `<label>always on <input name="always_on" type="checkbox"${draft.always_on ? " checked" : ""}></label>`
      + `<label>limit <input name="limit" value="${escapeHtml(draft.limit)}"></label>${err("limit")}`
      + `<label>honk-free <input name="honk_free" type="checkbox"${draft.honk_free ? " checked" : ""}></label>`
      + `<button type="submit" data-action="save">save</button>`
      + `<button type="button" data-action="emergency" data-on="${zone.emergency ? "0" : "1"}">`
      + `${zone.emergency ? "clear emergency" : "emergency"}</button>`
      + `</form>`;
  }).join("");
}

export function renderMetrics(metrics: Metrics | null): string {
  if (!metrics) return `<div class="empty">no metrics yet</div>`;
  const rows = Object.entries(metrics).map(([key, value]) =>
    `<tr><td>${escapeHtml(key)}</td><td>${escapeHtml(value)}</td></tr>`).join("");
  return `<table class="metrics">${rows}</table>`;
}

export function renderEventLog(events: TraceEvent[], limit = 30): string {
  const rows = events.slice(-limit).reverse().map((ev) => {
    const detail = Object.entries(ev.detail)
      .map(([k, v]) => `${k}=${v}`).join(" ");
    return `<div class="event ${escapeHtml(ev.kind)}">`
      + `<span class="t">${ev.time.toFixed(1)}</span>`
      + `<span class="k">${escapeHtml(ev.kind)}</span>`
      + `<span class="s">${escapeHtml(ev.subject)}</span>`
      + `<span class="d">${escapeHtml(detail)}</span></div>`;
  }).join("");
  return rows || `<div class="empty">no events yet</div>`;
}
