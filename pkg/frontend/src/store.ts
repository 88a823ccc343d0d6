import type { StateSnapshot, TraceEvent, Zone } from "./types.js";
import { parseTraceLine } from "./trace.js";

export type StreamStatus = "connecting" | "live" | "polling";

const MAX_EVENTS = 200;

// Single source of truth for the UI. Reducer-style setters notify
// subscribers; nothing here computes simulation results.
export class ConsoleStore {
  zones: Zone[] = [];
  sim: StateSnapshot | null = null;
  events: TraceEvent[] = [];
  lastEventIndex = -1;
  status: StreamStatus = "connecting";

  private listeners: Array<() => void> = [];

  onChange(fn: () => void): void {
    this.listeners.push(fn);
  }

  touch(): void {
    for (const fn of this.listeners) fn();
  }

  setZones(zones: Zone[]): void {
    this.zones = zones;
    this.touch();
  }

  // Optimistic single-zone replacement; the next config_change refresh
  // reconciles with the server's view.
  applyZonePatch(zone: Zone): void {
    this.zones = this.zones.map((z) => (z.id === zone.id ? zone : z));
    this.touch();
  }

  setSim(snapshot: StateSnapshot): void {
    this.sim = snapshot;
    this.touch();
  }

  setStatus(status: StreamStatus): void {
    if (this.status !== status) {
      this.status = status;
      this.touch();
    }
  }

  applyEvent(index: number, line: string): TraceEvent | null {
    if (index <= this.lastEventIndex) return null; // replayed duplicate
    const event = parseTraceLine(index, line);
    if (event === null) return null;
    this.lastEventIndex = index;
    this.events.push(event);
    if (this.events.length > MAX_EVENTS) {
      this.events.splice(0, this.events.length - MAX_EVENTS);
    }
    this.touch();
    return event;
  }
}
