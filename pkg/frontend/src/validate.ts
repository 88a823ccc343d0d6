// Client-side validation mirroring the server's zone rules, so bad edits
// get an inline error instead of a doomed request.

import type { Zone } from "./types.js";

export const SECONDS_PER_DAY = 86400;

export function parseClock(value: string | number): number | null {
  if (typeof value === "number") {
    return value >= 0 && value < SECONDS_PER_DAY ? value : null;
  }
  const m = /^(\d{1,2}):(\d{2})(?::(\d{2}))?$/.exec(value.trim());
  if (!m) return null;
  const h = Number(m[1]);
  const min = Number(m[2]);
  const s = Number(m[3] ?? "0");
  if (h > 23 || min > 59 || s > 59) return null;
  return h * 3600 + min * 60 + s;
}

export function formatClock(value: string | number): string {
  const seconds = typeof value === "number" ? value : parseClock(value);
  if (seconds === null || typeof value === "number" && value !== Math.floor(value)) {
    return String(value);
  }
  const t = Math.floor(seconds as number);
  const pad = (n: number) => String(n).padStart(2, "0");
  return `${pad(Math.floor(t / 3600))}:${pad(Math.floor(t / 60) % 60)}:${pad(t % 60)}`;
}

export interface ZoneDraft {
  open: string;
  close: string;
  always_on: boolean;
  limit: string;
  honk_free: boolean;
}

export function draftFromZone(zone: Zone): ZoneDraft {
  return {
    open: formatClock(zone.schedule.open),
    close: formatClock(zone.schedule.close),
    always_on: zone.schedule.always_on,
    limit: String(zone.limit),
    honk_free: zone.honk_free,
  };
}

export interface ZonePatch {
  schedule: { open: string; close: string; always_on: boolean };
  limit: number;
  honk_free: boolean;
}

export interface DraftCheck {
  errors: Record<string, string>;
  patch?: ZonePatch;
}

export function validateDraft(draft: ZoneDraft): DraftCheck {
  const errors: Record<string, string> = {};
  const open = parseClock(draft.open);
  const close = parseClock(draft.close);
  if (open === null) errors.open = "time must be HH:MM or HH:MM:SS";
  if (close === null) errors.close = "time must be HH:MM or HH:MM:SS";
  const limit = Number(draft.limit);
  if (draft.limit.trim() === "" || !Number.isFinite(limit) || limit <= 0) {
    errors.limit = "limit must be a positive number";
  }
  if (Object.keys(errors).length > 0) return { errors };
  return {
    errors,
    patch: {
      schedule: {
        open: formatClock(open as number),
        close: formatClock(close as number),
        always_on: draft.always_on,
      },
      limit,
      honk_free: draft.honk_free,
    },
  };
}

// Same open-window rule the transmitter applies: [open, close), wrapping
// past midnight when close < open.
export function zoneActive(zone: Zone, clockSeconds: number): boolean {
  if (zone.schedule.always_on) return true;
  const open = parseClock(zone.schedule.open);
  const close = parseClock(zone.schedule.close);
  if (open === null || close === null) return false;
  const t = clockSeconds % SECONDS_PER_DAY;
  if (open < close) return t >= open && t < close;
  if (open > close) return t >= open || t < close;
  return false;
}
