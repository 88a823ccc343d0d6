// Wire types mirroring the control-plane API payloads.
// The console renders these as-is; it never derives physics of its own.

export type ZoneKind = "school" | "office" | "hospital";

export interface Schedule {
  open: string | number;
  close: string | number;
  always_on: boolean;
}

export interface Zone {
  id: string;
  kind: ZoneKind;
  interval: [number, number];
  frequency: number;
  schedule: Schedule;
  limit: number;
  honk_free: boolean;
  emergency: boolean;
  emergency_limit: number | null;
}

export interface Governance {
  mode: "free" | "governed" | "halted";
  zone?: string;
  limit?: number;
  honk_free?: boolean;
}

export interface VehicleView {
  id: string;
  position: number;
  speed: number;
  demand: number;
  gear: number;
  horn_request: boolean;
  horn: boolean;
  governance: Governance;
  display: [string, number];
}

export interface Metrics {
  violations: number;
  mean_over_speed: number;
  suppressed_honks: number;
  halts: number;
  frames_sent: number;
  frames_valid: number;
}

export interface StateSnapshot {
  tick: number;
  t: number;
  clock: string | number;
  road_length: number;
  vehicles: VehicleView[];
  obstacles: number[];
  metrics: Metrics;
  running: boolean;
  speed: number;
  log_length: number;
}

export interface TraceEvent {
  index: number;
  time: number;
  kind: string;
  subject: string;
  detail: Record<string, string>;
}

// Body accepted by PUT /zones/{id}; all fields optional, applied atomically.
export interface ZonePatchBody {
  schedule?: { open: string | number; close: string | number; always_on: boolean };
  limit?: number;
  honk_free?: boolean;
}
