import type { TraceEvent } from "./types.js";

// One stream message carries one trace line:
//   time \t kind \t subject \t k=v k=v ...
export function parseTraceLine(index: number, line: string): TraceEvent | null {
  const parts = line.split("\t");
  if (parts.length < 3) return null;
  const time = Number(parts[0]);
  if (!Number.isFinite(time)) return null;
  const detail: Record<string, string> = {};
  for (const pair of (parts[3] ?? "").split(" ")) {
    if (!pair) continue;
    const eq = pair.indexOf("=");
    if (eq > 0) detail[pair.slice(0, eq)] = pair.slice(eq + 1);
  }
  return { index, time, kind: parts[1], subject: parts[2], detail };
}
