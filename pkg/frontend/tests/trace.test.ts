import { expect, test } from "vitest";
import { parseTraceLine } from "../src/trace.js";

test("parses a full trace line", () => {
  const ev = parseTraceLine(7, "1.000\tgoverned\tv1\tzone=office limit=45.000 honk_free=false");
  expect(ev).toEqual({
    index: 7, time: 1.0, kind: "governed", subject: "v1",
    detail: { zone: "office", limit: "45.000", honk_free: "false" },
  });
});

test("parses an empty detail", () => {
  const ev = parseTraceLine(0, "0.000\treleased\tv1\t");
  expect(ev?.kind).toBe("released");
  expect(ev?.detail).toEqual({});
});

test("rejects malformed lines", () => {
  expect(parseTraceLine(0, "not a trace line")).toBeNull();
  expect(parseTraceLine(0, "x\ty")).toBeNull();
});
