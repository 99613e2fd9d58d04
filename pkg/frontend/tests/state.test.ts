import { describe, expect, it } from "vitest";

import type { Telemetry } from "../src/protocol.js";
import { SessionState } from "../src/state.js";

function telemetry(partial: Partial<Telemetry> = {}): Telemetry {
  return {
    type: "telemetry",
    frame: 0,
    t_ms: 0,
    blob: true,
    shape: { height: 10, width: 20, major: 22, minor: 9, q: 0.4, m: 0.6,
             area: 150, cx: 30, cy: 25 },
    cc: [],
    mask_rle: { width: 2, height: 1, factor: 2, runs: [2] },
    stats: { fps: 30, proc_ms: 1.5 },
    revision: 0,
    ...partial,
  };
}

describe("SessionState", () => {
  it("tracks the latest telemetry and revision", () => {
    const s = new SessionState();
    s.apply(telemetry({ frame: 3, revision: 2 }));
    expect(s.lastTelemetry?.frame).toBe(3);
    expect(s.serverRevision).toBe(2);
  });

  it("updates meters from CC entries and holds them between updates", () => {
    const s = new SessionState();
    s.apply(telemetry({ cc: [[0, 74, 100]] }));
    expect(s.meters.get("0:74")).toEqual({ value: 100, held: false });
    // next frame emits nothing (dedup): meter keeps its value, marked held
    s.apply(telemetry({ frame: 1, cc: [] }));
    expect(s.meters.get("0:74")).toEqual({ value: 100, held: true });
  });

  it("ack marks the pending command clean and syncs revision", () => {
    const s = new SessionState();
    let reverted = false;
    s.enqueue({ command: { type: "get_config" }, revert: () => { reverted = true; } });
    s.apply({ type: "ack", revision: 5 });
    expect(s.pendingCount).toBe(0);
    expect(reverted).toBe(false);
    expect(s.serverRevision).toBe(5);
  });

  it("rejection reverts the pending widget and records the reason", () => {
    const s = new SessionState();
    let reverted = false;
    s.enqueue({
      command: { type: "set_thresholds", i_min: 300, r_max: 50 },
      revert: () => { reverted = true; },
    });
    s.apply({ type: "rejection", reason: "i_min out of range" });
    expect(reverted).toBe(true);
    expect(s.lastError).toBe("i_min out of range");
    expect(s.pendingCount).toBe(0);
  });

  it("config reply stores the config and revision", () => {
    const s = new SessionState();
    s.apply({ type: "config", revision: 7, config: { downscale: 2 } });
    expect(s.config).toEqual({ downscale: 2 });
    expect(s.serverRevision).toBe(7);
  });

  it("revision never decreases from stale telemetry", () => {
    const s = new SessionState();
    s.apply({ type: "ack", revision: 4 });
    s.apply(telemetry({ revision: 3 }));
    expect(s.serverRevision).toBe(4);
  });
});
