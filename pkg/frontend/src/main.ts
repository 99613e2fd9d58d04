// Monitor panel wiring: overlay canvas, shape readouts, CC meters, and
// control widgets (thresholds, filter toggles/params, preset, calibration).

import { ControlClient } from "./client.js";
import { renderMeters, renderOverlay, shapeReadoutText } from "./overlay.js";
import type { Command } from "./protocol.js";
import { SessionState } from "./state.js";

const state = new SessionState();

const canvas = document.getElementById("overlay") as HTMLCanvasElement;
const readout = document.getElementById("readout")!;
const metersEl = document.getElementById("meters")!;
const statusEl = document.getElementById("status")!;
const errorEl = document.getElementById("error")!;

function $input(id: string): HTMLInputElement {
  return document.getElementById(id) as HTMLInputElement;
}

const widgets = {
  iMin: $input("i-min"),
  rMax: $input("r-max"),
  filterA: $input("filter-a"),
  filterB: $input("filter-b"),
  tA: $input("t-a"),
  alpha: $input("alpha"),
  preset: document.getElementById("preset") as HTMLSelectElement,
};

function setControlsEnabled(on: boolean): void {
  for (const w of Object.values(widgets)) w.disabled = !on;
}

const wsUrl = `ws://${location.hash.slice(1) || "127.0.0.1:8765"}/ws`;
const client = new ControlClient(wsUrl, {
  onStatus(open) {
    state.status = open ? "open" : "closed";
    statusEl.textContent = open ? "connected" : "reconnecting...";
    statusEl.className = open ? "ok" : "bad";
    setControlsEnabled(open);
  },
  onMessage(msg) {
    state.apply(msg);
    if (msg.type === "telemetry") {
      const outcome = renderOverlay(canvas, msg);
      errorEl.textContent = outcome.ok ? (state.lastError ?? "") : `bad mask: ${outcome.error}`;
      readout.textContent = shapeReadoutText(msg);
      renderMeters(metersEl, state.meters);
    } else if (msg.type === "rejection") {
      errorEl.textContent = state.lastError ?? "";
    } else if (msg.type === "config" && state.config) {
      syncWidgetsFromConfig(state.config);
    } else if (msg.type === "ack") {
      // widget already reflects the new value; re-fetch keeps us honest
      client.send({ type: "get_config" });
    }
  },
});

function syncWidgetsFromConfig(cfg: Record<string, unknown>): void {
  const seg = cfg.segmentation as { i_min: number; r_max: number };
  const filt = cfg.filters as {
    a_enabled: boolean; b_enabled: boolean; t_a: number; alpha: number;
  };
  widgets.iMin.value = String(seg.i_min);
  widgets.rMax.value = String(seg.r_max);
  widgets.filterA.checked = filt.a_enabled;
  widgets.filterB.checked = filt.b_enabled;
  widgets.tA.value = String(filt.t_a);
  widgets.alpha.value = String(filt.alpha);
  const mapping = cfg.mapping as { preset?: string };
  if (mapping.preset) widgets.preset.value = mapping.preset;
}

function sendTracked(cmd: Command, revert: () => void): void {
  state.enqueue({ command: cmd, revert });
  if (!client.send(cmd)) revert();
}

widgets.iMin.addEventListener("change", () => {
  const prev = widgets.iMin.defaultValue;
  sendTracked(
    { type: "set_thresholds", i_min: Number(widgets.iMin.value), r_max: Number(widgets.rMax.value) },
    () => { widgets.iMin.value = prev; },
  );
});
widgets.rMax.addEventListener("change", () => {
  const prev = widgets.rMax.defaultValue;
  sendTracked(
    { type: "set_thresholds", i_min: Number(widgets.iMin.value), r_max: Number(widgets.rMax.value) },
    () => { widgets.rMax.value = prev; },
  );
});
widgets.filterA.addEventListener("change", () => {
  const on = widgets.filterA.checked;
  sendTracked({ type: "toggle_filter", which: "A", on },
    () => { widgets.filterA.checked = !on; });
});
widgets.filterB.addEventListener("change", () => {
  const on = widgets.filterB.checked;
  sendTracked({ type: "toggle_filter", which: "B", on },
    () => { widgets.filterB.checked = !on; });
});
widgets.tA.addEventListener("change", () => {
  const prev = widgets.tA.defaultValue;
  sendTracked(
    { type: "set_filter_params", t_a: Number(widgets.tA.value), alpha: Number(widgets.alpha.value) },
    () => { widgets.tA.value = prev; },
  );
});
widgets.alpha.addEventListener("change", () => {
  const prev = widgets.alpha.defaultValue;
  sendTracked(
    { type: "set_filter_params", t_a: Number(widgets.tA.value), alpha: Number(widgets.alpha.value) },
    () => { widgets.alpha.value = prev; },
  );
});
widgets.preset.addEventListener("change", () => {
  const prev = widgets.preset.dataset.prev ?? widgets.preset.value;
  sendTracked({ type: "set_mapping", preset: widgets.preset.value },
    () => { widgets.preset.value = prev; });
  widgets.preset.dataset.prev = widgets.preset.value;
});
document.getElementById("cal-closed")!.addEventListener("click", () => {
  client.send({ type: "calibrate", phase: "closed" });
});
document.getElementById("cal-open")!.addEventListener("click", () => {
  client.send({ type: "calibrate", phase: "open" });
});
