// Canvas rendering: segmented-blob overlay (red cells at the downscaled
// resolution, scaled to the canvas) plus CC meters and shape readouts.

import type { Telemetry } from "./protocol.js";
import { RleError, setCells } from "./rle.js";
import type { MeterState } from "./state.js";

export interface RenderOutcome {
  ok: boolean;
  error?: string;
}

export function renderOverlay(
  canvas: HTMLCanvasElement,
  telemetry: Telemetry,
): RenderOutcome {
  const ctx = canvas.getContext("2d");
  if (!ctx) return { ok: false, error: "no 2d context" };
  const rle = telemetry.mask_rle;
  let cells;
  try {
    cells = setCells(rle);
  } catch (e) {
    if (e instanceof RleError) return { ok: false, error: e.message };
    throw e;
  }
  ctx.fillStyle = "#111";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  const sx = canvas.width / rle.width;
  const sy = canvas.height / rle.height;
  ctx.fillStyle = "#e02020";
  for (const c of cells) {
    ctx.fillRect(c.x * sx, c.y * sy, Math.ceil(sx), Math.ceil(sy));
  }
  return { ok: true };
}

export function renderMeters(
  container: HTMLElement,
  meters: Map<string, MeterState>,
): void {
  for (const [key, meter] of meters) {
    let row = container.querySelector<HTMLElement>(`[data-meter="${key}"]`);
    if (!row) {
      row = document.createElement("div");
      row.dataset.meter = key;
      row.className = "meter";
      row.innerHTML =
        `<span class="meter-label">${key}</span>` +
        `<span class="meter-bar"><span class="meter-fill"></span></span>` +
        `<span class="meter-value"></span>`;
      container.appendChild(row);
    }
    const fill = row.querySelector<HTMLElement>(".meter-fill")!;
    const value = row.querySelector<HTMLElement>(".meter-value")!;
    fill.style.width = `${(meter.value / 127) * 100}%`;
    value.textContent = String(meter.value);
    row.classList.toggle("held", meter.held);
  }
}

export function shapeReadoutText(t: Telemetry): string {
  const s = t.shape;
  return (
    `h ${s.height.toFixed(1)}  w ${s.width.toFixed(1)}  ` +
    `major ${s.major.toFixed(1)}  minor ${s.minor.toFixed(1)}  ` +
    `m ${s.m.toFixed(3)}  area ${s.area}  ` +
    `${t.stats.fps.toFixed(1)} fps  rev ${t.revision}`
  );
}
