// Wire types for the control service WebSocket protocol. One JSON object per
// text frame; unknown inbound fields are ignored.

export interface MaskRle {
  width: number;
  height: number;
  factor: number;
  runs: number[];
}

export interface ShapeReadout {
  height: number;
  width: number;
  major: number;
  minor: number;
  q: number;
  m: number;
  area: number;
  cx: number;
  cy: number;
}

export interface Telemetry {
  type: "telemetry";
  frame: number;
  t_ms: number;
  blob: boolean;
  shape: ShapeReadout;
  cc: [number, number, number][]; // [channel, controller, value]
  mask_rle: MaskRle;
  stats: { fps: number; proc_ms: number };
  revision: number;
}

export interface Ack {
  type: "ack";
  revision: number;
}

export interface Rejection {
  type: "rejection";
  reason: string;
}

export interface ConfigReply {
  type: "config";
  revision: number;
  config: Record<string, unknown>;
}

export type ServerMessage = Telemetry | Ack | Rejection | ConfigReply;

export type Command =
  | { type: "set_thresholds"; i_min: number; r_max: number }
  | { type: "toggle_filter"; which: "A" | "B"; on: boolean }
  | { type: "set_filter_params"; t_a?: number; alpha?: number; k_max?: number }
  | { type: "set_mapping"; preset: string }
  | { type: "calibrate"; phase: "closed" | "open" }
  | { type: "get_config" };

export function parseServerMessage(text: string): ServerMessage | null {
  let obj: unknown;
  try {
    obj = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof obj !== "object" || obj === null) return null;
  const type = (obj as { type?: unknown }).type;
  if (type === "telemetry" || type === "ack" || type === "rejection" || type === "config") {
    return obj as ServerMessage;
  }
  return null;
}
