// Client session state: latest telemetry, config-revision reconciliation,
// and pending-command bookkeeping so a Rejection can revert the widget that
// caused it. The UI never invents values: everything shown comes from a
// telemetry or config message.

import type { Ack, Command, ConfigReply, Rejection, ServerMessage, Telemetry } from "./protocol.js";

export type ConnectionStatus = "connecting" | "open" | "closed";

export interface PendingCommand {
  command: Command;
  // widget snapshot taken before the optimistic change, restored on Rejection
  revert: () => void;
}

export interface MeterState {
  value: number;
  held: boolean; // true while dedup suppresses repeats upstream
}

export class SessionState {
  status: ConnectionStatus = "connecting";
  lastTelemetry: Telemetry | null = null;
  serverRevision = 0;
  config: Record<string, unknown> | null = null;
  lastError: string | null = null;
  // meters keyed "channel:controller"; values persist between CC updates
  meters = new Map<string, MeterState>();
  private pending: PendingCommand[] = [];

  enqueue(p: PendingCommand): void {
    this.pending.push(p);
  }

  get pendingCount(): number {
    return this.pending.length;
  }

  apply(msg: ServerMessage): void {
    switch (msg.type) {
      case "telemetry":
        this.applyTelemetry(msg);
        break;
      case "ack":
        this.applyAck(msg);
        break;
      case "rejection":
        this.applyRejection(msg);
        break;
      case "config":
        this.config = (msg as ConfigReply).config;
        this.serverRevision = msg.revision;
        break;
    }
  }

  private applyTelemetry(t: Telemetry): void {
    this.lastTelemetry = t;
    if (t.revision > this.serverRevision) this.serverRevision = t.revision;
    // a telemetry frame with no CC entries means dedup held every controller
    for (const meter of this.meters.values()) meter.held = true;
    for (const [ch, ctrl, value] of t.cc) {
      this.meters.set(`${ch}:${ctrl}`, { value, held: false });
    }
  }

  private applyAck(ack: Ack): void {
    this.pending.shift(); // confirmed: the widget is clean
    if (ack.revision > this.serverRevision) this.serverRevision = ack.revision;
    this.lastError = null;
  }

  private applyRejection(rej: Rejection): void {
    const p = this.pending.shift();
    if (p) p.revert();
    this.lastError = rej.reason;
  }
}
