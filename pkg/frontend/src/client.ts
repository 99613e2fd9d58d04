// WebSocket client with exponential-backoff reconnect. Commands are
// fire-and-forget; the SessionState reconciles on Ack/Rejection.

import type { Command, ServerMessage } from "./protocol.js";
import { parseServerMessage } from "./protocol.js";

export interface ClientCallbacks {
  onMessage: (msg: ServerMessage) => void;
  onStatus: (open: boolean) => void;
}

export class ControlClient {
  private ws: WebSocket | null = null;
  private attempts = 0;
  private closedByUser = false;

  constructor(
    private readonly url: string,
    private readonly callbacks: ClientCallbacks,
  ) {
    this.connect();
  }

  private connect(): void {
    this.ws = new WebSocket(this.url);
    this.ws.onopen = () => {
      this.attempts = 0;
      this.callbacks.onStatus(true);
      this.send({ type: "get_config" });
    };
    this.ws.onmessage = (ev) => {
      const msg = parseServerMessage(String(ev.data));
      if (msg) this.callbacks.onMessage(msg);
    };
    this.ws.onclose = () => {
      this.callbacks.onStatus(false);
      if (!this.closedByUser) this.scheduleReconnect();
    };
  }

  private scheduleReconnect(): void {
    const delay = Math.min(500 * 2 ** this.attempts, 10000);
    this.attempts += 1;
    setTimeout(() => this.connect(), delay);
  }

  send(cmd: Command): boolean {
    if (this.ws && this.ws.readyState === WebSocket.OPEN) {
      this.ws.send(JSON.stringify(cmd));
      return true;
    }
    return false;
  }

  close(): void {
    this.closedByUser = true;
    this.ws?.close();
  }
}
