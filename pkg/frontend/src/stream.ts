/** Reconnecting event stream over the service WebSocket. */

import { parseEvent, WireFormatError } from "./wire.js";
import type { StreamEvent } from "./wire.js";
import { streamUrl } from "./api.js";

export type StreamStatus = "connecting" | "live" | "reconnecting" | "stopped";

/** Minimal surface of a WebSocket this module relies on. */
export interface SocketLike {
  onopen: ((ev?: unknown) => void) | null;
  onmessage: ((ev: { data: unknown }) => void) | null;
  onclose: ((ev?: unknown) => void) | null;
  onerror: ((ev?: unknown) => void) | null;
  close(): void;
}

export interface StreamOptions {
  onEvent: (event: StreamEvent) => void;
  onStatus?: (status: StreamStatus) => void;
  /** Injectable for tests; defaults to the browser WebSocket. */
  socketFactory?: (url: string) => SocketLike;
  /** Injectable timer; defaults to setTimeout. */
  schedule?: (fn: () => void, delayMs: number) => void;
  baseBackoffMs?: number;
  maxBackoffMs?: number;
}

const BASE_BACKOFF_MS = 500;
const MAX_BACKOFF_MS = 10_000;

/**
 * Holds one connection to a video's event stream and keeps it alive.
 * On drop it reconnects with exponential backoff (capped) and asks the
 * server to resume from the sequence after the last one it processed, so
 * no event is lost and none is handed to the consumer twice.
 */
export class EventStream {
  lastSeq = 0;
  status: StreamStatus = "stopped";
  attempts = 0;

  private base: string;
  private videoId: string;
  private opts: StreamOptions;
  private socket: SocketLike | null = null;
  private running = false;

  constructor(base: string, videoId: string, opts: StreamOptions) {
    this.base = base;
    this.videoId = videoId;
    this.opts = opts;
  }

  start(fromSeq = 1): void {
    if (this.running) return;
    this.running = true;
    this.lastSeq = fromSeq - 1;
    this.connect();
  }

  stop(): void {
    this.running = false;
    this.setStatus("stopped");
    if (this.socket) {
      const sock = this.socket;
      this.socket = null;
      sock.onclose = null;
      sock.close();
    }
  }

  private setStatus(status: StreamStatus): void {
    this.status = status;
    this.opts.onStatus?.(status);
  }

  private connect(): void {
    if (!this.running) return;
    this.setStatus(this.attempts === 0 ? "connecting" : "reconnecting");
    const url = streamUrl(this.base, this.videoId, this.lastSeq + 1);
    const factory = this.opts.socketFactory ?? ((u: string) => new WebSocket(u) as SocketLike);
    const sock = factory(url);
    this.socket = sock;
    sock.onopen = () => {
      if (this.socket === sock) this.setStatus("live");
    };
    sock.onmessage = (ev) => {
      if (this.socket !== sock) return;
      let event: StreamEvent;
      try {
        event = parseEvent(String(ev.data));
      } catch (err) {
        if (err instanceof WireFormatError) return; // drop malformed frames
        throw err;
      }
      if (event.seq <= this.lastSeq) return; // duplicate after resume
      this.lastSeq = event.seq;
      this.attempts = 0;
      this.opts.onEvent(event);
    };
    sock.onclose = () => {
      if (this.socket !== sock) return;
      this.socket = null;
      this.scheduleReconnect();
    };
    sock.onerror = () => {
      // close follows; reconnect handled there
    };
  }

  private scheduleReconnect(): void {
    if (!this.running) return;
    this.setStatus("reconnecting");
    const base = this.opts.baseBackoffMs ?? BASE_BACKOFF_MS;
    const cap = this.opts.maxBackoffMs ?? MAX_BACKOFF_MS;
    const delay = Math.min(cap, base * 2 ** this.attempts);
    this.attempts += 1;
    const schedule = this.opts.schedule ?? ((fn, ms) => setTimeout(fn, ms));
    schedule(() => this.connect(), delay);
  }
}
