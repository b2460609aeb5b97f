/**
 * Server-sent-events client over `fetch`.
 *
 * The native `EventSource` cannot attach an Authorization header, so the
 * console reads the SSE byte stream itself: frames are separated by a blank
 * line, `data:` lines carry one JSON event record each, and comment lines
 * (keep-alives) are ignored.  On any disconnect the client reconnects with
 * `?since=<last seq seen>` so no events are missed or duplicated.
 */

import type { EventRecord } from "./types.js";

export type StreamStatus = "connecting" | "open" | "retrying" | "stopped";

export interface StreamOptions {
  base: string;
  since: number;
  token?: string;
  onEvent: (event: EventRecord) => void;
  onStatus?: (status: StreamStatus, attempt: number) => void;
  fetchImpl?: typeof fetch;
  /** Reconnect delay per attempt; injectable so tests run instantly. */
  retryDelayMs?: (attempt: number) => number;
}

const defaultBackoff = (attempt: number): number => Math.min(500 * 2 ** attempt, 5000);

export class StreamClient {
  /** Sequence number of the last event delivered to `onEvent`. */
  lastSeq: number;

  private stopped = false;
  private controller: AbortController | null = null;

  constructor(private readonly options: StreamOptions) {
    this.lastSeq = options.since;
  }

  stop(): void {
    this.stopped = true;
    this.controller?.abort();
  }

  /** Consume the stream until `stop()`; reconnects forever with backoff. */
  async run(): Promise<void> {
    let attempt = 0;
    while (!this.stopped) {
      this.options.onStatus?.(attempt === 0 ? "connecting" : "retrying", attempt);
      try {
        await this.consumeOnce(() => {
          attempt = 0;
        });
      } catch {
        // Aborts and network failures both land here; the loop decides.
      }
      if (this.stopped) break;
      const delayFor = this.options.retryDelayMs ?? defaultBackoff;
      attempt += 1;
      await sleep(delayFor(attempt));
    }
    this.options.onStatus?.("stopped", 0);
  }

  private async consumeOnce(onFrame: () => void): Promise<void> {
    const fetchImpl = this.options.fetchImpl ?? ((input: RequestInfo | URL, init?: RequestInit) => globalThis.fetch(input, init));
    this.controller = new AbortController();
    const headers: Record<string, string> = { Accept: "text/event-stream" };
    if (this.options.token) headers["Authorization"] = `Bearer ${this.options.token}`;
    const response = await fetchImpl(`${this.options.base}/api/stream?since=${this.lastSeq}`, {
      headers,
      signal: this.controller.signal,
    });
    if (!response.ok || !response.body) {
      throw new Error(`stream request failed: HTTP ${response.status}`);
    }
    this.options.onStatus?.("open", 0);
    const reader = response.body.getReader();
    const decoder = new TextDecoder();
    let buffer = "";
    for (;;) {
      const { done, value } = await reader.read();
      if (done) return; // server closed; run() reconnects from lastSeq
      buffer += decoder.decode(value, { stream: true });
      let cut: number;
      while ((cut = buffer.indexOf("\n\n")) >= 0) {
        const frame = buffer.slice(0, cut);
        buffer = buffer.slice(cut + 2);
        const event = parseFrame(frame);
        if (event === null) continue; // keep-alive comment
        onFrame();
        this.lastSeq = event.seq;
        this.options.onEvent(event);
        if (this.stopped) {
          this.controller.abort();
          return;
        }
      }
    }
  }
}

/** Parse one SSE frame; returns null for comment/keep-alive frames. */
export function parseFrame(frame: string): EventRecord | null {
  let data: string | null = null;
  for (const line of frame.split("\n")) {
    if (line.startsWith("data: ")) data = line.slice(6);
    else if (line.startsWith("data:")) data = line.slice(5);
  }
  if (data === null) return null;
  return JSON.parse(data) as EventRecord;
}

function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}
