/** Thin typed client for the simulator's JSON endpoints. */

import type { EntityInfo, EventRecord, Snapshot } from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export class Api {
  constructor(
    private readonly base: string,
    private token: string = "",
    private readonly fetchImpl: typeof fetch = (input, init) => globalThis.fetch(input, init),
  ) {}

  setToken(token: string): void {
    this.token = token.trim();
  }

  state(): Promise<Snapshot> {
    return this.getJson<Snapshot>("/api/state");
  }

  entities(): Promise<EntityInfo[]> {
    return this.getJson<EntityInfo[]>("/api/entities");
  }

  events(since: number): Promise<EventRecord[]> {
    return this.getJson<EventRecord[]>(`/api/events?since=${since}`);
  }

  chat(since: number): Promise<EventRecord[]> {
    return this.getJson<EventRecord[]>(`/api/chat?since=${since}`);
  }

  async placeOrder(buyer: string, lines: Record<string, number>): Promise<string> {
    const response = await this.fetchImpl(`${this.base}/api/orders`, {
      method: "POST",
      headers: this.headers({ "Content-Type": "application/json" }),
      body: JSON.stringify({ buyer, lines }),
    });
    if (!response.ok) throw new ApiError(response.status, await errorText(response));
    const body = (await response.json()) as { order_id: string };
    return body.order_id;
  }

  private async getJson<T>(path: string): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, { headers: this.headers() });
    if (!response.ok) throw new ApiError(response.status, await errorText(response));
    return (await response.json()) as T;
  }

  private headers(extra: Record<string, string> = {}): Record<string, string> {
    return this.token ? { ...extra, Authorization: `Bearer ${this.token}` } : extra;
  }
}

async function errorText(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { error?: unknown };
    if (body && typeof body.error === "string") return body.error;
  } catch {
    // non-JSON error body; fall through
  }
  return `HTTP ${response.status}`;
}
