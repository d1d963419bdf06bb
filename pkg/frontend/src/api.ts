/**
 * Typed client for the game service.
 *
 * Every response is kept twice: parsed values for chart geometry and
 * control flow, and the server's exact decimal strings (sliced from the
 * raw body) for anything a human reads.
 */

import { field, items, scanJson } from "./rawjson.js";

export type SessionMode = "random-secret" | "chosen-secret" | "no-secret";

export interface StateView {
  posterior: number[];
  predictiveWhite: number;
  frequencyWhite: number | null;
  laplaceWhite: number;
  oddsVsMostProbable: number[];
  historyLength: number;
  historySummary: { n: number; x: number };
  revealed: boolean;
  secretBox?: number | null;
}

/** The same fields as the server serialized them, character for character. */
export interface RawStateView {
  posterior: string[];
  predictiveWhite: string;
  frequencyWhite: string;
  laplaceWhite: string;
  oddsVsMostProbable: string[];
  secretBox?: string;
}

export interface ServerState {
  view: StateView;
  raw: RawStateView;
}

export class ApiFailure extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

function rawStateView(body: string): RawStateView {
  const root = scanJson(body);
  const raw: RawStateView = {
    posterior: items(field(root, "posterior")).map((n) => n.raw),
    predictiveWhite: field(root, "predictiveWhite").raw,
    frequencyWhite: field(root, "frequencyWhite").raw,
    laplaceWhite: field(root, "laplaceWhite").raw,
    oddsVsMostProbable: items(field(root, "oddsVsMostProbable")).map((n) => n.raw),
  };
  if (root.object?.has("secretBox")) {
    raw.secretBox = field(root, "secretBox").raw;
  }
  return raw;
}

export class SessionApi {
  constructor(
    readonly baseUrl: string = "",
    private readonly fetchImpl: typeof fetch = globalThis.fetch.bind(globalThis),
  ) {}

  private async request(path: string, init?: RequestInit): Promise<string> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const body = await response.text();
    if (!response.ok) {
      let code = `http_${response.status}`;
      let message = body;
      try {
        const parsed = JSON.parse(body) as { error?: string; message?: string };
        code = parsed.error ?? code;
        message = parsed.message ?? message;
      } catch {
        // non-JSON error body: keep the raw text
      }
      throw new ApiFailure(response.status, code, message);
    }
    return body;
  }

  private async stateRequest(path: string, init?: RequestInit): Promise<ServerState> {
    const body = await this.request(path, init);
    return { view: JSON.parse(body) as StateView, raw: rawStateView(body) };
  }

  async createSession(mode: SessionMode, box?: number, seed?: number): Promise<string> {
    const body = await this.request("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ mode, ...(box !== undefined && { box }), ...(seed !== undefined && { seed }) }),
    });
    return (JSON.parse(body) as { id: string }).id;
  }

  state(id: string): Promise<ServerState> {
    return this.stateRequest(`/sessions/${id}/state`);
  }

  observe(id: string, color: "B" | "W"): Promise<ServerState> {
    return this.stateRequest(`/sessions/${id}/observe`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ color }),
    });
  }

  undo(id: string): Promise<ServerState> {
    return this.stateRequest(`/sessions/${id}/undo`, { method: "POST" });
  }

  reveal(id: string): Promise<ServerState> {
    return this.stateRequest(`/sessions/${id}/reveal`, { method: "POST" });
  }
}
