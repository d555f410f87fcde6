/** Typed client for the game service. The server is the sole legality
 * authority; this module only moves JSON. */

import {
  ActionResponse,
  AgentMoveResponse,
  GameResponse,
  LegalResponse,
  SessionRecord,
} from "./types";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const res = await fetch(url, {
    headers: { "Content-Type": "application/json" },
    ...init,
  });
  const body = await res.json().catch(() => ({}));
  if (!res.ok) {
    throw new ApiError(res.status, (body as { detail?: string }).detail ?? res.statusText);
  }
  return body as T;
}

export interface CreateGameOptions {
  seed?: number;
  humanSeat?: number;
  agent?: string;
}

export class GameClient {
  constructor(private readonly baseUrl: string) {}

  createGame(opts: CreateGameOptions = {}): Promise<GameResponse> {
    return request(`${this.baseUrl}/games`, {
      method: "POST",
      body: JSON.stringify({
        seed: opts.seed ?? 0,
        human_seat: opts.humanSeat ?? 0,
        agent: opts.agent ?? "uniform",
      }),
    });
  }

  getGame(id: string): Promise<GameResponse> {
    return request(`${this.baseUrl}/games/${id}`);
  }

  getLegal(id: string): Promise<LegalResponse> {
    return request(`${this.baseUrl}/games/${id}/legal`);
  }

  submitAction(id: string, index: number): Promise<ActionResponse> {
    return request(`${this.baseUrl}/games/${id}/actions`, {
      method: "POST",
      body: JSON.stringify({ index }),
    });
  }

  agentMove(id: string, simulations?: number, topK = 5): Promise<AgentMoveResponse> {
    return request(`${this.baseUrl}/games/${id}/agent-move`, {
      method: "POST",
      body: JSON.stringify({ simulations: simulations ?? null, top_k: topK }),
    });
  }

  getRecord(id: string): Promise<SessionRecord> {
    return request(`${this.baseUrl}/games/${id}/record`);
  }
}
