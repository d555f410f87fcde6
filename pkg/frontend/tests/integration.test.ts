/** End-to-end test against a live server: a full game is driven through
 * the client exactly as the UI drives it (legal-list projection for the
 * human, agent-move for the opponent), a deliberately illegal POST is
 * rejected with 409 and no state change, and the final scores shown by
 * the client equal the server's session record. */

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { spawn, ChildProcess } from "node:child_process";

import { ApiError, GameClient } from "../src/api";
import { familyChoices, locationChoices, variantChoices } from "../src/builder";
import { bannerText, boardViewModel } from "../src/board";
import { renderFinal } from "../src/render";
import { StateView } from "../src/types";

const PORT = 8731;
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const res = await fetch(`${BASE}/games/none`);
      if (res.status === 404) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 200));
  }
  throw new Error("server did not start");
}

beforeAll(async () => {
  server = spawn(
    "python3",
    [
      "-c",
      "import uvicorn; from tmzero.server import create_app; " +
        `uvicorn.run(create_app(), host='127.0.0.1', port=${PORT}, log_level='warning')`,
    ],
    { stdio: "ignore" },
  );
  await waitForServer();
}, 60_000);

afterAll(() => {
  server.kill();
});

/** Deterministic pick: first variant of the first location of the first
 * family — always a legal index by construction. */
function pickViaBuilder(legal: { index: number; description: string }[]): number {
  const family = familyChoices(legal)[0].family;
  const location = locationChoices(legal, family)[0].key;
  return variantChoices(legal, family, location)[0].index;
}

describe("full game through the client", () => {
  const client = new GameClient(BASE);

  it("plays start to finish and matches the server record", async () => {
    const game = await client.createGame({ seed: 5, humanSeat: 0 });
    const id = game.id;
    let state: StateView = game.state;
    let guard = 0;
    while (!state.is_terminal && guard++ < 400) {
      if (state.to_move === 0) {
        const legal = (await client.getLegal(id)).actions;
        expect(legal.length).toBeGreaterThan(0);
        const index = pickViaBuilder(legal);
        expect(legal.some((e) => e.index === index)).toBe(true);
        state = (await client.submitAction(id, index)).state;
      } else {
        const res = await client.agentMove(id, 4);
        const probSum = res.move.policy.reduce((a, e) => a + e.prob, 0);
        expect(probSum).toBeLessThanOrEqual(1 + 1e-9);
        expect(res.move.v_root).toBeGreaterThanOrEqual(-1);
        expect(res.move.v_root).toBeLessThanOrEqual(1);
        state = res.state;
      }
    }
    expect(state.is_terminal).toBe(true);
    expect(state.scores).toBeDefined();

    // Final screen as the UI renders it equals the server record.
    const record = await client.getRecord(id);
    expect(record.complete).toBe(true);
    expect(record.scores).toEqual(state.scores);
    const html = renderFinal(state);
    expect(html).toContain(String(state.scores![0]));
    expect(html).toContain(String(state.scores![1]));
    expect(bannerText(state)).toContain("Game over");
  }, 120_000);

  it("rejects a deliberately illegal direct POST with 409 and no state change", async () => {
    const game = await client.createGame({ seed: 9, humanSeat: 0 });
    const before = (await client.getGame(game.id)).state;
    // Town-tile choice is never legal during setup.
    let status = 0;
    let detail = "";
    try {
      await client.submitAction(game.id, 2142);
    } catch (err) {
      if (err instanceof ApiError) {
        status = err.status;
        detail = err.detail;
      }
    }
    expect(status).toBe(409);
    expect(detail.toLowerCase()).toContain("illegal");
    const after = (await client.getGame(game.id)).state;
    expect(after).toEqual(before);
    expect(boardViewModel(after)).toEqual(boardViewModel(before));
  }, 30_000);

  it("refuses agent moves on the human's turn", async () => {
    const game = await client.createGame({ seed: 2, humanSeat: 0 });
    let status = 0;
    try {
      await client.agentMove(game.id);
    } catch (err) {
      if (err instanceof ApiError) status = err.status;
    }
    expect(status).toBe(409);
  }, 30_000);

  it("404s for unknown sessions", async () => {
    let status = 0;
    try {
      await client.getGame("does-not-exist");
    } catch (err) {
      if (err instanceof ApiError) status = err.status;
    }
    expect(status).toBe(404);
  });
});
