/** Board / panel view-model tests against engine-generated fixtures. */

import { describe, expect, it } from "vitest";
import { readFileSync } from "node:fs";
import { join } from "node:path";

import {
  boardViewModel,
  cultTracks,
  doubledColumns,
  inBounds,
  playerPanel,
  ROWS,
  STRUCTURE_GLYPHS,
  TERRAIN_NAMES,
} from "../src/board";
import { renderBoard, renderFinal, renderInsight, renderPlayers } from "../src/render";
import { StateView } from "../src/types";

function fixture(name: string): { state: StateView } {
  const raw = readFileSync(join(__dirname, "fixtures", name), "utf-8");
  return JSON.parse(raw);
}

const setup = fixture("setup_state.json").state;
const midgame = fixture("midgame_state.json").state;

describe("doubled-column geometry", () => {
  it("even rows start at 2c, shifted rows at 2c+1", () => {
    expect(doubledColumns(0, 0)).toEqual([0, 2]);
    expect(doubledColumns(0, 12)).toEqual([24, 26]);
    expect(doubledColumns(1, 0)).toEqual([1, 3]);
    expect(doubledColumns(1, 11)).toEqual([23, 25]);
  });

  it("shifted rows exclude the 13th column", () => {
    expect(inBounds(1, 12)).toBe(false);
    expect(inBounds(0, 12)).toBe(true);
    expect(inBounds(8, 0)).toBe(true);
    expect(inBounds(9, 0)).toBe(false);
  });
});

describe("boardViewModel", () => {
  it("covers every usable hex with terrain metadata", () => {
    const vm = boardViewModel(setup);
    expect(vm.rows.length).toBe(ROWS);
    const total = vm.rows.reduce((a, r) => a + r.length, 0);
    expect(total).toBe(9 * 13 - 4);
    for (const row of vm.rows) {
      for (const cell of row) {
        expect(TERRAIN_NAMES[cell.terrain]).toBe(cell.terrainName);
        expect(cell.glyph).toBe(STRUCTURE_GLYPHS[cell.structure]);
        expect(cell.col2).toBe(doubledColumns(cell.r, cell.c)[0]);
      }
    }
  });

  it("mid-game board shows owned structures and a round banner", () => {
    const vm = boardViewModel(midgame);
    const owned = vm.rows.flat().filter((c) => c.owner >= 0);
    expect(owned.length).toBeGreaterThan(4);
    expect(vm.banner).toContain("Round 3 of 6");
  });
});

describe("player panels and cult tracks", () => {
  it("panels carry the server resource numbers verbatim", () => {
    const panel = playerPanel(midgame, midgame.players[0]);
    expect(panel.workers).toBe(midgame.players[0].workers);
    expect(panel.vp).toBe(midgame.players[0].vp);
    expect(panel.power).toEqual(midgame.players[0].power);
    expect(panel.toMove).toBe(midgame.to_move === 0);
  });

  it("cult tracks list all four cults for both seats", () => {
    const tracks = cultTracks(midgame);
    expect(tracks.map((t) => t.name)).toEqual(["Fire", "Water", "Earth", "Air"]);
    for (const t of tracks) {
      expect(t.positions.length).toBe(2);
    }
  });
});

describe("renderers", () => {
  it("board markup contains one node per hex and honors highlights", () => {
    const html = renderBoard(boardViewModel(setup), [[0, 0]]);
    expect((html.match(/data-hex=/g) ?? []).length).toBe(9 * 13 - 4);
    expect(html).toContain('data-hex="0,0"');
    expect(html.split('class="hex highlight"').length).toBe(2);
  });

  it("player markup marks the side to move", () => {
    const html = renderPlayers(midgame);
    expect((html.match(/class="player/g) ?? []).length).toBe(2);
    expect(html).toContain("to-move");
  });

  it("insight panel renders top-k entries with percentages", () => {
    const html = renderInsight({
      index: 1,
      description: "pass, taking bonus card 1",
      v_root: 0.25,
      policy: [
        { index: 1, prob: 0.6, description: "pass, taking bonus card 1" },
        { index: 2, prob: 0.4, description: "advance shipping" },
      ],
      simulations: 100,
      ply: 10,
    });
    expect(html).toContain("60.0%");
    expect(html).toContain("v = 0.250");
    expect(renderInsight(null)).toContain("No agent move yet");
  });

  it("final screen appears only for terminal states", () => {
    expect(renderFinal(midgame)).toBe("");
    const done: StateView = {
      ...midgame,
      is_terminal: true,
      scores: [85, 95],
    };
    const html = renderFinal(done);
    expect(html).toContain("85");
    expect(html).toContain("95");
  });
});
