/** Board view model: the 9x13 server grid rendered in the doubled-column
 * convention (each hex spans two columns; shifted rows start one column
 * later), so the on-screen geometry matches the engine's tensor layout
 * documentation. No rules logic lives here — pure projection of the
 * server state. */

import { BridgeView, CellView, PlayerView, StateView } from "./types";

export const ROWS = 9;
export const COLS = 13;
export const DOUBLED_COLS = 26;

export const TERRAIN_NAMES = [
  "plain",
  "swamp",
  "lake",
  "forest",
  "mountain",
  "wasteland",
  "desert",
  "water",
] as const;

export const TERRAIN_COLORS = [
  "#b58a4e", // plain
  "#6b6b3a", // swamp
  "#3f88c5", // lake
  "#2d6a4f", // forest
  "#8d99ae", // mountain
  "#9b2226", // wasteland
  "#e9c46a", // desert
  "#a8dadc", // water
] as const;

export const STRUCTURE_GLYPHS = ["", "D", "TP", "TE", "SA", "SH"] as const;

export const CULT_NAMES = ["Fire", "Water", "Earth", "Air"] as const;

/** True when (r, c) is a real hex of the staggered 9x13 board. */
export function inBounds(r: number, c: number): boolean {
  if (r < 0 || r >= ROWS || c < 0 || c >= COLS) return false;
  return r % 2 === 0 || c < COLS - 1;
}

/** Doubled-column span [start, end) of logical hex (r, c). */
export function doubledColumns(r: number, c: number): [number, number] {
  const start = r % 2 === 0 ? 2 * c : 2 * c + 1;
  return [start, start + 2];
}

export interface HexCell {
  r: number;
  c: number;
  terrain: number;
  terrainName: string;
  color: string;
  structure: number;
  glyph: string;
  owner: number;
  town: boolean;
  /** Doubled-column start, for CSS grid placement. */
  col2: number;
}

export interface BoardViewModel {
  rows: HexCell[][];
  bridges: BridgeView[];
  banner: string;
}

export function hexCell(r: number, c: number, cell: CellView): HexCell {
  return {
    r,
    c,
    terrain: cell.terrain,
    terrainName: TERRAIN_NAMES[cell.terrain],
    color: TERRAIN_COLORS[cell.terrain],
    structure: cell.structure,
    glyph: STRUCTURE_GLYPHS[cell.structure],
    owner: cell.owner,
    town: cell.town,
    col2: doubledColumns(r, c)[0],
  };
}

export function boardViewModel(state: StateView): BoardViewModel {
  const rows: HexCell[][] = [];
  for (let r = 0; r < ROWS; r++) {
    const row: HexCell[] = [];
    for (let c = 0; c < COLS; c++) {
      if (!inBounds(r, c)) continue;
      row.push(hexCell(r, c, state.board[r][c]));
    }
    rows.push(row);
  }
  return { rows, bridges: state.bridges, banner: bannerText(state) };
}

export function bannerText(state: StateView): string {
  if (state.is_terminal && state.scores) {
    const [a, b] = state.scores;
    const names = state.players.map((p) => p.faction);
    const result =
      a === b ? "Tie game" : a > b ? `${names[0]} wins` : `${names[1]} wins`;
    return `Game over — ${names[0]} ${a} : ${b} ${names[1]} — ${result}`;
  }
  if (state.phase === "SETUP") {
    return `Setup — ${state.players[state.to_move].faction} places a dwelling`;
  }
  const tile = state.scoring_tile_names[state.round - 1] ?? "";
  return `Round ${state.round} of 6 — scoring: ${tile} — ${state.players[state.to_move].faction} to move`;
}

export interface PlayerPanel {
  seat: number;
  faction: string;
  vp: number;
  workers: number;
  coins: number;
  priests: number;
  power: [number, number, number];
  shipping: number;
  digLevel: number;
  bonusCard: string;
  favors: string[];
  townTiles: number;
  passed: boolean;
  toMove: boolean;
}

export function playerPanel(state: StateView, p: PlayerView): PlayerPanel {
  return {
    seat: p.seat,
    faction: p.faction,
    vp: p.vp,
    workers: p.workers,
    coins: p.coins,
    priests: p.priests,
    power: p.power,
    shipping: p.shipping,
    digLevel: p.dig_level,
    bonusCard:
      p.bonus_card === null ? "—" : state.bonus_card_names[
        state.bonus_in_play.indexOf(p.bonus_card)
      ] ?? `card ${p.bonus_card}`,
    favors: p.favors.map((f) => state.favor_names[f]),
    townTiles: p.towns.reduce((a, b) => a + b, 0),
    passed: p.passed,
    toMove: state.to_move === p.seat && !state.is_terminal,
  };
}

export interface CultTrackView {
  name: string;
  positions: number[]; // per seat
}

export function cultTracks(state: StateView): CultTrackView[] {
  return CULT_NAMES.map((name, i) => ({
    name,
    positions: state.players.map((p) => p.cults[i]),
  }));
}
