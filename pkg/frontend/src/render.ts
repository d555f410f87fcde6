/** HTML renderers: pure functions from view models to markup strings so
 * every screen is reproducible from the latest server responses. */

import {
  BoardViewModel,
  CULT_NAMES,
  cultTracks,
  playerPanel,
} from "./board";
import { ClassifiedAction, FamilyChoice, LocationChoice } from "./builder";
import { AgentMove, StateView } from "./types";

const PLAYER_COLORS = ["#d62828", "#003049"];

function esc(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderBoard(vm: BoardViewModel, highlights: [number, number][] = []): string {
  const marked = new Set(highlights.map(([r, c]) => `${r},${c}`));
  const rows = vm.rows
    .map((row, r) => {
      const cells = row
        .map((cell) => {
          const classes = ["hex"];
          if (marked.has(`${cell.r},${cell.c}`)) classes.push("highlight");
          if (cell.town) classes.push("town");
          const ownerStyle =
            cell.owner >= 0 ? `color:${PLAYER_COLORS[cell.owner]};` : "";
          return (
            `<div class="${classes.join(" ")}" data-hex="${cell.r},${cell.c}" ` +
            `style="grid-column:${cell.col2 + 1} / span 2;background:${cell.color};${ownerStyle}" ` +
            `title="(${cell.r},${cell.c}) ${cell.terrainName}">` +
            `<span class="glyph">${cell.glyph}</span></div>`
          );
        })
        .join("");
      return `<div class="hex-row" data-row="${r}">${cells}</div>`;
    })
    .join("");
  const bridges = vm.bridges
    .map(
      (b) =>
        `<div class="bridge" data-owner="${b.owner}">bridge ` +
        `(${b.from.join(",")})–(${b.to.join(",")})</div>`,
    )
    .join("");
  return `<div class="banner">${esc(vm.banner)}</div>` +
    `<div class="board">${rows}</div>` +
    `<div class="bridges">${bridges}</div>`;
}

export function renderPlayers(state: StateView): string {
  return state.players
    .map((p) => {
      const panel = playerPanel(state, p);
      const cls = panel.toMove ? "player to-move" : "player";
      return (
        `<div class="${cls}" data-seat="${panel.seat}">` +
        `<h3 style="color:${PLAYER_COLORS[panel.seat]}">${esc(panel.faction)}` +
        `${panel.passed ? " (passed)" : ""}</h3>` +
        `<div>VP ${panel.vp}</div>` +
        `<div>Workers ${panel.workers} · Coins ${panel.coins} · Priests ${panel.priests}</div>` +
        `<div>Power ${panel.power.join("/")}</div>` +
        `<div>Shipping ${panel.shipping} · Dig ${panel.digLevel}</div>` +
        `<div>Bonus: ${esc(panel.bonusCard)}</div>` +
        `<div>Favors: ${panel.favors.map(esc).join(", ") || "—"}</div>` +
        `<div>Towns: ${panel.townTiles}</div>` +
        `</div>`
      );
    })
    .join("");
}

export function renderCults(state: StateView): string {
  const tracks = cultTracks(state)
    .map(
      (t) =>
        `<div class="cult" data-cult="${CULT_NAMES.indexOf(t.name as never)}">` +
        `<span class="cult-name">${t.name}</span>` +
        t.positions
          .map(
            (pos, seat) =>
              `<span class="cult-pos" style="color:${PLAYER_COLORS[seat]}">${pos}</span>`,
          )
          .join(" ") +
        `</div>`,
    )
    .join("");
  return `<div class="cult-tracks">${tracks}</div>`;
}

export function renderFamilies(choices: FamilyChoice[]): string {
  return choices
    .map(
      (c) =>
        `<button class="family" data-family="${c.family}">` +
        `${esc(c.label)} <span class="count">(${c.count})</span></button>`,
    )
    .join("");
}

export function renderLocations(choices: LocationChoice[]): string {
  return choices
    .map((c) => {
      const label = c.hex
        ? `hex (${c.hex[0]}, ${c.hex[1]})`
        : c.cult !== null
          ? `${CULT_NAMES[c.cult]} track`
          : "continue";
      return `<button class="location" data-location="${c.key}">${label} (${c.count})</button>`;
    })
    .join("");
}

export function renderVariants(variants: ClassifiedAction[]): string {
  return variants
    .map(
      (v) =>
        `<button class="variant" data-index="${v.index}">${esc(v.description)}</button>`,
    )
    .join("");
}

/** Pending-town modal: exactly the legal town-tile choices. */
export function renderTownModal(variants: ClassifiedAction[]): string {
  const options = variants
    .map(
      (v) =>
        `<button class="variant town-tile" data-index="${v.index}">${esc(v.description)}</button>`,
    )
    .join("");
  return `<div class="modal town-modal"><h3>Found a town — choose a tile</h3>${options}</div>`;
}

export function renderInsight(move: AgentMove | null): string {
  if (!move) return `<div class="insight empty">No agent move yet.</div>`;
  const rows = move.policy
    .map(
      (e) =>
        `<tr><td>${esc(e.description)}</td>` +
        `<td class="prob">${(e.prob * 100).toFixed(1)}%</td></tr>`,
    )
    .join("");
  return (
    `<div class="insight">` +
    `<h3>Agent played: ${esc(move.description)}</h3>` +
    `<div>root value v = ${move.v_root.toFixed(3)} ` +
    `(${move.simulations} simulations)</div>` +
    `<table class="policy"><thead><tr><th>candidate</th><th>π</th></tr></thead>` +
    `<tbody>${rows}</tbody></table></div>`
  );
}

export function renderFinal(state: StateView): string {
  if (!state.is_terminal || !state.scores) return "";
  const names = state.players.map((p) => p.faction);
  return (
    `<div class="final-score">` +
    `<h2>Final scores</h2>` +
    `<div data-final="0">${esc(names[0])}: ${state.scores[0]}</div>` +
    `<div data-final="1">${esc(names[1])}: ${state.scores[1]}</div>` +
    `</div>`
  );
}
