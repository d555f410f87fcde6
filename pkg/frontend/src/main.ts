/** Browser bootstrap: wires the API client, the action builder, and the
 * renderers into a stateless-refresh-safe game loop. All state shown on
 * screen comes from the latest server responses. */

import { GameClient, ApiError } from "./api";
import { boardViewModel } from "./board";
import {
  Family,
  familyChoices,
  highlightedHexes,
  locationChoices,
  variantChoices,
} from "./builder";
import {
  renderBoard,
  renderCults,
  renderFamilies,
  renderFinal,
  renderInsight,
  renderLocations,
  renderTownModal,
  renderPlayers,
  renderVariants,
} from "./render";
import { AgentMove, LegalEntry, StateView } from "./types";

interface UiSelection {
  family: Family | null;
  location: string | null;
}

const client = new GameClient("");

let gameId: string | null = null;
let humanSeat = 0;
let lastMove: AgentMove | null = null;
let selection: UiSelection = { family: null, location: null };

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node;
}

function setStatus(text: string): void {
  el("status").textContent = text;
}

async function refresh(): Promise<void> {
  if (!gameId) return;
  const game = await client.getGame(gameId);
  const state = game.state;
  let legal: LegalEntry[] = [];
  if (!state.is_terminal && state.to_move === humanSeat) {
    legal = (await client.getLegal(gameId)).actions;
  }
  render(state, legal);
  if (!state.is_terminal && state.to_move !== humanSeat) {
    setStatus("Agent is thinking…");
    const res = await client.agentMove(gameId);
    lastMove = res.move;
    await refresh();
  }
}

function render(state: StateView, legal: LegalEntry[]): void {
  const highlights =
    selection.family !== null ? highlightedHexes(legal, selection.family) : [];
  el("board").innerHTML = renderBoard(boardViewModel(state), highlights);
  el("players").innerHTML = renderPlayers(state);
  el("cults").innerHTML = renderCults(state);
  el("insight").innerHTML = renderInsight(lastMove);
  el("final").innerHTML = renderFinal(state);

  const builder = el("builder");
  if (state.is_terminal || state.to_move !== humanSeat) {
    builder.innerHTML = "";
    if (state.is_terminal) setStatus("Game over.");
    return;
  }
  setStatus("Your turn.");
  if (state.pending_town > 0) {
    builder.innerHTML = renderTownModal(variantChoices(legal, "town", "-"));
    return;
  }
  if (selection.family === null) {
    builder.innerHTML = renderFamilies(familyChoices(legal));
    return;
  }
  const locations = locationChoices(legal, selection.family);
  const single = locations.length === 1 ? locations[0].key : null;
  const chosen = selection.location ?? single;
  if (chosen === null) {
    builder.innerHTML =
      `<button class="back" data-back="family">← families</button>` +
      renderLocations(locations);
    return;
  }
  builder.innerHTML =
    `<button class="back" data-back="family">← start over</button>` +
    renderVariants(variantChoices(legal, selection.family, chosen));
}

async function submit(index: number): Promise<void> {
  if (!gameId) return;
  try {
    await client.submitAction(gameId, index);
    selection = { family: null, location: null };
    await refresh();
  } catch (err) {
    if (err instanceof ApiError) {
      setStatus(`Rejected: ${err.detail}`);
      await refresh();
    } else {
      throw err;
    }
  }
}

function onBuilderClick(event: Event): void {
  const target = event.target as HTMLElement;
  const button = target.closest("button");
  if (!button) return;
  if (button.dataset.back) {
    selection = { family: null, location: null };
    void refresh();
    return;
  }
  if (button.dataset.family) {
    selection = { family: button.dataset.family as Family, location: null };
    void refresh();
    return;
  }
  if (button.dataset.location) {
    selection.location = button.dataset.location;
    void refresh();
    return;
  }
  if (button.dataset.index) {
    void submit(Number(button.dataset.index));
  }
}

async function newGame(): Promise<void> {
  const seed = Number((el("seed") as HTMLInputElement).value) || 0;
  humanSeat = Number((el("seat") as HTMLSelectElement).value);
  const agent = (el("agent") as HTMLInputElement).value || "uniform";
  const game = await client.createGame({ seed, humanSeat: humanSeat, agent });
  gameId = game.id;
  lastMove = null;
  selection = { family: null, location: null };
  window.location.hash = game.id;
  await refresh();
}

export function boot(): void {
  el("new-game").addEventListener("click", () => void newGame());
  el("builder").addEventListener("click", onBuilderClick);
  const existing = window.location.hash.slice(1);
  if (existing) {
    gameId = existing;
    void client
      .getGame(existing)
      .then((g) => {
        humanSeat = g.human_seat;
        return refresh();
      })
      .catch(() => {
        gameId = null;
      });
  }
}

if (typeof document !== "undefined") {
  document.addEventListener("DOMContentLoaded", boot);
}
