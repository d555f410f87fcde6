"""State tensor and legal-mask codecs.

The state tensor has shape 9 x 26 x 206: the logical 9 x 13 hex grid is
horizontally doubled (each hex paints two adjacent columns, shifted rows
pad columns 0 and 25 with water) so hexagonal adjacency becomes plain
8-neighborhood adjacency. Layer offsets, widths, and count scales are
frozen in :data:`LAYER_LAYOUT`; checkpoints embed :func:`layout_hash` so
a stored network can never be paired with a drifted codec.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .rules.actions import (
    NUM_ACTIONS,
    NUM_MAIN_ACTIONS,
    NUM_TOWN_ACTIONS,
    TOWN_BLOCK_START,
    action_to_index,
)
from .rules.board import BUILDING_STOCK, COLS, ROWS, Structure, Terrain
from .rules.engine import legal_actions, player_income
from .rules.factions import FACTION_LAYER_INDEX, NUM_FACTION_LAYERS
from .rules.state import GameState
from .rules.tiles import (
    NUM_BONUS_CARDS,
    NUM_FAVOR_TILES,
    NUM_POWER_ACTIONS,
    NUM_SCORING_TILES,
    NUM_TOWN_TILES,
    TOWN_TILE_COPIES,
)

DCOLS = 26
NUM_LAYERS = 206

# Fixed normalization maxima for count layers; values clamp into [0, 1].
SCALE_RESOURCE = 30.0  # workers, coins
SCALE_PRIESTS = 7.0
SCALE_POWER_BOWL = 12.0
SCALE_VP = 200.0
SCALE_TERRAFORM = 3.0
SCALE_SHIPPING = 3.0
SCALE_BRIDGES = 3.0
SCALE_CULT = 10.0
SCALE_FAVOR_SUPPLY = 3.0
SCALE_INCOME_W = 15.0
SCALE_INCOME_P = 5.0
SCALE_INCOME_C = 20.0
SCALE_INCOME_PW = 20.0

#: Favor-ownership sub-block width: only the first 10 of the 12 favor
#: types are encoded per player.
NUM_FAVOR_OWNED_LAYERS = 10

_PER_PLAYER = 48
_P0 = 96
_P1 = _P0 + _PER_PLAYER
_FACTION_BLOCK = _P1 + _PER_PLAYER  # 192


def _layout_entries() -> list[dict]:
    entries = [
        {"name": "terrain", "offset": 0, "width": 8, "scale": 1.0},
        {"name": "structures", "offset": 8, "width": 5, "scale": 1.0},
        {"name": "power_action_available", "offset": 13, "width": 6,
         "scale": 1.0},
        {"name": "scoring_tiles", "offset": 19, "width": 56, "scale": 1.0},
        {"name": "favor_supply", "offset": 75, "width": 12,
         "scale": SCALE_FAVOR_SUPPLY},
        {"name": "bonus_in_play", "offset": 87, "width": 9, "scale": 1.0},
    ]
    for p, base in ((0, _P0), (1, _P1)):
        entries += [
            {"name": f"p{p}.workers", "offset": base + 0, "width": 1,
             "scale": SCALE_RESOURCE},
            {"name": f"p{p}.priests", "offset": base + 1, "width": 1,
             "scale": SCALE_PRIESTS},
            {"name": f"p{p}.coins", "offset": base + 2, "width": 1,
             "scale": SCALE_RESOURCE},
            {"name": f"p{p}.power_bowls", "offset": base + 3, "width": 3,
             "scale": SCALE_POWER_BOWL},
            {"name": f"p{p}.terraform_cost", "offset": base + 6, "width": 1,
             "scale": SCALE_TERRAFORM},
            {"name": f"p{p}.shipping", "offset": base + 7, "width": 1,
             "scale": SCALE_SHIPPING},
            {"name": f"p{p}.cults", "offset": base + 8, "width": 4,
             "scale": SCALE_CULT},
            {"name": f"p{p}.buildings", "offset": base + 12, "width": 5,
             "scale": "stock"},
            {"name": f"p{p}.score", "offset": base + 17, "width": 1,
             "scale": SCALE_VP},
            {"name": f"p{p}.income", "offset": base + 18, "width": 4,
             "scale": "income"},
            {"name": f"p{p}.bridges_remaining", "offset": base + 22,
             "width": 1, "scale": SCALE_BRIDGES},
            {"name": f"p{p}.bridge_map", "offset": base + 23, "width": 1,
             "scale": 1.0},
            {"name": f"p{p}.bonus_card", "offset": base + 24, "width": 9,
             "scale": 1.0},
            {"name": f"p{p}.favors", "offset": base + 33,
             "width": NUM_FAVOR_OWNED_LAYERS, "scale": 1.0},
            {"name": f"p{p}.towns", "offset": base + 43, "width": 5,
             "scale": float(TOWN_TILE_COPIES)},
        ]
    entries.append({"name": "faction_to_move", "offset": _FACTION_BLOCK,
                    "width": NUM_FACTION_LAYERS, "scale": 1.0})
    return entries


LAYER_LAYOUT = _layout_entries()


def layout_manifest() -> str:
    """Canonical JSON manifest of the layer layout (the file contract)."""
    return json.dumps({"shape": [ROWS, DCOLS, NUM_LAYERS],
                       "layers": LAYER_LAYOUT},
                      sort_keys=True, separators=(",", ":"))


def layout_hash() -> str:
    return hashlib.sha256(layout_manifest().encode()).hexdigest()


def _expand(grid: np.ndarray, pad: float = 0.0) -> np.ndarray:
    """Double a (9, 13) grid into the 26-column representation."""
    out = np.full((ROWS, DCOLS), pad, dtype=np.float32)
    for r in range(ROWS):
        if r % 2 == 0:
            out[r, 0::2] = grid[r]
            out[r, 1::2] = grid[r]
        else:
            row = grid[r, :COLS - 1]
            out[r, 1:25:2] = row
            out[r, 2:26:2] = row
    return out


def encode_state(state: GameState) -> np.ndarray:
    """Encode a state as a (9, 26, 206) float32 stack with entries in
    [0, 1]. The faction block one-hots the faction of the player to
    move."""
    x = np.zeros((ROWS, DCOLS, NUM_LAYERS), dtype=np.float32)
    terrain = state.terrain
    for t in range(8):
        pad = 1.0 if t == int(Terrain.WATER) else 0.0
        x[:, :, t] = _expand((terrain == t).astype(np.float32), pad=pad)
    for s in range(1, 6):
        x[:, :, 8 + s - 1] = _expand(
            (state.structure == s).astype(np.float32))
    for slot in range(NUM_POWER_ACTIONS):
        if not state.power_actions_used[slot]:
            x[:, :, 13 + slot] = 1.0
    for t in range(NUM_SCORING_TILES):
        base = 19 + t * 7
        for rnd in range(6):
            if state.scoring_tiles[rnd] == t:
                x[:, :, base + rnd] = 1.0
        if t in state.scoring_tiles:
            x[:, :, base + 6] = 1.0
    for f in range(NUM_FAVOR_TILES):
        x[:, :, 75 + f] = min(1.0, state.favor_supply[f] / SCALE_FAVOR_SUPPLY)
    for b in state.bonus_in_play:
        x[:, :, 87 + b] = 1.0
    for pidx, base in ((0, _P0), (1, _P1)):
        _encode_player(x, state, pidx, base)
    faction = state.players[state.to_move].faction
    x[:, :, _FACTION_BLOCK + FACTION_LAYER_INDEX[faction]] = 1.0
    return x


def _encode_player(x: np.ndarray, state: GameState, pidx: int,
                   base: int) -> None:
    p = state.players[pidx]
    clamp = lambda v, s: min(1.0, v / s)
    x[:, :, base + 0] = clamp(p.workers, SCALE_RESOURCE)
    x[:, :, base + 1] = clamp(p.priests, SCALE_PRIESTS)
    x[:, :, base + 2] = clamp(p.coins, SCALE_RESOURCE)
    for i in range(3):
        x[:, :, base + 3 + i] = clamp(p.power[i], SCALE_POWER_BOWL)
    x[:, :, base + 6] = clamp(3 - p.dig_level, SCALE_TERRAFORM)
    x[:, :, base + 7] = clamp(p.shipping, SCALE_SHIPPING)
    for i in range(4):
        x[:, :, base + 8 + i] = clamp(p.cults[i], SCALE_CULT)
    stocks = [BUILDING_STOCK[Structure(s)] for s in range(1, 6)]
    for i in range(5):
        x[:, :, base + 12 + i] = clamp(p.buildings[i], stocks[i])
    x[:, :, base + 17] = clamp(p.vp, SCALE_VP)
    w, c, pr, pw = player_income(p)
    x[:, :, base + 18] = clamp(w, SCALE_INCOME_W)
    x[:, :, base + 19] = clamp(pr, SCALE_INCOME_P)
    x[:, :, base + 20] = clamp(c, SCALE_INCOME_C)
    x[:, :, base + 21] = clamp(pw, SCALE_INCOME_PW)
    x[:, :, base + 22] = clamp(3 - p.bridges_built, SCALE_BRIDGES)
    bridge_map = np.zeros((ROWS, COLS), dtype=np.float32)
    for owner, h1, h2 in state.bridges:
        if owner == pidx:
            bridge_map[h1] = 1.0
            bridge_map[h2] = 1.0
    x[:, :, base + 23] = _expand(bridge_map)
    if p.bonus_card is not None:
        x[:, :, base + 24 + p.bonus_card] = 1.0
    for f in p.favors:
        if f < NUM_FAVOR_OWNED_LAYERS:
            x[:, :, base + 33 + f] = 1.0
    for t in range(NUM_TOWN_TILES):
        x[:, :, base + 43 + t] = clamp(p.towns[t], TOWN_TILE_COPIES)


def legal_mask(state: GameState) -> np.ndarray:
    """Bit i is set iff the action with dense index i is legal."""
    mask = np.zeros(NUM_ACTIONS, dtype=bool)
    for a in legal_actions(state):
        mask[action_to_index(a)] = True
    return mask


def mask_and_renormalize(
        p_main: np.ndarray, p_town: np.ndarray,
        mask: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Zero illegal entries and renormalize each head independently.

    A head whose legal probability mass is zero falls back to uniform
    over its legal entries. Raises ValueError if the mask has no legal
    action at all (a non-terminal state always has one).
    """
    p_main = np.asarray(p_main, dtype=np.float64)
    p_town = np.asarray(p_town, dtype=np.float64)
    if p_main.shape != (NUM_MAIN_ACTIONS,) or p_town.shape != (NUM_TOWN_ACTIONS,):
        raise ValueError("bad head shapes")
    if np.any(p_main < 0) or np.any(p_town < 0):
        raise ValueError("probabilities must be nonnegative")
    main_mask = mask[:TOWN_BLOCK_START]
    town_mask = mask[TOWN_BLOCK_START:]
    if not mask.any():
        raise ValueError("mask admits no legal action")

    def _renorm(p, m):
        out = np.zeros_like(p)
        if not m.any():
            return out
        masked = np.where(m, p, 0.0)
        total = masked.sum()
        if total <= 0.0:
            out[m] = 1.0 / m.sum()
        else:
            out = masked / total
        return out

    return _renorm(p_main, main_mask), _renorm(p_town, town_mask)
