"""Immutable game state snapshots.

Every operation in the engine returns a fresh state; numpy grids are
marked read-only so accidental mutation fails loudly.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import IntEnum
from typing import Optional

import numpy as np

from .board import BASE_TERRAIN, COLS, ROWS, Structure
from .factions import FACTION_SPECS, Faction
from .tiles import (
    FAVOR_SUPPLY,
    NUM_BONUS_IN_PLAY,
    NUM_POWER_ACTIONS,
    NUM_TOWN_TILES,
    TOWN_TILE_COPIES,
)


class Phase(IntEnum):
    SETUP = 0
    ACTIONS = 1
    END = 2


@dataclass(frozen=True)
class GameConfig:
    """Pre-game setup; the only source of randomness in a game."""

    seed: int = 0
    scoring_tiles: Optional[tuple[int, ...]] = None  # 6 tile ids, or seeded draw
    bonus_cards: Optional[tuple[int, ...]] = None  # 5 card ids, or seeded draw
    max_plies: int = 500
    factions: tuple[Faction, Faction] = (Faction.ENGINEERS, Faction.HALFLINGS)


@dataclass(frozen=True)
class PlayerState:
    faction: Faction
    workers: int
    coins: int
    priests: int = 0
    power: tuple[int, int, int] = (0, 0, 0)
    vp: int = 20
    shipping: int = 0
    dig_level: int = 0
    cults: tuple[int, int, int, int] = (0, 0, 0, 0)
    # Buildings placed on the board, indexed by Structure value 1..5.
    buildings: tuple[int, int, int, int, int] = (0, 0, 0, 0, 0)
    bonus_card: Optional[int] = None
    favors: frozenset[int] = frozenset()
    towns: tuple[int, int, int, int, int] = (0, 0, 0, 0, 0)
    bridges_built: int = 0
    passed: bool = False
    keys_used: int = 0
    # Once-per-round special actions: bonus-card spade, favor cult step,
    # faction special (Engineers' bridge).
    specials_used: tuple[bool, bool, bool] = (False, False, False)

    def building_count(self, s: Structure) -> int:
        return self.buildings[int(s) - 1]

    @property
    def total_power(self) -> int:
        return sum(self.power)

    def replace(self, **kw) -> "PlayerState":
        return replace(self, **kw)


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class GameState:
    config: GameConfig
    terrain: np.ndarray  # (9, 13) int8 Terrain
    structure: np.ndarray  # (9, 13) int8 Structure
    owner: np.ndarray  # (9, 13) int8 player id, -1 for none
    town_marked: np.ndarray  # (9, 13) bool, hexes already part of a town
    players: tuple[PlayerState, PlayerState]
    # Canonical bridge records: (player, (r1, c1), (r2, c2)) with hex order
    # normalized so equality is structural.
    bridges: tuple[tuple[int, tuple[int, int], tuple[int, int]], ...]
    round: int  # 0 = setup, 1..6 = play rounds
    phase: Phase
    to_move: int
    scoring_tiles: tuple[int, int, int, int, int, int]
    bonus_in_play: tuple[int, int, int, int, int]
    bonus_coins: tuple[int, int, int, int, int]
    favor_supply: tuple[int, ...]
    town_supply: tuple[int, ...]
    power_actions_used: tuple[bool, ...]
    # Shared priest slots per cult track: (3-step slot used, 2-step slots used).
    priest_slots: tuple[tuple[bool, int], ...]
    start_player: int = 0
    setup_stage: int = 0
    pending_town: int = 0  # pending town-tile choices for `to_move`
    ply: int = 0
    truncated: bool = False

    def replace(self, **kw) -> "GameState":
        for key in ("terrain", "structure", "owner", "town_marked"):
            if key in kw:
                kw[key] = _frozen(kw[key])
        return replace(self, **kw)

    @property
    def current_player(self) -> PlayerState:
        return self.players[self.to_move]

    def scoring_tile_now(self) -> Optional[int]:
        if 1 <= self.round <= 6:
            return self.scoring_tiles[self.round - 1]
        return None


def initial_player(faction: Faction) -> PlayerState:
    spec = FACTION_SPECS[faction]
    return PlayerState(
        faction=faction,
        workers=spec.start_workers,
        coins=spec.start_coins,
        power=spec.start_power,
        cults=spec.start_cults,
    )


def initial_state(config: GameConfig, scoring: tuple[int, ...],
                  bonus: tuple[int, ...]) -> GameState:
    terrain = BASE_TERRAIN.copy()
    structure = np.zeros((ROWS, COLS), dtype=np.int8)
    owner = np.full((ROWS, COLS), -1, dtype=np.int8)
    town_marked = np.zeros((ROWS, COLS), dtype=bool)
    return GameState(
        config=config,
        terrain=_frozen(terrain),
        structure=_frozen(structure),
        owner=_frozen(owner),
        town_marked=_frozen(town_marked),
        players=(initial_player(config.factions[0]),
                 initial_player(config.factions[1])),
        bridges=(),
        round=0,
        phase=Phase.SETUP,
        to_move=0,
        scoring_tiles=tuple(scoring),
        bonus_in_play=tuple(bonus),
        bonus_coins=(0,) * NUM_BONUS_IN_PLAY,
        favor_supply=FAVOR_SUPPLY,
        town_supply=(TOWN_TILE_COPIES,) * NUM_TOWN_TILES,
        power_actions_used=(False,) * NUM_POWER_ACTIONS,
        priest_slots=((False, 0),) * 4,
    )
