"""Round scoring tiles, bonus cards, favor tiles, town tiles, power actions."""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum


class Cult(IntEnum):
    FIRE = 0
    WATER = 1
    EARTH = 2
    AIR = 3


class Trigger(IntEnum):
    """Events that round scoring tiles and favor tiles can reward."""

    DWELLING = 0
    TRADING_POST = 1
    STRONGHOLD_SANCTUARY = 2
    SPADE = 3
    TOWN = 4


@dataclass(frozen=True)
class ScoringTile:
    """Per-round tile: action VP during the round, cult reward at its end."""

    name: str
    trigger: Trigger
    trigger_vp: int
    cult: Cult
    cult_per: int  # steps on `cult` per one reward payout
    reward_workers: int = 0
    reward_coins: int = 0
    reward_priests: int = 0
    reward_power: int = 0


SCORING_TILES: tuple[ScoringTile, ...] = (
    ScoringTile("SPADE>>2 / 1EARTH->1C", Trigger.SPADE, 2, Cult.EARTH, 1,
                reward_coins=1),
    ScoringTile("TOWN>>5 / 4EARTH->2W", Trigger.TOWN, 5, Cult.EARTH, 4,
                reward_workers=2),
    ScoringTile("D>>2 / 4WATER->1P", Trigger.DWELLING, 2, Cult.WATER, 4,
                reward_priests=1),
    ScoringTile("D>>2 / 4FIRE->4PW", Trigger.DWELLING, 2, Cult.FIRE, 4,
                reward_power=4),
    ScoringTile("TP>>3 / 4WATER->1W", Trigger.TRADING_POST, 3, Cult.WATER, 4,
                reward_workers=1),
    ScoringTile("TP>>3 / 4AIR->2C", Trigger.TRADING_POST, 3, Cult.AIR, 4,
                reward_coins=2),
    ScoringTile("SH/SA>>5 / 2FIRE->1W", Trigger.STRONGHOLD_SANCTUARY, 5,
                Cult.FIRE, 2, reward_workers=1),
    ScoringTile("SH/SA>>5 / 2AIR->2PW", Trigger.STRONGHOLD_SANCTUARY, 5,
                Cult.AIR, 2, reward_power=2),
)

#: The spade scoring tile may not govern rounds 5 or 6.
SPADE_TILE_INDEX = 0
NUM_SCORING_TILES = len(SCORING_TILES)


@dataclass(frozen=True)
class BonusCard:
    name: str
    income_workers: int = 0
    income_coins: int = 0
    income_priests: int = 0
    income_power: int = 0
    special_spade: bool = False
    # VP per owned building of the keyed structure, scored when passing.
    pass_vp_dwelling: int = 0
    pass_vp_tp: int = 0
    pass_vp_shsa: int = 0


BONUS_CARDS: tuple[BonusCard, ...] = (
    BonusCard("spade +2c", income_coins=2, special_spade=True),
    BonusCard("+4c", income_coins=4),
    BonusCard("+6c", income_coins=6),
    BonusCard("+3pw", income_power=3),
    BonusCard("+1w +3pw", income_workers=1, income_power=3),
    BonusCard("+2w", income_workers=2),
    BonusCard("+1p", income_priests=1),
    BonusCard("pass D*1 +2c", income_coins=2, pass_vp_dwelling=1),
    BonusCard("pass SH/SA*4 +2pw", income_power=2, pass_vp_shsa=4),
)

NUM_BONUS_CARDS = len(BONUS_CARDS)
NUM_BONUS_IN_PLAY = 5  # P + 3 with P = 2


@dataclass(frozen=True)
class FavorTile:
    name: str
    cult: Cult
    cult_steps: int
    income_workers: int = 0
    income_coins: int = 0
    income_power: int = 0
    trigger: Trigger | None = None
    trigger_vp: int = 0
    pass_vp_tp: int = 0
    town_power_discount: bool = False  # towns need power 6 instead of 7
    special_cult_step: bool = False  # once-per-round +1 cult action


FAVOR_TILES: tuple[FavorTile, ...] = (
    FavorTile("3 fire", Cult.FIRE, 3),
    FavorTile("3 water", Cult.WATER, 3),
    FavorTile("3 earth", Cult.EARTH, 3),
    FavorTile("3 air", Cult.AIR, 3),
    FavorTile("2 fire / town-6", Cult.FIRE, 2, town_power_discount=True),
    FavorTile("2 water / cult action", Cult.WATER, 2, special_cult_step=True),
    FavorTile("2 earth / +1w +1pw", Cult.EARTH, 2, income_workers=1,
              income_power=1),
    FavorTile("2 air / +4pw", Cult.AIR, 2, income_power=4),
    FavorTile("1 fire / +3c", Cult.FIRE, 1, income_coins=3),
    FavorTile("1 water / TP>>3", Cult.WATER, 1, trigger=Trigger.TRADING_POST,
              trigger_vp=3),
    FavorTile("1 earth / D>>2", Cult.EARTH, 1, trigger=Trigger.DWELLING,
              trigger_vp=2),
    FavorTile("1 air / pass TP vp", Cult.AIR, 1, pass_vp_tp=2),
)

NUM_FAVOR_TILES = len(FAVOR_TILES)
#: Supply: one copy of each 3-step tile, three copies of the rest.
FAVOR_SUPPLY: tuple[int, ...] = tuple(
    1 if t.cult_steps == 3 else 3 for t in FAVOR_TILES
)

#: Deterministic preference order used when a temple or sanctuary grants a
#: favor tile (the action space has no favor-choice head).
FAVOR_PRIORITY: tuple[int, ...] = (10, 9, 6, 8, 11, 7, 5, 4, 2, 1, 3, 0)


@dataclass(frozen=True)
class TownTile:
    name: str
    vp: int
    coins: int = 0
    workers: int = 0
    priests: int = 0
    power: int = 0


TOWN_TILES: tuple[TownTile, ...] = (
    TownTile("5vp 6c", 5, coins=6),
    TownTile("6vp 8pw", 6, power=8),
    TownTile("7vp 2w", 7, workers=2),
    TownTile("8vp 1p", 8, priests=1),
    TownTile("9vp", 9),
)

NUM_TOWN_TILES = len(TOWN_TILES)
TOWN_TILE_COPIES = 2

#: Founding a town requires this many connected buildings with at least
#: this much combined structure power (7, or 6 with the discount favor).
TOWN_MIN_BUILDINGS = 4
TOWN_MIN_POWER = 7


@dataclass(frozen=True)
class PowerAction:
    name: str
    cost: int
    bridge: bool = False
    priests: int = 0
    workers: int = 0
    coins: int = 0
    spades: int = 0


POWER_ACTIONS: tuple[PowerAction, ...] = (
    PowerAction("3pw: bridge", 3, bridge=True),
    PowerAction("3pw: 1 priest", 3, priests=1),
    PowerAction("4pw: 2 workers", 4, workers=2),
    PowerAction("4pw: 7 coins", 4, coins=7),
    PowerAction("4pw: 1 spade", 4, spades=1),
    PowerAction("6pw: 2 spades", 6, spades=2),
)

NUM_POWER_ACTIONS = len(POWER_ACTIONS)

#: Cult track: crossing positions 3, 5, 7 grants power; 10 needs a key.
CULT_POWER_STEPS = {3: 1, 5: 2, 7: 2}
CULT_MAX = 10
CULT_TOP_LOCKED = 10  # only one player may occupy position 10 per track

#: End-game cult scoring for 2 players: best 8, second 4; ties split.
CULT_ENDGAME_VP = (8, 4)
#: End-game largest-area scoring: best 18, second 12; ties split.
AREA_ENDGAME_VP = (18, 12)
