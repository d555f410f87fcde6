"""Faction tables for the two supported factions: Engineers and Halflings.

Costs and incomes follow the standard two-player base game. Each faction
table is a plain data record so the engine never branches on faction
identity except for the two special mechanics (Engineers' bridge action,
Halflings' stronghold spades), which are handled in the engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

from .board import Structure, Terrain


class Faction(IntEnum):
    ENGINEERS = 0
    HALFLINGS = 1


#: Index of each faction in the 14-slot faction block of the state tensor.
#: The full game has 14 factions; only two are playable here.
FACTION_LAYER_INDEX = {
    Faction.ENGINEERS: 10,
    Faction.HALFLINGS: 2,
}

NUM_FACTION_LAYERS = 14


@dataclass(frozen=True)
class Cost:
    workers: int = 0
    coins: int = 0
    priests: int = 0


@dataclass(frozen=True)
class FactionSpec:
    name: str
    home_terrain: Terrain
    start_workers: int
    start_coins: int
    start_power: tuple[int, int, int]
    start_cults: tuple[int, int, int, int]
    # Building costs; trading post has two prices depending on whether
    # an opponent structure is directly adjacent.
    dwelling_cost: Cost
    tp_cost_near: Cost
    tp_cost_far: Cost
    temple_cost: Cost
    sanctuary_cost: Cost
    stronghold_cost: Cost
    dig_upgrade_cost: Cost
    shipping_upgrade_cost: Cost
    # Income revealed per placed building, in placement order.
    dwelling_workers: tuple[int, ...]
    tp_coins: tuple[int, ...]
    tp_power: tuple[int, ...]
    base_workers: int
    stronghold_power_income: int
    vp_per_spade: int


ENGINEERS_SPEC = FactionSpec(
    name="Engineers",
    home_terrain=Terrain.MOUNTAIN,
    start_workers=2,
    start_coins=10,
    start_power=(3, 9, 0),
    start_cults=(0, 0, 0, 0),
    dwelling_cost=Cost(workers=1, coins=1),
    tp_cost_near=Cost(workers=1, coins=2),
    tp_cost_far=Cost(workers=1, coins=4),
    temple_cost=Cost(workers=1, coins=4),
    sanctuary_cost=Cost(workers=3, coins=6),
    stronghold_cost=Cost(workers=3, coins=6),
    dig_upgrade_cost=Cost(workers=2, coins=5, priests=1),
    shipping_upgrade_cost=Cost(coins=4, priests=1),
    dwelling_workers=(1, 1, 0, 1, 1, 0, 1, 1),
    tp_coins=(2, 2, 2, 2),
    tp_power=(1, 1, 2, 2),
    base_workers=0,
    stronghold_power_income=2,
    vp_per_spade=0,
)

HALFLINGS_SPEC = FactionSpec(
    name="Halflings",
    home_terrain=Terrain.PLAIN,
    start_workers=3,
    start_coins=15,
    start_power=(3, 9, 0),
    start_cults=(0, 0, 1, 1),  # fire, water, earth, air
    dwelling_cost=Cost(workers=1, coins=2),
    tp_cost_near=Cost(workers=2, coins=3),
    tp_cost_far=Cost(workers=2, coins=6),
    temple_cost=Cost(workers=2, coins=5),
    sanctuary_cost=Cost(workers=4, coins=6),
    stronghold_cost=Cost(workers=4, coins=8),
    dig_upgrade_cost=Cost(workers=1, coins=2, priests=1),
    shipping_upgrade_cost=Cost(coins=4, priests=1),
    dwelling_workers=(1, 1, 1, 1, 1, 1, 1, 0),
    tp_coins=(2, 2, 2, 2),
    tp_power=(1, 1, 2, 2),
    base_workers=1,
    stronghold_power_income=2,
    vp_per_spade=1,
)

FACTION_SPECS = {
    Faction.ENGINEERS: ENGINEERS_SPEC,
    Faction.HALFLINGS: HALFLINGS_SPEC,
}

MAX_SHIPPING = 3
MAX_DIG_LEVEL = 2  # spade exchange rate 3 -> 2 -> 1
MAX_PRIESTS = 7
MAX_BRIDGES = 3

#: VP awarded for each shipping advance, by new level.
SHIPPING_ADVANCE_VP = {1: 2, 2: 3, 3: 4}
DIG_ADVANCE_VP = 6

#: Engineers score this per bridge connecting two own structures when
#: passing with a built stronghold.
ENGINEERS_BRIDGE_PASS_VP = 3

#: Cost of each upgrade step keyed by (from, to).
UPGRADE_PATHS = {
    (Structure.DWELLING, Structure.TRADING_POST): 0,
    (Structure.TRADING_POST, Structure.STRONGHOLD): 1,
    (Structure.TRADING_POST, Structure.TEMPLE): 2,
    (Structure.TEMPLE, Structure.SANCTUARY): 3,
}

UPGRADE_KINDS = [
    (Structure.DWELLING, Structure.TRADING_POST),
    (Structure.TRADING_POST, Structure.STRONGHOLD),
    (Structure.TRADING_POST, Structure.TEMPLE),
    (Structure.TEMPLE, Structure.SANCTUARY),
]


def spade_exchange_rate(dig_level: int) -> int:
    return 3 - dig_level
