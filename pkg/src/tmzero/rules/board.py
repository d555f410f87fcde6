"""Fixed base map, terrain types, and hexagonal adjacency.

The board is a 9x13 logical grid of hexes. Rows with even index
(0, 2, 4, 6, 8) hold 13 hexes; rows with odd index are shifted half a
hex to the right and hold only 12 hexes (column 12 is permanent water).
In the doubled-column rendering used by the tensor encoder, an even-row
hex (r, c) covers columns 2c and 2c+1 while an odd-row hex covers
columns 2c+1 and 2c+2, with water padding at columns 0 and 25.
"""

from __future__ import annotations

from enum import IntEnum
from functools import lru_cache

import numpy as np

ROWS = 9
COLS = 13
NUM_HEXES = ROWS * COLS


class Terrain(IntEnum):
    PLAIN = 0
    SWAMP = 1
    LAKE = 2
    FOREST = 3
    MOUNTAIN = 4
    WASTELAND = 5
    DESERT = 6
    WATER = 7


#: The seven buildable terrains form a cycle (the terraforming wheel);
#: spade distance between two terrains is the shorter arc on this cycle.
NUM_LAND_TERRAIN = 7


def wheel_distance(a: int, b: int) -> int:
    """Spades needed to transform terrain ``a`` into terrain ``b``."""
    if a >= NUM_LAND_TERRAIN or b >= NUM_LAND_TERRAIN:
        raise ValueError("water cannot be terraformed")
    d = abs(int(a) - int(b))
    return min(d, NUM_LAND_TERRAIN - d)


class Structure(IntEnum):
    NONE = 0
    DWELLING = 1
    TRADING_POST = 2
    TEMPLE = 3
    SANCTUARY = 4
    STRONGHOLD = 5


#: Power value of each structure for town founding.
STRUCTURE_POWER = {
    Structure.NONE: 0,
    Structure.DWELLING: 1,
    Structure.TRADING_POST: 2,
    Structure.TEMPLE: 2,
    Structure.SANCTUARY: 3,
    Structure.STRONGHOLD: 3,
}

#: Per-player building stock.
BUILDING_STOCK = {
    Structure.DWELLING: 8,
    Structure.TRADING_POST: 4,
    Structure.TEMPLE: 3,
    Structure.SANCTUARY: 1,
    Structure.STRONGHOLD: 1,
}

_T = Terrain
# Base map, row by row. Odd rows list 12 hexes; column 12 there is water.
_BASE_MAP_ROWS = [
    [_T.PLAIN, _T.MOUNTAIN, _T.FOREST, _T.LAKE, _T.DESERT, _T.WASTELAND,
     _T.PLAIN, _T.SWAMP, _T.WASTELAND, _T.FOREST, _T.LAKE, _T.WASTELAND,
     _T.SWAMP],
    [_T.DESERT, _T.WATER, _T.WATER, _T.PLAIN, _T.SWAMP, _T.WATER, _T.WATER,
     _T.DESERT, _T.SWAMP, _T.WATER, _T.WATER, _T.DESERT],
    [_T.WATER, _T.WATER, _T.SWAMP, _T.WATER, _T.MOUNTAIN, _T.WATER,
     _T.FOREST, _T.WATER, _T.FOREST, _T.WATER, _T.MOUNTAIN, _T.WATER,
     _T.WATER],
    [_T.FOREST, _T.LAKE, _T.DESERT, _T.WATER, _T.WATER, _T.WASTELAND,
     _T.LAKE, _T.WATER, _T.WASTELAND, _T.WATER, _T.WASTELAND, _T.PLAIN],
    [_T.SWAMP, _T.PLAIN, _T.WASTELAND, _T.LAKE, _T.SWAMP, _T.PLAIN,
     _T.MOUNTAIN, _T.WASTELAND, _T.WATER, _T.WATER, _T.FOREST, _T.SWAMP,
     _T.LAKE],
    [_T.MOUNTAIN, _T.FOREST, _T.WATER, _T.WATER, _T.DESERT, _T.FOREST,
     _T.WATER, _T.WATER, _T.WATER, _T.PLAIN, _T.MOUNTAIN, _T.PLAIN],
    [_T.WATER, _T.WATER, _T.WATER, _T.MOUNTAIN, _T.WATER, _T.FOREST,
     _T.WATER, _T.DESERT, _T.WATER, _T.SWAMP, _T.LAKE, _T.DESERT, _T.LAKE],
    [_T.DESERT, _T.LAKE, _T.PLAIN, _T.WATER, _T.WATER, _T.PLAIN, _T.WATER,
     _T.MOUNTAIN, _T.WATER, _T.DESERT, _T.WATER, _T.FOREST],
    [_T.WASTELAND, _T.SWAMP, _T.MOUNTAIN, _T.LAKE, _T.WASTELAND, _T.FOREST,
     _T.DESERT, _T.PLAIN, _T.MOUNTAIN, _T.SWAMP, _T.LAKE, _T.FOREST,
     _T.WASTELAND],
]


def base_terrain() -> np.ndarray:
    """The fixed 9x13 starting terrain grid (int8, Terrain values)."""
    grid = np.full((ROWS, COLS), int(Terrain.WATER), dtype=np.int8)
    for r, row in enumerate(_BASE_MAP_ROWS):
        for c, t in enumerate(row):
            grid[r, c] = int(t)
    grid.setflags(write=False)
    return grid


BASE_TERRAIN = base_terrain()


def in_bounds(r: int, c: int) -> bool:
    if not (0 <= r < ROWS and 0 <= c < COLS):
        return False
    # Odd (shifted) rows only have 12 real hexes.
    return not (r % 2 == 1 and c == COLS - 1)


@lru_cache(maxsize=None)
def neighbors(r: int, c: int) -> tuple[tuple[int, int], ...]:
    """The up-to-6 hexagonal neighbors of a hex, respecting the row shift."""
    if r % 2 == 0:
        cand = [(r, c - 1), (r, c + 1),
                (r - 1, c - 1), (r - 1, c), (r + 1, c - 1), (r + 1, c)]
    else:
        cand = [(r, c - 1), (r, c + 1),
                (r - 1, c), (r - 1, c + 1), (r + 1, c), (r + 1, c + 1)]
    return tuple((rr, cc) for rr, cc in cand if in_bounds(rr, cc))


def all_hexes() -> list[tuple[int, int]]:
    return [(r, c) for r in range(ROWS) for c in range(COLS) if in_bounds(r, c)]


def is_land(terrain: np.ndarray, r: int, c: int) -> bool:
    return in_bounds(r, c) and terrain[r, c] != int(Terrain.WATER)


def doubled_columns(r: int, c: int) -> tuple[int, int]:
    """Columns covered by hex (r, c) in the 26-wide doubled rendering."""
    if r % 2 == 0:
        return 2 * c, 2 * c + 1
    return 2 * c + 1, 2 * c + 2
