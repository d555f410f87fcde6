"""Action types and the dense action index codec.

The flat action space has 2,143 slots:

    [0, 2106)     9 x 13 x 18 hex planes: for each hex, 7 terraform
                  targets without building, 7 with building, 4 upgrades
    [2106, 2118)  send priest: 4 cults x 3 step options (3, 2, 1)
    [2118, 2119)  advance shipping
    [2119, 2120)  advance spade exchange
    [2120, 2126)  board power actions
    [2126, 2129)  special actions (bonus spade, favor cult step, faction)
    [2129, 2138)  pass, by bonus card taken
    [2138, 2143)  town tile choice

The main policy head covers [0, 2138); the town head covers the last 5
slots and is normalized independently.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .board import COLS, NUM_LAND_TERRAIN, Terrain
from .factions import UPGRADE_KINDS
from .tiles import Cult

HEX_PLANES = 18
HEX_BLOCK = 9 * 13 * HEX_PLANES  # 2106
CULT_BLOCK_START = HEX_BLOCK  # 2106
SHIPPING_INDEX = CULT_BLOCK_START + 12  # 2118
SPADE_INDEX = SHIPPING_INDEX + 1  # 2119
POWER_BLOCK_START = SPADE_INDEX + 1  # 2120
SPECIAL_BLOCK_START = POWER_BLOCK_START + 6  # 2126
PASS_BLOCK_START = SPECIAL_BLOCK_START + 3  # 2129
TOWN_BLOCK_START = PASS_BLOCK_START + 9  # 2138
NUM_ACTIONS = TOWN_BLOCK_START + 5  # 2143
NUM_MAIN_ACTIONS = TOWN_BLOCK_START  # 2138
NUM_TOWN_ACTIONS = 5

#: Step options for sending a priest, in plane order.
PRIEST_STEPS = (3, 2, 1)


@dataclass(frozen=True)
class TerraformBuild:
    hex: tuple[int, int]
    target_terrain: Terrain
    build: bool


@dataclass(frozen=True)
class AdvanceShipping:
    pass


@dataclass(frozen=True)
class AdvanceSpade:
    pass


@dataclass(frozen=True)
class Upgrade:
    hex: tuple[int, int]
    kind: int  # index into factions.UPGRADE_KINDS


@dataclass(frozen=True)
class SendPriest:
    cult: Cult
    steps: int  # 3, 2, or 1


@dataclass(frozen=True)
class PowerActionMove:
    slot: int  # 0..5


@dataclass(frozen=True)
class SpecialActionMove:
    slot: int  # 0 bonus spade, 1 favor cult step, 2 faction special


@dataclass(frozen=True)
class Pass:
    bonus_card: int  # 0..8; in round 6, the card currently held


@dataclass(frozen=True)
class TownTileChoice:
    tile: int  # 0..4


Action = Union[
    TerraformBuild, AdvanceShipping, AdvanceSpade, Upgrade, SendPriest,
    PowerActionMove, SpecialActionMove, Pass, TownTileChoice,
]


def action_to_index(a: Action) -> int:
    if isinstance(a, TerraformBuild):
        r, c = a.hex
        plane = int(a.target_terrain) + (NUM_LAND_TERRAIN if a.build else 0)
        return (r * COLS + c) * HEX_PLANES + plane
    if isinstance(a, Upgrade):
        r, c = a.hex
        return (r * COLS + c) * HEX_PLANES + 14 + a.kind
    if isinstance(a, SendPriest):
        return CULT_BLOCK_START + int(a.cult) * 3 + PRIEST_STEPS.index(a.steps)
    if isinstance(a, AdvanceShipping):
        return SHIPPING_INDEX
    if isinstance(a, AdvanceSpade):
        return SPADE_INDEX
    if isinstance(a, PowerActionMove):
        return POWER_BLOCK_START + a.slot
    if isinstance(a, SpecialActionMove):
        return SPECIAL_BLOCK_START + a.slot
    if isinstance(a, Pass):
        return PASS_BLOCK_START + a.bonus_card
    if isinstance(a, TownTileChoice):
        return TOWN_BLOCK_START + a.tile
    raise TypeError(f"not an action: {a!r}")


def index_to_action(i: int) -> Action:
    if not 0 <= i < NUM_ACTIONS:
        raise ValueError(f"action index out of range: {i}")
    if i < HEX_BLOCK:
        hex_id, plane = divmod(i, HEX_PLANES)
        r, c = divmod(hex_id, COLS)
        if plane < 14:
            build = plane >= NUM_LAND_TERRAIN
            terrain = Terrain(plane - (NUM_LAND_TERRAIN if build else 0))
            return TerraformBuild(hex=(r, c), target_terrain=terrain,
                                  build=build)
        return Upgrade(hex=(r, c), kind=plane - 14)
    if i < SHIPPING_INDEX:
        cult, step_idx = divmod(i - CULT_BLOCK_START, 3)
        return SendPriest(cult=Cult(cult), steps=PRIEST_STEPS[step_idx])
    if i == SHIPPING_INDEX:
        return AdvanceShipping()
    if i == SPADE_INDEX:
        return AdvanceSpade()
    if i < SPECIAL_BLOCK_START:
        return PowerActionMove(slot=i - POWER_BLOCK_START)
    if i < PASS_BLOCK_START:
        return SpecialActionMove(slot=i - SPECIAL_BLOCK_START)
    if i < TOWN_BLOCK_START:
        return Pass(bonus_card=i - PASS_BLOCK_START)
    return TownTileChoice(tile=i - TOWN_BLOCK_START)


def describe_action(a: Action) -> str:
    """Human-readable one-liner, used by the server and CLI."""
    if isinstance(a, TerraformBuild):
        verb = "terraform to" if not a.build else "terraform+build dwelling on"
        return f"{verb} {a.target_terrain.name} at {a.hex}"
    if isinstance(a, Upgrade):
        src, dst = UPGRADE_KINDS[a.kind]
        return f"upgrade {src.name} to {dst.name} at {a.hex}"
    if isinstance(a, SendPriest):
        return f"send priest to {a.cult.name} cult for {a.steps} steps"
    if isinstance(a, AdvanceShipping):
        return "advance shipping"
    if isinstance(a, AdvanceSpade):
        return "improve spade exchange rate"
    if isinstance(a, PowerActionMove):
        return f"board power action {a.slot}"
    if isinstance(a, SpecialActionMove):
        return ("bonus-card spade", "favor cult step",
                "faction special (bridge)")[a.slot]
    if isinstance(a, Pass):
        return f"pass, taking bonus card {a.bonus_card}"
    if isinstance(a, TownTileChoice):
        return f"take town tile {a.tile}"
    return repr(a)
