"""Rules engine for two-player Terra Mystica (Engineers vs Halflings)."""

from .actions import (
    NUM_ACTIONS,
    NUM_MAIN_ACTIONS,
    NUM_TOWN_ACTIONS,
    TOWN_BLOCK_START,
    Action,
    AdvanceShipping,
    AdvanceSpade,
    Pass,
    PowerActionMove,
    SendPriest,
    SpecialActionMove,
    TerraformBuild,
    TownTileChoice,
    Upgrade,
    action_to_index,
    describe_action,
    index_to_action,
)
from .board import Structure, Terrain, neighbors, wheel_distance
from .engine import (
    ConfigError,
    IllegalActionError,
    RulesError,
    apply_action,
    final_scores,
    is_terminal,
    legal_actions,
    new_game,
    outcome,
)
from .factions import Faction
from .state import GameConfig, GameState, Phase, PlayerState

__all__ = [
    "Action", "AdvanceShipping", "AdvanceSpade", "ConfigError", "Faction",
    "GameConfig", "GameState", "IllegalActionError", "NUM_ACTIONS",
    "NUM_MAIN_ACTIONS", "NUM_TOWN_ACTIONS", "Pass", "Phase",
    "PlayerState", "PowerActionMove", "RulesError", "SendPriest",
    "SpecialActionMove", "Structure", "Terrain", "TerraformBuild",
    "TOWN_BLOCK_START", "TownTileChoice", "Upgrade", "action_to_index",
    "apply_action", "describe_action", "final_scores", "index_to_action",
    "is_terminal", "legal_actions", "neighbors", "new_game", "outcome",
    "wheel_distance",
]
