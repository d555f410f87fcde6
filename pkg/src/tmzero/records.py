"""Line-delimited game records: config, seeds, dense action indices,
per-move sparse search policies, and final scores. Replayable bit-exactly
through the rules engine."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .rules import (
    GameConfig,
    GameState,
    apply_action,
    final_scores,
    index_to_action,
    is_terminal,
    new_game,
)
from .rules.factions import Faction


@dataclass
class GameRecord:
    config: GameConfig
    actions: list[int]
    scores: tuple[int, int]
    seeds: dict = field(default_factory=dict)
    # Sparse policies, one dict {index: prob} per recorded decision.
    policies: Optional[list[dict[int, float]]] = None
    truncated: bool = False
    meta: dict = field(default_factory=dict)

    def to_json(self) -> str:
        blob = {
            "config": config_to_dict(self.config),
            "actions": self.actions,
            "scores": list(self.scores),
            "seeds": self.seeds,
            "truncated": self.truncated,
            "meta": self.meta,
        }
        if self.policies is not None:
            blob["policies"] = [
                {str(k): round(float(v), 6) for k, v in pi.items()}
                for pi in self.policies
            ]
        return json.dumps(blob, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "GameRecord":
        blob = json.loads(line)
        policies = None
        if "policies" in blob:
            policies = [{int(k): float(v) for k, v in pi.items()}
                        for pi in blob["policies"]]
        return cls(
            config=config_from_dict(blob["config"]),
            actions=[int(a) for a in blob["actions"]],
            scores=tuple(blob["scores"]),
            seeds=blob.get("seeds", {}),
            policies=policies,
            truncated=blob.get("truncated", False),
            meta=blob.get("meta", {}),
        )


def config_to_dict(config: GameConfig) -> dict:
    return {
        "seed": config.seed,
        "scoring_tiles": list(config.scoring_tiles)
        if config.scoring_tiles is not None else None,
        "bonus_cards": list(config.bonus_cards)
        if config.bonus_cards is not None else None,
        "max_plies": config.max_plies,
        "factions": [int(f) for f in config.factions],
    }


def config_from_dict(blob: dict) -> GameConfig:
    return GameConfig(
        seed=blob["seed"],
        scoring_tiles=tuple(blob["scoring_tiles"])
        if blob.get("scoring_tiles") is not None else None,
        bonus_cards=tuple(blob["bonus_cards"])
        if blob.get("bonus_cards") is not None else None,
        max_plies=blob.get("max_plies", 500),
        factions=tuple(Faction(f) for f in blob.get("factions", (0, 1))),
    )


def replay(record: GameRecord) -> GameState:
    """Re-run a record's actions from its config; returns the final state."""
    state = new_game(record.config)
    for idx in record.actions:
        state = apply_action(state, index_to_action(idx))
    return state


def verify(record: GameRecord) -> bool:
    """True iff replaying reproduces the recorded final scores."""
    state = replay(record)
    return is_terminal(state) and final_scores(state) == tuple(record.scores)


def write_records(records: list[GameRecord], path: str) -> None:
    with open(path, "w") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")


def read_records(path: str) -> list[GameRecord]:
    with open(path) as fh:
        return [GameRecord.from_json(line) for line in fh if line.strip()]
