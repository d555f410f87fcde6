"""Synchronous self-play data generation, replay buffer, training loop,
and the evaluation harness.

The loop alternates strictly: G self-play games (all moves chosen by
MCTS over one frozen network) are appended to the buffer, then K
training steps run, then a checkpoint is written. Nothing overlaps, and
every random draw flows from the run seed, so a full run is
bit-reproducible.
"""

from __future__ import annotations

import logging
import os
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .encoding import encode_state
from .mcts import SearchConfig, UniformEvaluator, run_search, select_move
from .network import Network, NetworkConfig, NetworkEvaluator
from .records import GameRecord
from .rules import (
    GameConfig,
    action_to_index,
    apply_action,
    final_scores,
    index_to_action,
    is_terminal,
    legal_actions,
    new_game,
    outcome,
)
from .rules.actions import TOWN_BLOCK_START
from .rules.factions import FACTION_SPECS

logger = logging.getLogger(__name__)


@dataclass
class TrajectoryStep:
    x: np.ndarray  # encoded state, (9, 26, 206) float32
    pi_main: np.ndarray  # (2138,)
    pi_town: np.ndarray  # (5,)
    town_valid: bool
    player: int
    action: int


@dataclass
class Trajectory:
    steps: list[TrajectoryStep]
    scores: tuple[int, int]
    z: tuple[int, int]  # outcome per seat
    record: GameRecord
    truncated: bool = False


@dataclass
class TrainingExample:
    x: np.ndarray
    pi_main: np.ndarray
    pi_town: np.ndarray
    town_valid: bool
    z: int


class ReplayBuffer:
    """Bounded FIFO of training examples with seeded uniform sampling."""

    def __init__(self, capacity: int = 100_000, seed: int = 0):
        self.capacity = capacity
        self._items: deque[TrainingExample] = deque(maxlen=capacity)
        self._rng = np.random.default_rng(seed)

    def __len__(self) -> int:
        return len(self._items)

    def extend(self, examples: list[TrainingExample]) -> None:
        self._items.extend(examples)

    def sample(self, batch_size: int) -> dict:
        idx = self._rng.integers(0, len(self._items), size=batch_size)
        picks = [self._items[int(i)] for i in idx]
        return {
            "x": np.stack([p.x for p in picks]),
            "pi_main": np.stack([p.pi_main for p in picks]),
            "pi_town": np.stack([p.pi_town for p in picks]),
            "town_valid": np.array([float(p.town_valid) for p in picks]),
            "z": np.array([float(p.z) for p in picks]),
        }


def play_selfplay_game(evaluator, search_cfg: SearchConfig,
                       game_cfg: GameConfig,
                       move_seed: int = 0) -> Trajectory:
    """One complete self-play game; every decision (including pending town
    choices) is recorded with its visit policy."""
    rng = np.random.default_rng(move_seed)
    state = new_game(game_cfg)
    steps: list[TrajectoryStep] = []
    actions: list[int] = []
    policies: list[dict[int, float]] = []
    while not is_terminal(state):
        result = run_search(state, evaluator, search_cfg, rng=rng)
        tau = 1.0 if len(actions) < search_cfg.temperature_moves else 0.0
        idx = select_move(result, tau, rng=rng)
        town_valid = state.pending_town > 0
        steps.append(TrajectoryStep(
            x=encode_state(state),
            pi_main=result.pi[:TOWN_BLOCK_START].astype(np.float32),
            pi_town=result.pi[TOWN_BLOCK_START:].astype(np.float32),
            town_valid=town_valid,
            player=state.to_move,
            action=idx,
        ))
        actions.append(idx)
        policies.append({int(i): float(result.pi[i])
                         for i in np.nonzero(result.pi)[0]})
        state = apply_action(state, index_to_action(idx))
    scores = final_scores(state)
    z = (outcome(state, 0), outcome(state, 1))
    record = GameRecord(
        config=game_cfg, actions=actions, scores=scores,
        seeds={"move_seed": move_seed, "search_seed": search_cfg.seed},
        policies=policies, truncated=state.truncated,
    )
    return Trajectory(steps=steps, scores=scores, z=z, record=record,
                      truncated=state.truncated)


def trajectory_examples(traj: Trajectory,
                        allow_truncated: bool = False) -> list[TrainingExample]:
    if traj.truncated and not allow_truncated:
        return []
    return [
        TrainingExample(x=s.x, pi_main=s.pi_main, pi_town=s.pi_town,
                        town_valid=s.town_valid, z=traj.z[s.player])
        for s in traj.steps
    ]


@dataclass
class TrainConfig:
    cycles: int = 2
    games_per_cycle: int = 4
    train_steps: int = 50
    batch_size: int = 128
    buffer_capacity: int = 100_000
    seed: int = 0
    network: NetworkConfig = field(default_factory=NetworkConfig.desk_scale)
    simulations: int = 25
    temperature_moves: int = 10
    allow_truncated: bool = False
    out_dir: str = "runs/default"

    @classmethod
    def desk_preset(cls, **overrides) -> "TrainConfig":
        return cls(**overrides)


@dataclass
class TrainResult:
    checkpoint_paths: list[str]
    metrics: list[dict]
    network: Network


def training_loop(cfg: TrainConfig) -> TrainResult:
    """Synchronous generate/train cycles; returns the checkpoint paths and
    per-step metrics. Identical configs and seeds give bit-identical
    checkpoints."""
    import torch

    torch.manual_seed(cfg.seed)
    torch.set_num_threads(1)
    os.makedirs(cfg.out_dir, exist_ok=True)
    net = Network.init(cfg.network, seed=cfg.seed)
    buffer = ReplayBuffer(cfg.buffer_capacity, seed=cfg.seed + 1)
    evaluator = NetworkEvaluator(net)
    metrics: list[dict] = []
    checkpoints: list[str] = []
    records: list[GameRecord] = []
    for cycle in range(cfg.cycles):
        for g in range(cfg.games_per_cycle):
            game_seed = cfg.seed * 100_000 + cycle * 1_000 + g
            search_cfg = SearchConfig(
                num_simulations=cfg.simulations,
                temperature_moves=cfg.temperature_moves,
                seed=game_seed,
            )
            traj = play_selfplay_game(
                evaluator, search_cfg,
                GameConfig(seed=game_seed), move_seed=game_seed)
            buffer.extend(trajectory_examples(traj, cfg.allow_truncated))
            records.append(traj.record)
            logger.info("cycle %d game %d: scores=%s z=%s plies=%d",
                        cycle, g, traj.scores, traj.z, len(traj.steps))
        z_balance = {z: sum(1 for r in records[-cfg.games_per_cycle:]
                            for zz in ((r.scores[0] > r.scores[1]) -
                                       (r.scores[0] < r.scores[1]),)
                            if zz == z) for z in (-1, 0, 1)}
        for k in range(cfg.train_steps):
            batch = buffer.sample(min(cfg.batch_size, len(buffer)))
            loss = net.train_step(batch)
            metrics.append({"cycle": cycle, "step": net.step, "loss": loss,
                            "buffer": len(buffer), "z_balance": z_balance})
        path = os.path.join(cfg.out_dir, f"checkpoint_{cycle:03d}.pt")
        net.save(path)
        checkpoints.append(path)
        logger.info("cycle %d: checkpoint %s (loss %.4f)", cycle, path,
                    metrics[-1]["loss"])
    from .records import write_records

    write_records(records, os.path.join(cfg.out_dir, "selfplay_games.jsonl"))
    with open(os.path.join(cfg.out_dir, "metrics.jsonl"), "w") as fh:
        import json

        for m in metrics:
            fh.write(json.dumps(m) + "\n")
    return TrainResult(checkpoint_paths=checkpoints, metrics=metrics,
                       network=net)


# ---------------------------------------------------------------------------
# Agents and evaluation


class RandomAgent:
    """Uniform choice over legal actions; the comparison floor."""

    def __init__(self, seed: int = 0):
        self.rng = np.random.default_rng(seed)

    def choose(self, state) -> int:
        acts = legal_actions(state)
        if not acts:
            raise ValueError("no legal actions (terminal state)")
        pick = self.rng.integers(0, len(acts))
        return action_to_index(acts[int(pick)])


def baseline_random_agent(state, rng: np.random.Generator) -> int:
    acts = legal_actions(state)
    if not acts:
        raise ValueError("no legal actions (terminal state)")
    return action_to_index(acts[int(rng.integers(0, len(acts)))])


class MCTSAgent:
    """Plays the most-visited move of a seeded search."""

    def __init__(self, evaluator, simulations: int = 100, seed: int = 0,
                 c_puct: float = 1.0):
        self.evaluator = evaluator
        self.simulations = simulations
        self.c_puct = c_puct
        self.rng = np.random.default_rng(seed)

    def choose(self, state) -> int:
        cfg = SearchConfig(num_simulations=self.simulations,
                           c_puct=self.c_puct)
        result = run_search(state, self.evaluator, cfg, rng=self.rng)
        return select_move(result, tau=0.0)


@dataclass
class ScoreRow:
    faction: str
    average_score: float
    games: int
    wins: int
    ties: int
    losses: int


@dataclass
class ScoreReport:
    label: str
    rows: list[ScoreRow]
    window: int
    records: list[GameRecord] = field(default_factory=list)


def evaluate(agent_a, agent_b, n_games: int, seed: int = 0,
             label: str = "evaluation",
             max_plies: int = 500) -> ScoreReport:
    """Play n games, alternating which agent moves first, and report
    per-faction averages in the score-table format. Agent objects expose
    choose(state) -> dense action index."""
    records: list[GameRecord] = []
    per_faction: dict[str, list[int]] = {}
    tallies: dict[str, dict[str, int]] = {}
    agents = (agent_a, agent_b)
    for g in range(n_games):
        first = g % 2  # alternate which agent sits in seat 0
        seat_agents = (agents[first], agents[1 - first])
        cfg = GameConfig(seed=seed + g, max_plies=max_plies)
        state = new_game(cfg)
        actions: list[int] = []
        while not is_terminal(state):
            idx = seat_agents[state.to_move].choose(state)
            actions.append(idx)
            state = apply_action(state, index_to_action(idx))
        scores = final_scores(state)
        rec = GameRecord(config=cfg, actions=actions, scores=scores,
                         seeds={"eval_seed": seed + g},
                         truncated=state.truncated,
                         meta={"agent_seat0": "a" if first == 0 else "b",
                               "game": g})
        records.append(rec)
        for seat in range(2):
            faction = FACTION_SPECS[state.players[seat].faction].name
            agent_tag = "a" if (seat == 0) == (first == 0) else "b"
            key = f"{faction}[{agent_tag}]"
            per_faction.setdefault(key, []).append(scores[seat])
            t = tallies.setdefault(key, {"w": 0, "t": 0, "l": 0})
            z = outcome(state, seat)
            t["w" if z > 0 else ("t" if z == 0 else "l")] += 1
    rows = [
        ScoreRow(faction=k, average_score=float(np.mean(v)), games=len(v),
                 wins=tallies[k]["w"], ties=tallies[k]["t"],
                 losses=tallies[k]["l"])
        for k, v in sorted(per_faction.items())
    ]
    return ScoreReport(label=label, rows=rows, window=n_games,
                       records=records)


def agent_win_rate(report: ScoreReport, tag: str = "a") -> float:
    """Fraction of games won by the tagged agent (ties count half)."""
    wins = ties = games = 0
    for row in report.rows:
        if row.faction.endswith(f"[{tag}]"):
            wins += row.wins
            ties += row.ties
            games += row.games
    return (wins + 0.5 * ties) / games if games else 0.0
