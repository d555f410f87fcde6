"""PUCT Monte Carlo tree search over the rules engine.

The search owns a pure tree (no transposition merging). Values are
stored from the perspective of the player to move at each node and
sign-flipped on backup whenever the acting player changes between
parent and child (in this game the same player can move twice in a
row, e.g. after the opponent passes, so a blind per-ply flip would be
wrong). The selection rule is

    u(s, a) = Q(s, a) + c_puct * P(s, a) * sqrt(N(s)) / (1 + N(s, a))

with N(s) = 1 + sum_a N(s, a) (the 1 from expansion) and ties broken by
lowest action index.

One search instance is single-threaded and owns its tree; independent
searches may run concurrently over the shared immutable rules engine.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Optional, Protocol

import numpy as np

from . import encoding
from .rules import apply_action, index_to_action, is_terminal, outcome
from .rules.actions import NUM_ACTIONS, NUM_MAIN_ACTIONS, TOWN_BLOCK_START
from .rules.state import GameState


class Evaluator(Protocol):
    """Policy/value oracle: returns (p_main[2138], p_town[5], v) with v in
    [-1, 1] from the perspective of the player to move."""

    def evaluate(self, state) -> tuple[np.ndarray, np.ndarray, float]:
        ...


class UniformEvaluator:
    """Uniform priors, zero value. Useful as a no-knowledge baseline."""

    def evaluate(self, state):
        return (np.full(NUM_MAIN_ACTIONS, 1.0 / NUM_MAIN_ACTIONS),
                np.full(5, 0.2), 0.0)


@dataclass(frozen=True)
class GameInterface:
    """Minimal hooks the search needs from a game. The default binds the
    Terra Mystica rules engine; tests may bind toy games."""

    is_terminal: Callable[[object], bool]
    outcome_for_to_move: Callable[[object], float]
    legal_mask: Callable[[object], np.ndarray]
    apply_index: Callable[[object, int], object]
    to_move: Callable[[object], int]


def _tm_outcome(state: GameState) -> float:
    return float(outcome(state, state.to_move))


TM_GAME = GameInterface(
    is_terminal=is_terminal,
    outcome_for_to_move=_tm_outcome,
    legal_mask=encoding.legal_mask,
    apply_index=lambda s, i: apply_action(s, index_to_action(i)),
    to_move=lambda s: s.to_move,
)


@dataclass
class SearchConfig:
    num_simulations: int = 800
    c_puct: float = 1.0
    dirichlet_noise: bool = False
    dirichlet_alpha: float = 0.3
    dirichlet_eps: float = 0.25
    temperature_moves: int = 10  # tau = 1 for the first k plies, then -> 0
    backup_rule: str = "mean"  # "mean" or "assign" (literal Q = V(succ))
    log_simulations: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.num_simulations < 1:
            raise ValueError("num_simulations must be >= 1")
        if self.c_puct <= 0:
            raise ValueError("c_puct must be positive")
        if self.backup_rule not in ("mean", "assign"):
            raise ValueError("backup_rule must be 'mean' or 'assign'")


class SearchNode:
    """Bookkeeping for one tree node: per-edge P/N/W/Q over the legal
    action indices of its state."""

    __slots__ = ("state", "player", "terminal", "expanded", "actions",
                 "P", "N", "W", "Q", "children", "terminal_value")

    def __init__(self, state, game: GameInterface = TM_GAME):
        self.state = state
        self.player = game.to_move(state)
        self.terminal = game.is_terminal(state)
        self.expanded = False
        self.actions: Optional[np.ndarray] = None
        self.P = self.N = self.W = self.Q = None
        self.children: dict[int, "SearchNode"] = {}
        self.terminal_value = (
            game.outcome_for_to_move(state) if self.terminal else None)

    @property
    def visit_count(self) -> int:
        if not self.expanded:
            return 0
        return 1 + int(self.N.sum())


def expand(node: SearchNode, evaluator: Evaluator,
           game: GameInterface = TM_GAME) -> float:
    """Expand a non-terminal leaf: store masked priors, zero the edge
    statistics, and return the evaluator's value for the node's player."""
    if node.terminal:
        raise ValueError("cannot expand a terminal node")
    if node.expanded:
        raise ValueError("node already expanded")
    mask = game.legal_mask(node.state)
    p_main, p_town, v = evaluator.evaluate(node.state)
    pi_main, pi_town = encoding.mask_and_renormalize(p_main, p_town, mask)
    full = np.concatenate([pi_main, pi_town])
    idx = np.nonzero(mask)[0]
    node.actions = idx
    node.P = full[idx]
    node.N = np.zeros(len(idx), dtype=np.int64)
    node.W = np.zeros(len(idx), dtype=np.float64)
    node.Q = np.zeros(len(idx), dtype=np.float64)
    node.expanded = True
    return float(v)


def select_edge(node: SearchNode, c_puct: float) -> int:
    """Dense action index maximizing the PUCT score; lowest index wins
    ties (node.actions is sorted ascending)."""
    if not node.expanded or node.actions is None or len(node.actions) == 0:
        raise ValueError("select_edge requires an expanded node with edges")
    u = node.Q + c_puct * node.P * math.sqrt(node.visit_count) / (1.0 + node.N)
    return int(node.actions[int(np.argmax(u))])


def backup(path: list[tuple[SearchNode, int]], leaf: SearchNode,
           v_leaf: float, rule: str = "mean") -> None:
    """Propagate the leaf value up the selection path.

    `path` holds (node, dense action index) pairs from root to the leaf's
    parent; `v_leaf` is from the perspective of `leaf`'s player to move.
    """
    value = v_leaf
    perspective = leaf.player
    for node, action in reversed(path):
        if node.player != perspective:
            value = -value
            perspective = node.player
        e = int(np.searchsorted(node.actions, action))
        node.N[e] += 1
        node.W[e] += value
        if rule == "assign":
            node.Q[e] = value
        else:
            node.Q[e] = node.W[e] / node.N[e]


@dataclass
class SearchResult:
    pi: np.ndarray  # distribution over all 2,143 indices
    v_root: float
    pi_town: Optional[np.ndarray] = None  # set when a town choice is pending
    simulation_log: Optional[list[dict]] = None
    root_node: Optional[SearchNode] = None


def run_search(root, evaluator: Evaluator, cfg: SearchConfig,
               rng: Optional[np.random.Generator] = None,
               game: GameInterface = TM_GAME) -> SearchResult:
    """Run cfg.num_simulations PUCT simulations from `root` and return the
    visit-count policy (temperature is applied later by select_move)."""
    if game.is_terminal(root):
        raise ValueError("cannot search a terminal position")
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    root_node = SearchNode(root, game)
    expand(root_node, evaluator, game)
    if cfg.dirichlet_noise:
        noise = rng.dirichlet([cfg.dirichlet_alpha] * len(root_node.P))
        root_node.P = ((1 - cfg.dirichlet_eps) * root_node.P
                       + cfg.dirichlet_eps * noise)
    log: Optional[list[dict]] = [] if cfg.log_simulations else None

    for _ in range(cfg.num_simulations):
        node = root_node
        path: list[tuple[SearchNode, int]] = []
        while node.expanded and not node.terminal:
            a = select_edge(node, cfg.c_puct)
            path.append((node, a))
            child = node.children.get(a)
            if child is None:
                child = SearchNode(game.apply_index(node.state, a), game)
                node.children[a] = child
            node = child
        if node.terminal:
            v = node.terminal_value
        else:
            v = expand(node, evaluator, game)
        backup(path, node, v, cfg.backup_rule)
        if log is not None:
            log.append({"path": [a for _, a in path], "leaf_value": v,
                        "leaf_player": node.player})

    pi = np.zeros(NUM_ACTIONS, dtype=np.float64)
    pi[root_node.actions] = root_node.N / root_node.N.sum()
    v_root = float(root_node.W.sum() / root_node.N.sum())
    pi_town = None
    if root_node.actions[0] >= TOWN_BLOCK_START:
        pi_town = pi[TOWN_BLOCK_START:].copy()
    return SearchResult(pi=pi, v_root=v_root, pi_town=pi_town,
                        simulation_log=log, root_node=root_node)


def select_move(result: SearchResult, tau: float,
                rng: Optional[np.random.Generator] = None) -> int:
    """Pick a dense action index from the visit policy at temperature tau.

    tau -> 0 selects the most-visited edge (lowest index on ties); tau = 1
    samples proportionally to visits.
    """
    support = np.nonzero(result.pi > 0)[0]
    weights = result.pi[support]
    if tau < 1e-6:
        return int(support[int(np.argmax(weights))])
    logits = np.log(weights) / tau
    logits -= logits.max()
    probs = np.exp(logits)
    probs /= probs.sum()
    if rng is None:
        rng = np.random.default_rng()
    return int(rng.choice(support, p=probs))


def write_simulation_log(log: list[dict], path: str) -> None:
    """One JSON object per line: selection path (dense indices), leaf value,
    and the leaf's acting player."""
    with open(path, "w") as fh:
        for entry in log:
            fh.write(json.dumps(entry) + "\n")


def replay_check_q(result: SearchResult, root,
                   game: GameInterface = TM_GAME) -> float:
    """Independent oracle for the mean backup rule: recompute every edge's
    Q from the simulation log alone and return the maximum absolute
    deviation from the tree's stored Q values.

    For an edge reached by path prefix p whose parent node belongs to
    player q, the recomputed Q is the mean, over all logged simulations
    extending p, of the leaf value sign-adjusted to q's perspective. The
    recomputation consults only the log and the successor function; the
    tree supplies the values under test.
    """
    if result.simulation_log is None or result.root_node is None:
        raise ValueError("search was run without simulation logging")
    sums: dict[tuple[int, ...], float] = {}
    counts: dict[tuple[int, ...], int] = {}
    player_at: dict[tuple[int, ...], int] = {(): game.to_move(root)}
    state_at: dict[tuple[int, ...], object] = {(): root}
    for entry in result.simulation_log:
        prefix: tuple[int, ...] = ()
        for a in entry["path"]:
            nxt = prefix + (a,)
            if nxt not in state_at:
                child = game.apply_index(state_at[prefix], a)
                state_at[nxt] = child
                player_at[nxt] = game.to_move(child)
            value = entry["leaf_value"]
            if player_at[prefix] != entry["leaf_player"]:
                value = -value
            sums[nxt] = sums.get(nxt, 0.0) + value
            counts[nxt] = counts.get(nxt, 0) + 1
            prefix = nxt
    max_err = 0.0
    stack: list[tuple[SearchNode, tuple[int, ...]]] = [(result.root_node, ())]
    while stack:
        node, prefix = stack.pop()
        if not node.expanded:
            continue
        for e, a in enumerate(node.actions):
            if node.N[e] == 0:
                continue
            key = prefix + (int(a),)
            recomputed = sums[key] / counts[key]
            max_err = max(max_err, abs(recomputed - node.Q[e]))
            if counts[key] != node.N[e]:
                max_err = max(max_err, 1.0)
            child = node.children.get(int(a))
            if child is not None:
                stack.append((child, key))
    return max_err
