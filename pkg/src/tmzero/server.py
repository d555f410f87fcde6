"""HTTP/JSON game service.

Sessions live in memory and are persisted as replayable records; the
server is the sole legality authority — every mutation goes through the
rules engine's apply_action, and any response's state can be rebuilt by
replaying the stored action history from the session config.
"""

from __future__ import annotations

import os
import threading
import uuid
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .mcts import SearchConfig, UniformEvaluator, run_search, select_move
from .records import GameRecord, config_from_dict, config_to_dict
from .rules import (
    GameConfig,
    apply_action,
    describe_action,
    final_scores,
    index_to_action,
    is_terminal,
    legal_actions,
    new_game,
)
from .rules.actions import action_to_index
from .rules.engine import IllegalActionError
from .rules.factions import FACTION_SPECS
from .rules.state import GameState, Phase
from .rules.tiles import BONUS_CARDS, FAVOR_TILES, SCORING_TILES, TOWN_TILES


def _env_int(name: str, default: int) -> int:
    return int(os.environ.get(name, default))


DEFAULT_AGENT_SIMULATIONS = _env_int("TMZERO_AGENT_SIMULATIONS", 100)
DEFAULT_TOP_K = 5


@dataclass
class Session:
    id: str
    config: GameConfig
    state: GameState
    human_seat: int
    agent_id: str
    actions: list[int] = field(default_factory=list)
    agent_moves: list[dict] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)
    seq: int = 0  # search seed counter, so replays are reproducible


class CreateGameRequest(BaseModel):
    seed: int = 0
    human_seat: int = 0
    agent: str = "uniform"
    max_plies: int = 500


class ActionRequest(BaseModel):
    index: int


class AgentMoveRequest(BaseModel):
    simulations: Optional[int] = None
    top_k: int = DEFAULT_TOP_K


def state_view(state: GameState) -> dict:
    """Full display model: board, per-player panels, cult tracks, tiles,
    and the pending town choice."""
    board = []
    for r in range(state.terrain.shape[0]):
        row = []
        for c in range(state.terrain.shape[1]):
            row.append({
                "terrain": int(state.terrain[r, c]),
                "structure": int(state.structure[r, c]),
                "owner": int(state.owner[r, c]),
                "town": bool(state.town_marked[r, c]),
            })
        board.append(row)
    players = []
    for seat, p in enumerate(state.players):
        players.append({
            "seat": seat,
            "faction": FACTION_SPECS[p.faction].name,
            "workers": p.workers,
            "coins": p.coins,
            "priests": p.priests,
            "power": list(p.power),
            "vp": p.vp,
            "shipping": p.shipping,
            "dig_level": p.dig_level,
            "cults": list(p.cults),
            "buildings": list(p.buildings),
            "bonus_card": p.bonus_card,
            "favors": sorted(p.favors),
            "towns": list(p.towns),
            "bridges_built": p.bridges_built,
            "passed": p.passed,
        })
    view = {
        "board": board,
        "bridges": [{"owner": o, "from": list(h1), "to": list(h2)}
                    for o, h1, h2 in state.bridges],
        "round": state.round,
        "phase": Phase(state.phase).name,
        "to_move": state.to_move,
        "start_player": state.start_player,
        "players": players,
        "scoring_tiles": list(state.scoring_tiles),
        "scoring_tile_names": [SCORING_TILES[t].name
                               for t in state.scoring_tiles],
        "bonus_in_play": list(state.bonus_in_play),
        "bonus_card_names": [BONUS_CARDS[b].name for b in state.bonus_in_play],
        "bonus_coins": list(state.bonus_coins),
        "favor_supply": list(state.favor_supply),
        "favor_names": [f.name for f in FAVOR_TILES],
        "town_supply": list(state.town_supply),
        "town_tile_names": [t.name for t in TOWN_TILES],
        "power_actions_used": list(state.power_actions_used),
        "pending_town": state.pending_town,
        "ply": state.ply,
        "is_terminal": is_terminal(state),
    }
    if view["is_terminal"]:
        view["scores"] = list(final_scores(state))
    return view


def legal_view(state: GameState) -> list[dict]:
    out = []
    for a in legal_actions(state):
        idx = action_to_index(a)
        out.append({"index": idx, "description": describe_action(a)})
    out.sort(key=lambda e: e["index"])
    return out


class AgentPool:
    """Evaluators keyed by agent id: 'uniform', 'random', or a checkpoint
    path."""

    def __init__(self):
        self._cache: dict[str, object] = {}

    def evaluator(self, agent_id: str):
        if agent_id in self._cache:
            return self._cache[agent_id]
        if agent_id in ("uniform", "random"):
            ev = UniformEvaluator()
        else:
            from .network import Network, NetworkEvaluator

            if not os.path.exists(agent_id):
                raise HTTPException(
                    status_code=400,
                    detail=f"unknown agent '{agent_id}' "
                           "(use 'uniform', 'random', or a checkpoint path)")
            ev = NetworkEvaluator(Network.load(agent_id))
        self._cache[agent_id] = ev
        return ev


def create_app(data_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="tmzero game service")
    sessions: dict[str, Session] = {}
    agents = AgentPool()
    data_dir = data_dir or os.environ.get("TMZERO_DATA_DIR")

    def get_session(game_id: str) -> Session:
        sess = sessions.get(game_id)
        if sess is None:
            raise HTTPException(status_code=404,
                                detail=f"unknown session '{game_id}'")
        return sess

    def persist(sess: Session) -> None:
        if not data_dir:
            return
        os.makedirs(data_dir, exist_ok=True)
        rec = session_record(sess)
        import json

        with open(os.path.join(data_dir, f"{sess.id}.json"), "w") as fh:
            json.dump(rec, fh)

    def session_record(sess: Session) -> dict:
        record = GameRecord(
            config=sess.config, actions=list(sess.actions),
            scores=final_scores(sess.state) if is_terminal(sess.state)
            else (0, 0),
            seeds={"session": sess.id},
            truncated=sess.state.truncated,
            meta={"human_seat": sess.human_seat, "agent": sess.agent_id,
                  "complete": is_terminal(sess.state)},
        )
        return {
            "session_id": sess.id,
            "config": config_to_dict(sess.config),
            "actions": list(sess.actions),
            "human_seat": sess.human_seat,
            "agent": sess.agent_id,
            "agent_moves": sess.agent_moves,
            "complete": is_terminal(sess.state),
            "scores": list(final_scores(sess.state))
            if is_terminal(sess.state) else None,
            "game_record": record.to_json(),
        }

    @app.post("/games", status_code=201)
    def create_game(req: CreateGameRequest):
        if req.human_seat not in (0, 1):
            raise HTTPException(status_code=400,
                                detail="human_seat must be 0 or 1")
        config = GameConfig(seed=req.seed, max_plies=req.max_plies)
        agents.evaluator(req.agent)  # validate the agent id up front
        sess = Session(
            id=uuid.uuid4().hex[:12],
            config=config,
            state=new_game(config),
            human_seat=req.human_seat,
            agent_id=req.agent,
        )
        sessions[sess.id] = sess
        persist(sess)
        return {"id": sess.id, "human_seat": sess.human_seat,
                "agent": sess.agent_id, "state": state_view(sess.state)}

    @app.get("/games/{game_id}")
    def get_game(game_id: str):
        sess = get_session(game_id)
        with sess.lock:
            return {"id": sess.id, "human_seat": sess.human_seat,
                    "agent": sess.agent_id, "state": state_view(sess.state)}

    @app.get("/games/{game_id}/legal")
    def get_legal(game_id: str):
        sess = get_session(game_id)
        with sess.lock:
            return {"id": sess.id, "to_move": sess.state.to_move,
                    "actions": legal_view(sess.state)}

    @app.post("/games/{game_id}/actions")
    def post_action(game_id: str, req: ActionRequest):
        sess = get_session(game_id)
        with sess.lock:
            if is_terminal(sess.state):
                raise HTTPException(status_code=409,
                                    detail="game is over")
            try:
                action = index_to_action(req.index)
            except (ValueError, IndexError) as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            try:
                sess.state = apply_action(sess.state, action)
            except IllegalActionError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            sess.actions.append(req.index)
            persist(sess)
            return {"id": sess.id, "applied": req.index,
                    "description": describe_action(action),
                    "state": state_view(sess.state)}

    @app.post("/games/{game_id}/agent-move")
    def post_agent_move(game_id: str, req: AgentMoveRequest = None):
        req = req or AgentMoveRequest()
        sess = get_session(game_id)
        with sess.lock:
            if is_terminal(sess.state):
                raise HTTPException(status_code=409, detail="game is over")
            if sess.state.to_move == sess.human_seat:
                raise HTTPException(
                    status_code=409,
                    detail="it is the human player's turn")
            sims = req.simulations or DEFAULT_AGENT_SIMULATIONS
            cfg = SearchConfig(num_simulations=sims,
                               seed=sess.config.seed * 10_000 + sess.seq)
            sess.seq += 1
            rng = np.random.default_rng(cfg.seed)
            result = run_search(sess.state, agents.evaluator(sess.agent_id),
                                cfg, rng=rng)
            idx = select_move(result, tau=0.0)
            top = np.argsort(result.pi)[::-1][:req.top_k]
            policy = [
                {"index": int(i), "prob": float(result.pi[i]),
                 "description": describe_action(index_to_action(int(i)))}
                for i in top if result.pi[i] > 0
            ]
            action = index_to_action(idx)
            description = describe_action(action)
            sess.state = apply_action(sess.state, action)
            sess.actions.append(idx)
            move_info = {"index": idx, "description": description,
                         "v_root": result.v_root, "policy": policy,
                         "simulations": sims, "ply": sess.state.ply}
            sess.agent_moves.append(move_info)
            persist(sess)
            return {"id": sess.id, "move": move_info,
                    "state": state_view(sess.state)}

    @app.get("/games/{game_id}/record")
    def get_record(game_id: str):
        sess = get_session(game_id)
        with sess.lock:
            return session_record(sess)

    return app


def run_server(host: str = None, port: int = None,
               data_dir: Optional[str] = None) -> None:
    import uvicorn

    host = host or os.environ.get("TMZERO_HOST", "127.0.0.1")
    port = port or _env_int("TMZERO_PORT", 8000)
    uvicorn.run(create_app(data_dir=data_dir), host=host, port=port)
