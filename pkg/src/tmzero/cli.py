"""Command-line entry points: train, selfplay, eval, play, serve."""

from __future__ import annotations

import os
import sys

import click
import numpy as np


@click.group()
def main():
    """Self-play training, evaluation, and serving for the board-game
    agent."""


def _make_agent(spec: str, seed: int, simulations: int):
    """Agent factory for eval/play: 'random', 'uniform' (MCTS over uniform
    priors), or a checkpoint path (MCTS over the network)."""
    from .mcts import UniformEvaluator
    from .selfplay import MCTSAgent, RandomAgent

    if spec == "random":
        return RandomAgent(seed=seed)
    if spec == "uniform":
        return MCTSAgent(UniformEvaluator(), simulations=simulations,
                         seed=seed)
    from .network import Network, NetworkEvaluator

    if not os.path.exists(spec):
        raise click.BadParameter(
            f"unknown agent '{spec}' (use 'random', 'uniform', or a "
            "checkpoint path)")
    return MCTSAgent(NetworkEvaluator(Network.load(spec)),
                     simulations=simulations, seed=seed)


@main.command()
@click.option("--preset", type=click.Choice(["desk", "full"]),
              default="desk", show_default=True)
@click.option("--cycles", type=int, default=2, show_default=True)
@click.option("--games-per-cycle", type=int, default=None,
              help="Self-play games per cycle (preset default if unset).")
@click.option("--train-steps", type=int, default=None,
              help="SGD steps per cycle (preset default if unset).")
@click.option("--simulations", type=int, default=None,
              help="MCTS simulations per move (preset default if unset).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_dir", type=click.Path(), default="runs/train",
              show_default=True)
def train(preset, cycles, games_per_cycle, train_steps, simulations, seed,
          out_dir):
    """Run synchronous self-play training; writes one checkpoint per
    cycle plus game records, metrics, and a loss figure."""
    from .network import NetworkConfig
    from .report import plot_training_metrics
    from .selfplay import TrainConfig, training_loop

    if preset == "desk":
        cfg = TrainConfig(cycles=cycles, seed=seed, out_dir=out_dir)
    else:
        cfg = TrainConfig(cycles=cycles, seed=seed, out_dir=out_dir,
                          network=NetworkConfig(),
                          games_per_cycle=32, train_steps=200,
                          simulations=800)
    if games_per_cycle is not None:
        cfg.games_per_cycle = games_per_cycle
    if train_steps is not None:
        cfg.train_steps = train_steps
    if simulations is not None:
        cfg.simulations = simulations
    result = training_loop(cfg)
    figure = plot_training_metrics(result.metrics, out_dir)
    click.echo(f"checkpoints: {', '.join(result.checkpoint_paths)}")
    click.echo(f"final loss: {result.metrics[-1]['loss']:.4f}")
    click.echo(f"loss figure: {figure}")


@main.command()
@click.option("--games", type=int, default=10, show_default=True)
@click.option("--agent", default="uniform", show_default=True,
              help="'random', 'uniform', or a checkpoint path.")
@click.option("--simulations", type=int, default=25, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(),
              default="selfplay_games.jsonl", show_default=True)
def selfplay(games, agent, simulations, seed, out_path):
    """Emit self-play game records as line-delimited JSON."""
    from .mcts import SearchConfig, UniformEvaluator
    from .records import write_records
    from .rules import GameConfig
    from .selfplay import play_selfplay_game

    if agent == "uniform":
        evaluator = UniformEvaluator()
    else:
        from .network import Network, NetworkEvaluator

        evaluator = NetworkEvaluator(Network.load(agent))
    records = []
    for g in range(games):
        traj = play_selfplay_game(
            evaluator,
            SearchConfig(num_simulations=simulations, seed=seed + g),
            GameConfig(seed=seed + g), move_seed=seed + g)
        records.append(traj.record)
        click.echo(f"game {g}: {traj.scores[0]}-{traj.scores[1]} "
                   f"({len(traj.record.actions)} plies)")
    write_records(records, out_path)
    click.echo(f"wrote {len(records)} records to {out_path}")


@main.command("eval")
@click.option("--games", type=int, default=10, show_default=True)
@click.option("--agent-a", default="uniform", show_default=True)
@click.option("--agent-b", default="random", show_default=True)
@click.option("--simulations", type=int, default=25, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_dir", type=click.Path(), default="runs/eval",
              show_default=True)
def eval_command(games, agent_a, agent_b, simulations, seed, out_dir):
    """Play agents against each other and write the score report (text
    table, CSV, JSON, and figures)."""
    from .records import write_records
    from .report import render_table, write_report
    from .selfplay import agent_win_rate, evaluate

    a = _make_agent(agent_a, seed * 2 + 1, simulations)
    b = _make_agent(agent_b, seed * 2 + 2, simulations)
    report = evaluate(a, b, games, seed=seed,
                      label=f"{agent_a} vs {agent_b}")
    click.echo(render_table(report), nl=False)
    click.echo(f"win rate ({agent_a}): {agent_win_rate(report, 'a'):.3f}")
    paths = write_report(report, out_dir)
    write_records(report.records, os.path.join(out_dir, "games.jsonl"))
    click.echo(f"report files: {paths['table']}, {paths['csv']}, "
               f"{paths['json']}")


@main.command()
@click.option("--agent", default="uniform", show_default=True)
@click.option("--human-seat", type=int, default=0, show_default=True)
@click.option("--simulations", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def play(agent, human_seat, simulations, seed):
    """Play a terminal game against the agent, choosing moves by dense
    action index from the printed legal list."""
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

    agent_obj = _make_agent(agent, seed, simulations)
    state = new_game(GameConfig(seed=seed))
    while not is_terminal(state):
        if state.to_move == human_seat:
            legal = sorted(
                (action_to_index(a), describe_action(a))
                for a in legal_actions(state))
            click.echo(f"\nround {state.round}, your move (seat "
                       f"{human_seat}):")
            for idx, desc in legal:
                click.echo(f"  [{idx}] {desc}")
            choice = click.prompt("action index", type=int)
            if choice not in {idx for idx, _ in legal}:
                click.echo("not a legal index, try again")
                continue
            state = apply_action(state, index_to_action(choice))
        else:
            idx = agent_obj.choose(state)
            click.echo(
                f"agent plays [{idx}] {describe_action(index_to_action(idx))}")
            state = apply_action(state, index_to_action(idx))
    scores = final_scores(state)
    click.echo(f"\nfinal scores: seat 0 = {scores[0]}, seat 1 = {scores[1]}")


@main.command()
@click.option("--host", default=None, help="Bind address "
              "(default $TMZERO_HOST or 127.0.0.1).")
@click.option("--port", type=int, default=None,
              help="Port (default $TMZERO_PORT or 8000).")
@click.option("--data-dir", type=click.Path(), default=None,
              help="Session persistence directory "
              "(default $TMZERO_DATA_DIR).")
def serve(host, port, data_dir):
    """Start the HTTP/JSON game service."""
    from .server import run_server

    run_server(host=host, port=port, data_dir=data_dir)


if __name__ == "__main__":
    sys.exit(main())
