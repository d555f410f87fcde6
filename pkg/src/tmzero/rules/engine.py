"""Deterministic rules engine: legal actions and the successor function.

All operations are pure: they never mutate their inputs and return fresh
:class:`GameState` values. Simplifications relative to the full board
game (restricted to factions Engineers and Halflings): opponents never
leech power from adjacent builds, and spade/bridge/cult-step side
choices that have no slot in the flat action space are resolved by fixed
deterministic policies documented next to each helper.
"""

from __future__ import annotations

import numpy as np

from .actions import (
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
)
from .board import (
    NUM_LAND_TERRAIN,
    STRUCTURE_POWER,
    BUILDING_STOCK,
    Structure,
    Terrain,
    all_hexes,
    neighbors,
    wheel_distance,
)
from .factions import (
    DIG_ADVANCE_VP,
    ENGINEERS_BRIDGE_PASS_VP,
    FACTION_SPECS,
    Faction,
    MAX_BRIDGES,
    MAX_DIG_LEVEL,
    MAX_PRIESTS,
    MAX_SHIPPING,
    SHIPPING_ADVANCE_VP,
    UPGRADE_KINDS,
    spade_exchange_rate,
)
from .state import GameConfig, GameState, Phase, PlayerState, initial_state
from .tiles import (
    AREA_ENDGAME_VP,
    BONUS_CARDS,
    CULT_ENDGAME_VP,
    CULT_MAX,
    CULT_POWER_STEPS,
    FAVOR_PRIORITY,
    FAVOR_TILES,
    NUM_BONUS_CARDS,
    NUM_BONUS_IN_PLAY,
    NUM_SCORING_TILES,
    NUM_TOWN_TILES,
    POWER_ACTIONS,
    SCORING_TILES,
    SPADE_TILE_INDEX,
    TOWN_MIN_BUILDINGS,
    TOWN_MIN_POWER,
    TOWN_TILES,
    Cult,
    Trigger,
)


class RulesError(Exception):
    """Base class for rules-engine errors."""


class ConfigError(RulesError):
    pass


class IllegalActionError(RulesError):
    pass


# Setup order: dwellings 0,1,1,0 then bonus-card picks 1,0.
_SETUP_SEATS = (0, 1, 1, 0, 1, 0)


# ---------------------------------------------------------------------------
# Resource arithmetic


def _gain_power(power: tuple[int, int, int], n: int) -> tuple[int, int, int]:
    b1, b2, b3 = power
    m = min(n, b1)
    b1 -= m
    b2 += m
    n -= m
    m = min(n, b2)
    b2 -= m
    b3 += m
    return (b1, b2, b3)


def _spend_power(power, n):
    """Spend n power from bowl III, burning from bowl II if needed."""
    b1, b2, b3 = power
    use = min(b3, n)
    b3 -= use
    b1 += use
    n -= use
    while n > 0:
        if b2 < 2:
            return None
        b2 -= 2  # one token burned, one spent
        b1 += 1
        n -= 1
    return (b1, b2, b3)


def _settle_cost(player: PlayerState, workers=0, coins=0, priests=0, power=0):
    """Resolve a cost with automatic conversions (burning power, trading
    priests down to workers, workers down to coins, and bowl-III power to
    any resource at the standard rates). Returns the post-payment
    (workers, coins, priests, power-bowls) or None if unaffordable."""
    w, c, p = player.workers, player.coins, player.priests
    pw = player.power
    if power:
        pw = _spend_power(pw, power)
        if pw is None:
            return None
    # Priests: shortfall costs 5 power each.
    if p >= priests:
        p -= priests
    else:
        pw = _spend_power(pw, 5 * (priests - p))
        if pw is None:
            return None
        p = 0
    # Workers: spare priests convert 1:1, then 3 power each.
    if w >= workers:
        w -= workers
    else:
        deficit = workers - w
        w = 0
        use_p = min(p, deficit)
        p -= use_p
        deficit -= use_p
        if deficit:
            pw = _spend_power(pw, 3 * deficit)
            if pw is None:
                return None
    # Coins: spare workers, spare priests, then 1 power each.
    if c >= coins:
        c -= coins
    else:
        deficit = coins - c
        c = 0
        use_w = min(w, deficit)
        w -= use_w
        deficit -= use_w
        use_p = min(p, deficit)
        p -= use_p
        deficit -= use_p
        if deficit:
            pw = _spend_power(pw, deficit)
            if pw is None:
                return None
    return (w, c, p, pw)


def _can_pay(player, workers=0, coins=0, priests=0, power=0) -> bool:
    return _settle_cost(player, workers, coins, priests, power) is not None


def _pay(player: PlayerState, workers=0, coins=0, priests=0,
         power=0) -> PlayerState:
    settled = _settle_cost(player, workers, coins, priests, power)
    if settled is None:
        raise IllegalActionError("cannot afford cost even with conversions")
    w, c, p, pw = settled
    return player.replace(workers=w, coins=c, priests=p, power=pw)


def _gain(player: PlayerState, workers=0, coins=0, priests=0,
          power=0, vp=0) -> PlayerState:
    return player.replace(
        workers=player.workers + workers,
        coins=player.coins + coins,
        priests=min(MAX_PRIESTS, player.priests + priests),
        power=_gain_power(player.power, power) if power else player.power,
        vp=player.vp + vp,
    )


# ---------------------------------------------------------------------------
# Board geometry helpers


def _bridge_partners(state: GameState, pidx: int, hex_: tuple[int, int]):
    for owner, h1, h2 in state.bridges:
        if owner != pidx:
            continue
        if h1 == hex_:
            yield h2
        elif h2 == hex_:
            yield h1


def _own_structure_hexes(state: GameState, pidx: int):
    rs, cs = np.nonzero((state.owner == pidx) & (state.structure > 0))
    return list(zip(rs.tolist(), cs.tolist()))


def _reachable_hexes(state: GameState, pidx: int) -> set[tuple[int, int]]:
    """Unbuilt land hexes the player can reach: direct hexagonal adjacency
    to an own structure (bridges included) plus shipping range over water."""
    terrain = state.terrain
    structure = state.structure
    water = int(Terrain.WATER)
    own = _own_structure_hexes(state, pidx)
    shipping = state.players[pidx].shipping
    out: set[tuple[int, int]] = set()
    water_frontier: set[tuple[int, int]] = set()
    for h in own:
        for n in neighbors(*h):
            if terrain[n] == water:
                water_frontier.add(n)
            elif structure[n] == 0:
                out.add(n)
        for n in _bridge_partners(state, pidx, h):
            if structure[n] == 0:
                out.add(n)
    seen = set(water_frontier)
    depth = 1
    frontier = water_frontier
    while frontier and depth <= shipping:
        nxt: set[tuple[int, int]] = set()
        for whex in frontier:
            for n in neighbors(*whex):
                if terrain[n] == water:
                    if n not in seen:
                        seen.add(n)
                        nxt.add(n)
                elif structure[n] == 0:
                    out.add(n)
        frontier = nxt
        depth += 1
    return out


def _adjacent_to_opponent(state: GameState, pidx: int,
                          hex_: tuple[int, int]) -> bool:
    opp = 1 - pidx
    for n in neighbors(*hex_):
        if state.owner[n] == opp and state.structure[n] > 0:
            return True
    return False


def _bridge_candidates(state: GameState, pidx: int):
    """Legal (h1, h2) bridge placements: two land hexes flanking a common
    water hex, not already adjacent, at least one end carrying an own
    structure, and no existing bridge on the pair."""
    terrain = state.terrain
    water = int(Terrain.WATER)
    existing = {frozenset((h1, h2)) for _, h1, h2 in state.bridges}
    cands = []
    seen = set()
    for r, c in all_hexes():
        if terrain[r, c] != water:
            continue
        land = [n for n in neighbors(r, c) if terrain[n] != water]
        for i in range(len(land)):
            for j in range(i + 1, len(land)):
                h1, h2 = sorted((land[i], land[j]))
                key = (h1, h2)
                if key in seen or frozenset(key) in existing:
                    continue
                if h2 in neighbors(*h1):
                    continue
                own1 = state.owner[h1] == pidx and state.structure[h1] > 0
                own2 = state.owner[h2] == pidx and state.structure[h2] > 0
                if not (own1 or own2):
                    continue
                seen.add(key)
                cands.append((h1, h2, own1 and own2))
    # Prefer bridges joining two own structures, then lowest coordinates.
    cands.sort(key=lambda x: (not x[2], x[0], x[1]))
    return [(h1, h2) for h1, h2, _ in cands]


def _connected_component(state: GameState, pidx: int,
                         start: tuple[int, int]) -> set[tuple[int, int]]:
    comp = {start}
    stack = [start]
    while stack:
        h = stack.pop()
        nbrs = list(neighbors(*h)) + list(_bridge_partners(state, pidx, h))
        for n in nbrs:
            if n not in comp and state.owner[n] == pidx and state.structure[n] > 0:
                comp.add(n)
                stack.append(n)
    return comp


# ---------------------------------------------------------------------------
# Scoring helpers


def _trigger_vp(state: GameState, player: PlayerState,
                trigger: Trigger) -> int:
    vp = 0
    tile = state.scoring_tile_now()
    if tile is not None and SCORING_TILES[tile].trigger == trigger:
        vp += SCORING_TILES[tile].trigger_vp
    for f in player.favors:
        if FAVOR_TILES[f].trigger == trigger:
            vp += FAVOR_TILES[f].trigger_vp
    return vp


def _advance_cult(state: GameState, pidx: int, player: PlayerState,
                  cult: int, steps: int) -> PlayerState:
    """Move up a cult track, collecting threshold power; position 10 needs
    an unused town key and an unoccupied top spot."""
    pos = player.cults[cult]
    other = state.players[1 - pidx]
    cap = CULT_MAX - 1
    keys_free = sum(player.towns) - player.keys_used
    if keys_free > 0 and other.cults[cult] < CULT_MAX:
        cap = CULT_MAX
    new_pos = min(pos + steps, cap)
    if new_pos <= pos:
        return player
    power = sum(CULT_POWER_STEPS.get(x, 0) for x in range(pos + 1, new_pos + 1))
    cults = list(player.cults)
    cults[cult] = new_pos
    keys_used = player.keys_used + (1 if new_pos == CULT_MAX else 0)
    player = player.replace(cults=tuple(cults), keys_used=keys_used)
    if power:
        player = _gain(player, power=power)
    return player


def _cult_can_advance(state: GameState, pidx: int, cult: int) -> bool:
    player = state.players[pidx]
    pos = player.cults[cult]
    if pos < CULT_MAX - 1:
        return True
    if pos >= CULT_MAX:
        return False
    keys_free = sum(player.towns) - player.keys_used
    return keys_free > 0 and state.players[1 - pidx].cults[cult] < CULT_MAX


# ---------------------------------------------------------------------------
# Income and cleanup


def player_income(player: PlayerState) -> tuple[int, int, int, int]:
    """(workers, coins, priests, power) gained at round start."""
    spec = FACTION_SPECS[player.faction]
    w = spec.base_workers
    c = 0
    p = 0
    pw = 0
    n_d = player.building_count(Structure.DWELLING)
    w += sum(spec.dwelling_workers[:n_d])
    n_tp = player.building_count(Structure.TRADING_POST)
    c += sum(spec.tp_coins[:n_tp])
    pw += sum(spec.tp_power[:n_tp])
    p += player.building_count(Structure.TEMPLE)
    p += player.building_count(Structure.SANCTUARY)
    if player.building_count(Structure.STRONGHOLD):
        pw += spec.stronghold_power_income
    if player.bonus_card is not None:
        card = BONUS_CARDS[player.bonus_card]
        w += card.income_workers
        c += card.income_coins
        p += card.income_priests
        pw += card.income_power
    for f in player.favors:
        tile = FAVOR_TILES[f]
        w += tile.income_workers
        c += tile.income_coins
        pw += tile.income_power
    return w, c, p, pw


def _apply_income(state: GameState) -> GameState:
    players = []
    for player in state.players:
        w, c, p, pw = player_income(player)
        players.append(_gain(player, workers=w, coins=c, priests=p, power=pw))
    return state.replace(players=tuple(players))


def _end_round(state: GameState) -> GameState:
    """Cult rewards for the ending round, tile upkeep, then either the next
    round's income or final scoring."""
    tile = SCORING_TILES[state.scoring_tiles[state.round - 1]]
    players = []
    for player in state.players:
        payouts = player.cults[int(tile.cult)] // tile.cult_per
        if payouts:
            player = _gain(
                player,
                workers=tile.reward_workers * payouts,
                coins=tile.reward_coins * payouts,
                priests=tile.reward_priests * payouts,
                power=tile.reward_power * payouts,
            )
        player = player.replace(passed=False,
                                specials_used=(False, False, False))
        players.append(player)
    held = {p.bonus_card for p in players}
    bonus_coins = tuple(
        coins + 1 if card not in held else coins
        for card, coins in zip(state.bonus_in_play, state.bonus_coins)
    )
    state = state.replace(
        players=tuple(players),
        bonus_coins=bonus_coins,
        power_actions_used=(False,) * len(POWER_ACTIONS),
        round=state.round + 1,
        to_move=state.start_player,
    )
    if state.round > 6:
        return _final_scoring(state)
    return _apply_income(state)


def _final_scoring(state: GameState) -> GameState:
    players = list(state.players)
    # Cult tracks: 8 / 4 VP for first / second, ties split, position 0 scores
    # nothing.
    for cult in range(4):
        pos = [p.cults[cult] for p in players]
        order = sorted((-v, i) for i, v in enumerate(pos) if v > 0)
        if len(order) == 2 and order[0][0] == order[1][0]:
            share = sum(CULT_ENDGAME_VP) // 2
            for _, i in order:
                players[i] = players[i].replace(vp=players[i].vp + share)
        else:
            for rank, (_, i) in enumerate(order):
                players[i] = players[i].replace(
                    vp=players[i].vp + CULT_ENDGAME_VP[rank])
    # Largest connected area.
    sizes = []
    for pidx in range(2):
        best = 0
        remaining = set(_own_structure_hexes(state, pidx))
        while remaining:
            comp = _connected_component(state, pidx, next(iter(remaining)))
            remaining -= comp
            best = max(best, len(comp))
        sizes.append(best)
    order = sorted((-s, i) for i, s in enumerate(sizes) if s > 0)
    if len(order) == 2 and order[0][0] == order[1][0]:
        share = sum(AREA_ENDGAME_VP) // 2
        for _, i in order:
            players[i] = players[i].replace(vp=players[i].vp + share)
    else:
        for rank, (_, i) in enumerate(order):
            players[i] = players[i].replace(
                vp=players[i].vp + AREA_ENDGAME_VP[rank])
    # Leftover resources: 3 coin-equivalents per VP.
    for i, p in enumerate(players):
        total = p.coins + p.workers + p.priests + p.power[2]
        players[i] = p.replace(vp=p.vp + total // 3)
    return state.replace(players=tuple(players), phase=Phase.END)


# ---------------------------------------------------------------------------
# Spade / bridge / favor automation


def _auto_spade_targets(state: GameState, pidx: int) -> list[tuple[int, int]]:
    """Hexes eligible for a free spade: reachable, unbuilt, not yet home
    terrain, ordered deterministically (row-major)."""
    home = int(FACTION_SPECS[state.players[pidx].faction].home_terrain)
    return sorted(
        h for h in _reachable_hexes(state, pidx)
        if state.terrain[h] != home
    )


def _terraform_one_step_toward_home(terrain_value: int, home: int) -> int:
    d_up = (home - terrain_value) % NUM_LAND_TERRAIN
    d_down = (terrain_value - home) % NUM_LAND_TERRAIN
    step = 1 if d_up <= d_down else -1
    return (terrain_value + step) % NUM_LAND_TERRAIN


def _apply_free_spades(state: GameState, pidx: int, count: int) -> GameState:
    """Deterministically apply free spades (from power actions, the bonus
    card, or the Halflings stronghold): each spade converts the first
    eligible hex one step toward home terrain, earning spade VP."""
    for _ in range(count):
        targets = _auto_spade_targets(state, pidx)
        if not targets:
            break
        hex_ = targets[0]
        player = state.players[pidx]
        home = int(FACTION_SPECS[player.faction].home_terrain)
        terrain = state.terrain.copy()
        terrain[hex_] = _terraform_one_step_toward_home(int(terrain[hex_]),
                                                        home)
        vp = _trigger_vp(state, player, Trigger.SPADE)
        vp += FACTION_SPECS[player.faction].vp_per_spade
        players = list(state.players)
        players[pidx] = player.replace(vp=player.vp + vp)
        state = state.replace(terrain=terrain, players=tuple(players))
    return state


def _place_bridge(state: GameState, pidx: int) -> GameState:
    cands = _bridge_candidates(state, pidx)
    if not cands:
        raise IllegalActionError("no legal bridge placement")
    h1, h2 = cands[0]
    player = state.players[pidx]
    players = list(state.players)
    players[pidx] = player.replace(bridges_built=player.bridges_built + 1)
    state = state.replace(
        bridges=state.bridges + ((pidx, h1, h2),),
        players=tuple(players),
    )
    # A bridge can merge building groups into a town; either end may seed it.
    state = _check_towns(state, pidx, h1)
    return _check_towns(state, pidx, h2)


def _grant_favor(state: GameState, pidx: int) -> GameState:
    """Deterministic favor award on temple/sanctuary builds; the flat action
    space has no favor-choice head."""
    player = state.players[pidx]
    for f in FAVOR_PRIORITY:
        if state.favor_supply[f] > 0 and f not in player.favors:
            supply = list(state.favor_supply)
            supply[f] -= 1
            tile = FAVOR_TILES[f]
            player = player.replace(favors=player.favors | {f})
            player = _advance_cult(state, pidx, player, int(tile.cult),
                                   tile.cult_steps)
            players = list(state.players)
            players[pidx] = player
            return state.replace(players=tuple(players),
                                 favor_supply=tuple(supply))
    return state


def _check_towns(state: GameState, pidx: int,
                 seed_hex: tuple[int, int]) -> GameState:
    """Detect a newly founded town containing seed_hex and queue the
    town-tile choice."""
    if state.structure[seed_hex] == 0 or state.owner[seed_hex] != pidx:
        return state
    comp = _connected_component(state, pidx, seed_hex)
    if any(state.town_marked[h] for h in comp):
        return state
    if len(comp) < TOWN_MIN_BUILDINGS:
        return state
    player = state.players[pidx]
    min_power = TOWN_MIN_POWER
    if any(FAVOR_TILES[f].town_power_discount for f in player.favors):
        min_power -= 1
    power = sum(STRUCTURE_POWER[Structure(int(state.structure[h]))]
                for h in comp)
    if power < min_power:
        return state
    if sum(state.town_supply) == 0:
        return state
    marked = state.town_marked.copy()
    for h in comp:
        marked[h] = True
    return state.replace(town_marked=marked,
                         pending_town=state.pending_town + 1)


# ---------------------------------------------------------------------------
# Public operations


def draw_setup(config: GameConfig) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Validated (scoring tiles, bonus cards) for a config; seeded draw when
    not given explicitly."""
    rng = np.random.default_rng(config.seed)
    if config.scoring_tiles is not None:
        scoring = tuple(int(t) for t in config.scoring_tiles)
        if len(scoring) != 6 or len(set(scoring)) != 6:
            raise ConfigError("need 6 distinct scoring tiles")
        if any(not 0 <= t < NUM_SCORING_TILES for t in scoring):
            raise ConfigError("scoring tile id out of range")
    else:
        while True:
            scoring = tuple(
                int(x)
                for x in rng.choice(NUM_SCORING_TILES, size=6, replace=False))
            if SPADE_TILE_INDEX not in scoring[4:]:
                break
    if config.bonus_cards is not None:
        bonus = tuple(int(b) for b in config.bonus_cards)
        if len(bonus) != NUM_BONUS_IN_PLAY or len(set(bonus)) != len(bonus):
            raise ConfigError("need 5 distinct bonus cards")
        if any(not 0 <= b < NUM_BONUS_CARDS for b in bonus):
            raise ConfigError("bonus card id out of range")
    else:
        bonus = tuple(
            int(x)
            for x in rng.choice(NUM_BONUS_CARDS, size=NUM_BONUS_IN_PLAY,
                                replace=False))
    return scoring, bonus


def new_game(config: GameConfig) -> GameState:
    scoring, bonus = draw_setup(config)
    return initial_state(config, scoring, bonus)


def is_terminal(state: GameState) -> bool:
    return state.phase == Phase.END


def final_scores(state: GameState) -> tuple[int, int]:
    if not is_terminal(state):
        raise RulesError("final_scores on a non-terminal state")
    return state.players[0].vp, state.players[1].vp


def outcome(state: GameState, pidx: int) -> int:
    """+1 win, -1 loss, 0 tie for the given player."""
    a, b = final_scores(state)
    mine, theirs = (a, b) if pidx == 0 else (b, a)
    if mine > theirs:
        return 1
    if mine < theirs:
        return -1
    return 0


def legal_actions(state: GameState) -> list[Action]:
    if state.phase == Phase.END:
        return []
    if state.phase == Phase.SETUP:
        return _setup_actions(state)
    if state.pending_town:
        return [TownTileChoice(tile=t) for t in range(NUM_TOWN_TILES)
                if state.town_supply[t] > 0]
    return _turn_actions(state)


def _setup_actions(state: GameState) -> list[Action]:
    pidx = _SETUP_SEATS[state.setup_stage]
    player = state.players[pidx]
    if state.setup_stage < 4:
        home = FACTION_SPECS[player.faction].home_terrain
        return [
            TerraformBuild(hex=(r, c), target_terrain=home, build=True)
            for r, c in all_hexes()
            if state.terrain[r, c] == int(home) and state.structure[r, c] == 0
        ]
    other = state.players[1 - pidx]
    return [Pass(bonus_card=b) for b in state.bonus_in_play
            if b != other.bonus_card]


def _turn_actions(state: GameState) -> list[Action]:
    pidx = state.to_move
    player = state.players[pidx]
    spec = FACTION_SPECS[player.faction]
    actions: list[Action] = []
    rate = spade_exchange_rate(player.dig_level)
    home = int(spec.home_terrain)
    dwelling_stock = BUILDING_STOCK[Structure.DWELLING] - \
        player.building_count(Structure.DWELLING)

    for hex_ in sorted(_reachable_hexes(state, pidx)):
        cur = int(state.terrain[hex_])
        for target in range(NUM_LAND_TERRAIN):
            d = wheel_distance(cur, target)
            if d > 0 and _can_pay(player, workers=d * rate):
                actions.append(TerraformBuild(hex=hex_,
                                              target_terrain=Terrain(target),
                                              build=False))
            if target == home and dwelling_stock > 0:
                cost = spec.dwelling_cost
                if _can_pay(player, workers=d * rate + cost.workers,
                            coins=cost.coins, priests=cost.priests):
                    actions.append(TerraformBuild(
                        hex=hex_, target_terrain=Terrain(target), build=True))

    for hex_ in _own_structure_hexes(state, pidx):
        cur = Structure(int(state.structure[hex_]))
        for kind, (src, dst) in enumerate(UPGRADE_KINDS):
            if cur != src:
                continue
            if player.building_count(dst) >= BUILDING_STOCK[dst]:
                continue
            cost = _upgrade_cost(state, pidx, hex_, dst)
            if _can_pay(player, workers=cost.workers, coins=cost.coins,
                        priests=cost.priests):
                actions.append(Upgrade(hex=hex_, kind=kind))

    if player.priests >= 1:
        for cult in range(4):
            if not _cult_can_advance(state, pidx, cult):
                continue
            three_used, twos_used = state.priest_slots[cult]
            if not three_used:
                actions.append(SendPriest(cult=Cult(cult), steps=3))
            if twos_used < 2:
                actions.append(SendPriest(cult=Cult(cult), steps=2))
            actions.append(SendPriest(cult=Cult(cult), steps=1))

    if player.shipping < MAX_SHIPPING:
        cost = spec.shipping_upgrade_cost
        if _can_pay(player, coins=cost.coins, priests=cost.priests):
            actions.append(AdvanceShipping())
    if player.dig_level < MAX_DIG_LEVEL:
        cost = spec.dig_upgrade_cost
        if _can_pay(player, workers=cost.workers, coins=cost.coins,
                    priests=cost.priests):
            actions.append(AdvanceSpade())

    for slot, pa in enumerate(POWER_ACTIONS):
        if state.power_actions_used[slot]:
            continue
        if not _can_pay(player, power=pa.cost):
            continue
        if pa.bridge and (player.bridges_built >= MAX_BRIDGES
                          or not _bridge_candidates(state, pidx)):
            continue
        if pa.spades and not _auto_spade_targets(state, pidx):
            continue
        actions.append(PowerActionMove(slot=slot))

    if not player.specials_used[0] and player.bonus_card is not None \
            and BONUS_CARDS[player.bonus_card].special_spade \
            and _auto_spade_targets(state, pidx):
        actions.append(SpecialActionMove(slot=0))
    if not player.specials_used[1] \
            and any(FAVOR_TILES[f].special_cult_step for f in player.favors) \
            and any(_cult_can_advance(state, pidx, c) for c in range(4)):
        actions.append(SpecialActionMove(slot=1))
    if not player.specials_used[2] and player.faction == Faction.ENGINEERS \
            and player.bridges_built < MAX_BRIDGES \
            and _can_pay(player, workers=2) \
            and _bridge_candidates(state, pidx):
        actions.append(SpecialActionMove(slot=2))

    if state.round >= 6:
        if player.bonus_card is not None:
            actions.append(Pass(bonus_card=player.bonus_card))
    else:
        other = state.players[1 - pidx]
        for b in state.bonus_in_play:
            if b != player.bonus_card and b != other.bonus_card:
                actions.append(Pass(bonus_card=b))
    return actions


def _upgrade_cost(state: GameState, pidx: int, hex_, dst: Structure):
    spec = FACTION_SPECS[state.players[pidx].faction]
    if dst == Structure.TRADING_POST:
        if _adjacent_to_opponent(state, pidx, hex_):
            return spec.tp_cost_near
        return spec.tp_cost_far
    if dst == Structure.TEMPLE:
        return spec.temple_cost
    if dst == Structure.SANCTUARY:
        return spec.sanctuary_cost
    return spec.stronghold_cost


def apply_action(state: GameState, action: Action) -> GameState:
    """Successor function. Raises IllegalActionError (leaving the input
    untouched) if the action is not legal in the given state."""
    if state.phase == Phase.END:
        raise IllegalActionError("game is over")
    if action not in legal_actions(state):
        raise IllegalActionError(
            f"illegal action in this state: {action!r}")
    if state.phase == Phase.SETUP:
        new = _apply_setup(state, action)
    elif state.pending_town:
        new = _apply_town_choice(state, action)
    else:
        new = _apply_turn(state, action)
    new = new.replace(ply=state.ply + 1)
    if new.phase != Phase.END and new.ply >= new.config.max_plies:
        new = _final_scoring(new).replace(truncated=True)
    return new


def _apply_setup(state: GameState, action: Action) -> GameState:
    pidx = _SETUP_SEATS[state.setup_stage]
    if state.setup_stage < 4:
        assert isinstance(action, TerraformBuild)
        structure = state.structure.copy()
        owner = state.owner.copy()
        structure[action.hex] = int(Structure.DWELLING)
        owner[action.hex] = pidx
        player = state.players[pidx]
        buildings = list(player.buildings)
        buildings[int(Structure.DWELLING) - 1] += 1
        players = list(state.players)
        players[pidx] = player.replace(buildings=tuple(buildings))
        state = state.replace(structure=structure, owner=owner,
                              players=tuple(players))
    else:
        assert isinstance(action, Pass)
        slot = state.bonus_in_play.index(action.bonus_card)
        player = state.players[pidx]
        players = list(state.players)
        players[pidx] = _gain(player, coins=state.bonus_coins[slot]).replace(
            bonus_card=action.bonus_card)
        coins = list(state.bonus_coins)
        coins[slot] = 0
        state = state.replace(players=tuple(players),
                              bonus_coins=tuple(coins))
    stage = state.setup_stage + 1
    if stage < len(_SETUP_SEATS):
        return state.replace(setup_stage=stage, to_move=_SETUP_SEATS[stage])
    state = state.replace(setup_stage=stage, round=1, phase=Phase.ACTIONS,
                          to_move=state.start_player)
    return _apply_income(state)


def _apply_town_choice(state: GameState, action: Action) -> GameState:
    assert isinstance(action, TownTileChoice)
    pidx = state.to_move
    player = state.players[pidx]
    tile = TOWN_TILES[action.tile]
    vp = tile.vp + _trigger_vp(state, player, Trigger.TOWN)
    towns = list(player.towns)
    towns[action.tile] += 1
    player = _gain(player, workers=tile.workers, coins=tile.coins,
                   priests=tile.priests, power=tile.power, vp=vp)
    player = player.replace(towns=tuple(towns))
    supply = list(state.town_supply)
    supply[action.tile] -= 1
    players = list(state.players)
    players[pidx] = player
    state = state.replace(players=tuple(players), town_supply=tuple(supply),
                          pending_town=state.pending_town - 1)
    if state.pending_town == 0:
        state = _advance_turn(state)
    return state


def _advance_turn(state: GameState) -> GameState:
    """Hand the turn to the next non-passed player; both passed ends the
    round."""
    if all(p.passed for p in state.players):
        return _end_round(state)
    nxt = 1 - state.to_move
    if state.players[nxt].passed:
        nxt = state.to_move
    return state.replace(to_move=nxt)


def _apply_turn(state: GameState, action: Action) -> GameState:
    pidx = state.to_move
    if isinstance(action, TerraformBuild):
        state = _do_terraform_build(state, pidx, action)
    elif isinstance(action, Upgrade):
        state = _do_upgrade(state, pidx, action)
    elif isinstance(action, SendPriest):
        state = _do_send_priest(state, pidx, action)
    elif isinstance(action, AdvanceShipping):
        state = _do_advance_shipping(state, pidx)
    elif isinstance(action, AdvanceSpade):
        state = _do_advance_spade(state, pidx)
    elif isinstance(action, PowerActionMove):
        state = _do_power_action(state, pidx, action)
    elif isinstance(action, SpecialActionMove):
        state = _do_special_action(state, pidx, action)
    elif isinstance(action, Pass):
        return _do_pass(state, pidx, action)
    else:
        raise IllegalActionError(f"unhandled action {action!r}")
    if state.pending_town:
        return state
    return _advance_turn(state)


def _do_terraform_build(state: GameState, pidx: int,
                        action: TerraformBuild) -> GameState:
    player = state.players[pidx]
    spec = FACTION_SPECS[player.faction]
    rate = spade_exchange_rate(player.dig_level)
    cur = int(state.terrain[action.hex])
    d = wheel_distance(cur, int(action.target_terrain))
    cost_w = d * rate
    if action.build:
        cost = spec.dwelling_cost
        player = _pay(player, workers=cost_w + cost.workers,
                      coins=cost.coins, priests=cost.priests)
    else:
        player = _pay(player, workers=cost_w)
    vp = d * (_trigger_vp(state, player, Trigger.SPADE) + spec.vp_per_spade)
    terrain = state.terrain.copy()
    terrain[action.hex] = int(action.target_terrain)
    state_kwargs = dict(terrain=terrain)
    if action.build:
        vp += _trigger_vp(state, player, Trigger.DWELLING)
        structure = state.structure.copy()
        owner = state.owner.copy()
        structure[action.hex] = int(Structure.DWELLING)
        owner[action.hex] = pidx
        buildings = list(player.buildings)
        buildings[int(Structure.DWELLING) - 1] += 1
        player = player.replace(buildings=tuple(buildings))
        state_kwargs.update(structure=structure, owner=owner)
    player = player.replace(vp=player.vp + vp)
    players = list(state.players)
    players[pidx] = player
    state = state.replace(players=tuple(players), **state_kwargs)
    if action.build:
        state = _check_towns(state, pidx, action.hex)
    return state


def _do_upgrade(state: GameState, pidx: int, action: Upgrade) -> GameState:
    player = state.players[pidx]
    src, dst = UPGRADE_KINDS[action.kind]
    cost = _upgrade_cost(state, pidx, action.hex, dst)
    player = _pay(player, workers=cost.workers, coins=cost.coins,
                  priests=cost.priests)
    structure = state.structure.copy()
    structure[action.hex] = int(dst)
    buildings = list(player.buildings)
    buildings[int(src) - 1] -= 1
    buildings[int(dst) - 1] += 1
    player = player.replace(buildings=tuple(buildings))
    vp = 0
    if dst == Structure.TRADING_POST:
        vp += _trigger_vp(state, player, Trigger.TRADING_POST)
    elif dst in (Structure.STRONGHOLD, Structure.SANCTUARY):
        vp += _trigger_vp(state, player, Trigger.STRONGHOLD_SANCTUARY)
    player = player.replace(vp=player.vp + vp)
    players = list(state.players)
    players[pidx] = player
    state = state.replace(players=tuple(players), structure=structure)
    if dst in (Structure.TEMPLE, Structure.SANCTUARY):
        state = _grant_favor(state, pidx)
    if dst == Structure.STRONGHOLD \
            and state.players[pidx].faction == Faction.HALFLINGS:
        state = _apply_free_spades(state, pidx, 3)
    state = _check_towns(state, pidx, action.hex)
    return state


def _do_send_priest(state: GameState, pidx: int,
                    action: SendPriest) -> GameState:
    player = _pay(state.players[pidx], priests=1)
    player = _advance_cult(state, pidx, player, int(action.cult),
                           action.steps)
    slots = list(state.priest_slots)
    three_used, twos_used = slots[int(action.cult)]
    if action.steps == 3:
        three_used = True
    elif action.steps == 2:
        twos_used += 1
    slots[int(action.cult)] = (three_used, twos_used)
    players = list(state.players)
    players[pidx] = player
    return state.replace(players=tuple(players), priest_slots=tuple(slots))


def _do_advance_shipping(state: GameState, pidx: int) -> GameState:
    player = state.players[pidx]
    cost = FACTION_SPECS[player.faction].shipping_upgrade_cost
    player = _pay(player, coins=cost.coins, priests=cost.priests)
    new_level = player.shipping + 1
    player = player.replace(shipping=new_level,
                            vp=player.vp + SHIPPING_ADVANCE_VP[new_level])
    players = list(state.players)
    players[pidx] = player
    return state.replace(players=tuple(players))


def _do_advance_spade(state: GameState, pidx: int) -> GameState:
    player = state.players[pidx]
    cost = FACTION_SPECS[player.faction].dig_upgrade_cost
    player = _pay(player, workers=cost.workers, coins=cost.coins,
                  priests=cost.priests)
    player = player.replace(dig_level=player.dig_level + 1,
                            vp=player.vp + DIG_ADVANCE_VP)
    players = list(state.players)
    players[pidx] = player
    return state.replace(players=tuple(players))


def _do_power_action(state: GameState, pidx: int,
                     action: PowerActionMove) -> GameState:
    pa = POWER_ACTIONS[action.slot]
    player = _pay(state.players[pidx], power=pa.cost)
    player = _gain(player, workers=pa.workers, coins=pa.coins,
                   priests=pa.priests)
    players = list(state.players)
    players[pidx] = player
    used = list(state.power_actions_used)
    used[action.slot] = True
    state = state.replace(players=tuple(players),
                          power_actions_used=tuple(used))
    if pa.bridge:
        state = _place_bridge(state, pidx)
    if pa.spades:
        state = _apply_free_spades(state, pidx, pa.spades)
    return state


def _do_special_action(state: GameState, pidx: int,
                       action: SpecialActionMove) -> GameState:
    player = state.players[pidx]
    used = list(player.specials_used)
    used[action.slot] = True
    if action.slot == 0:
        players = list(state.players)
        players[pidx] = player.replace(specials_used=tuple(used))
        state = state.replace(players=tuple(players))
        return _apply_free_spades(state, pidx, 1)
    if action.slot == 1:
        cult = next(c for c in range(4) if _cult_can_advance(state, pidx, c))
        player = _advance_cult(state, pidx, player, cult, 1)
        players = list(state.players)
        players[pidx] = player.replace(specials_used=tuple(used))
        return state.replace(players=tuple(players))
    player = _pay(player, workers=2)
    players = list(state.players)
    players[pidx] = player.replace(specials_used=tuple(used))
    state = state.replace(players=tuple(players))
    return _place_bridge(state, pidx)


def _do_pass(state: GameState, pidx: int, action: Pass) -> GameState:
    player = state.players[pidx]
    vp = 0
    if player.bonus_card is not None:
        card = BONUS_CARDS[player.bonus_card]
        vp += card.pass_vp_dwelling * player.building_count(Structure.DWELLING)
        vp += card.pass_vp_tp * player.building_count(Structure.TRADING_POST)
        vp += card.pass_vp_shsa * (
            player.building_count(Structure.STRONGHOLD)
            + player.building_count(Structure.SANCTUARY))
    for f in player.favors:
        vp += FAVOR_TILES[f].pass_vp_tp * \
            player.building_count(Structure.TRADING_POST)
    if player.faction == Faction.ENGINEERS \
            and player.building_count(Structure.STRONGHOLD):
        for owner, h1, h2 in state.bridges:
            if owner == pidx and state.owner[h1] == pidx \
                    and state.structure[h1] > 0 \
                    and state.owner[h2] == pidx and state.structure[h2] > 0:
                vp += ENGINEERS_BRIDGE_PASS_VP
    bonus_coins = state.bonus_coins
    if state.round < 6 and action.bonus_card != player.bonus_card:
        slot = state.bonus_in_play.index(action.bonus_card)
        gained = bonus_coins[slot]
        coins_list = list(bonus_coins)
        coins_list[slot] = 0
        bonus_coins = tuple(coins_list)
        player = _gain(player, coins=gained)
        player = player.replace(bonus_card=action.bonus_card)
    player = player.replace(vp=player.vp + vp, passed=True)
    players = list(state.players)
    players[pidx] = player
    first_passer = not state.players[1 - pidx].passed
    state = state.replace(
        players=tuple(players),
        bonus_coins=bonus_coins,
        start_player=pidx if first_passer else state.start_player,
    )
    return _advance_turn(state)
