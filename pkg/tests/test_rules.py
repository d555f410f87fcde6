"""Tests for the rules engine: board geometry, resource conversions,
legality closure, random-play invariants, an independent reachability
oracle, and a fully hand-verified scripted game."""

import numpy as np
import pytest

from tmzero.rules import (
    GameConfig,
    IllegalActionError,
    Phase,
    Structure,
    Terrain,
    action_to_index,
    apply_action,
    final_scores,
    index_to_action,
    is_terminal,
    legal_actions,
    neighbors,
    new_game,
    outcome,
    wheel_distance,
)
from tmzero.rules.actions import NUM_ACTIONS, TerraformBuild
from tmzero.rules.board import (
    BASE_TERRAIN,
    BUILDING_STOCK,
    COLS,
    ROWS,
    all_hexes,
    in_bounds,
)
from tmzero.rules.engine import _settle_cost
from tmzero.rules.factions import FACTION_SPECS, spade_exchange_rate
from tmzero.rules.state import PlayerState


def random_playout(seed, max_actions=600):
    """Play uniformly random legal actions to the end; yields
    (state, action) pairs as they are applied."""
    rng = np.random.default_rng(seed)
    state = new_game(GameConfig(seed=seed))
    for _ in range(max_actions):
        if is_terminal(state):
            return
        acts = legal_actions(state)
        act = acts[int(rng.integers(len(acts)))]
        yield state, act
        state = apply_action(state, act)
    raise AssertionError("playout did not terminate")


def finish_playout(seed):
    state = new_game(GameConfig(seed=seed))
    for _, act in random_playout(seed):
        state = apply_action(state, act)
    return state


class TestBoardGeometry:
    def test_wheel_distance_table(self):
        # [DERIVED] seven land terrains on a cycle; distance is the
        # shorter way around.
        assert wheel_distance(0, 0) == 0
        assert wheel_distance(0, 1) == 1
        assert wheel_distance(0, 6) == 1
        assert wheel_distance(0, 3) == 3
        assert wheel_distance(1, 5) == 3
        assert wheel_distance(2, 6) == 3
        for a in range(7):
            for b in range(7):
                assert wheel_distance(a, b) == wheel_distance(b, a) <= 3

    def test_bounds(self):
        # [DERIVED] 9 rows; odd (shifted) rows have 12 usable hexes.
        for r in range(ROWS):
            usable = [c for c in range(COLS) if in_bounds(r, c)]
            assert len(usable) == (12 if r % 2 else 13)
        assert not in_bounds(-1, 0)
        assert not in_bounds(0, COLS)
        assert len(all_hexes()) == 9 * 13 - 4

    def test_neighbors_symmetric_and_in_bounds(self):
        # [DERIVED] hex adjacency is symmetric and respects bounds.
        for r, c in all_hexes():
            ns = neighbors(r, c)
            assert 1 <= len(ns) <= 6
            assert len(set(ns)) == len(ns)
            for n in ns:
                assert in_bounds(*n)
                assert (r, c) in neighbors(*n)

    def test_base_map_composition(self):
        # [DERIVED] frozen composition of the fixed map: hand-counted
        # terrain totals over the 113 usable hexes.
        counts = {t: 0 for t in Terrain}
        for r, c in all_hexes():
            counts[Terrain(int(BASE_TERRAIN[r, c]))] += 1
        assert sum(counts.values()) == 113
        assert counts[Terrain.MOUNTAIN] == 10  # Engineers' home
        assert counts[Terrain.PLAIN] == 11  # Halflings' home
        assert counts[Terrain.WATER] > 0


class TestCostConversions:
    PLAYER = PlayerState(faction=list(FACTION_SPECS)[0], workers=2, coins=3,
                         priests=2, power=(0, 4, 3))

    def test_plain_payment(self):
        # [TRIVIAL]
        assert _settle_cost(self.PLAYER, workers=2, coins=3) == \
            (0, 0, 2, (0, 4, 3))

    def test_priest_covers_worker_shortfall(self):
        # [DERIVED] one spare priest converts 1:1 into the missing worker.
        assert _settle_cost(self.PLAYER, workers=3) == (0, 3, 1, (0, 4, 3))

    def test_power_covers_worker_at_three_per(self):
        # [DERIVED] 5 workers needed: 2 held + 2 priests + 1 from 3 power
        # (all of bowl III).
        assert _settle_cost(self.PLAYER, workers=5) == (0, 3, 0, (3, 4, 0))

    def test_burning_power(self):
        # [DERIVED] spending 5 power from (0,4,3): 3 from bowl III, then
        # two burns (each destroys one bowl-II token to promote another).
        assert _settle_cost(self.PLAYER, power=5) == (2, 3, 2, (5, 0, 0))

    def test_unaffordable(self):
        # [TRIVIAL]
        assert _settle_cost(self.PLAYER, workers=9) is None
        assert _settle_cost(self.PLAYER, power=6) is None

    def test_coin_shortfall_uses_workers_then_power(self):
        # [DERIVED] 7 coins: 3 held, 2 spare workers, 2 spare priests
        # covers it without touching power.
        assert _settle_cost(self.PLAYER, coins=7) == (0, 0, 0, (0, 4, 3))


class TestSetup:
    def test_seat_order_and_result(self):
        # [DERIVED] placement order seat 0,1,1,0 then bonus picks 1,0;
        # each player starts round 1 with two dwellings and a distinct
        # bonus card.
        state = new_game(GameConfig(seed=0))
        seats = []
        while state.phase == Phase.SETUP:
            seats.append(state.to_move)
            state = apply_action(state, legal_actions(state)[0])
        assert seats == [0, 1, 1, 0, 1, 0]
        assert state.round == 1 and state.phase == Phase.ACTIONS
        for p in state.players:
            assert p.building_count(Structure.DWELLING) == 2
            assert p.bonus_card is not None
        assert state.players[0].bonus_card != state.players[1].bonus_card

    def test_setup_builds_on_home_terrain_only(self):
        # [TRIVIAL]
        state = new_game(GameConfig(seed=1))
        home = FACTION_SPECS[state.players[0].faction].home_terrain
        for act in legal_actions(state):
            assert isinstance(act, TerraformBuild)
            assert act.target_terrain == home
            assert state.terrain[act.hex] == int(home)


class TestLegalityClosure:
    SEEDS = range(12)

    def test_every_legal_action_applies(self):
        # [DERIVED] closure: each listed action applies without error.
        for seed in self.SEEDS:
            for state, act in random_playout(seed):
                apply_action(state, act)

    def test_illegal_indices_raise(self):
        # [DERIVED] any index outside the legal set raises.
        rng = np.random.default_rng(0)
        state = new_game(GameConfig(seed=3))
        for _ in range(30):
            legal = {action_to_index(a) for a in legal_actions(state)}
            for idx in rng.integers(0, NUM_ACTIONS, size=5):
                if int(idx) not in legal:
                    with pytest.raises(IllegalActionError):
                        apply_action(state, index_to_action(int(idx)))
            state = apply_action(
                state, index_to_action(sorted(legal)[0]))

    def test_legal_actions_deterministic(self):
        # [TRIVIAL]
        state = new_game(GameConfig(seed=5))
        for _ in range(10):
            a = [action_to_index(x) for x in legal_actions(state)]
            b = [action_to_index(x) for x in legal_actions(state)]
            assert a == b
            state = apply_action(state, index_to_action(a[0]))

    def test_terminal_state_has_no_actions(self):
        # [TRIVIAL]
        state = finish_playout(7)
        assert is_terminal(state)
        assert legal_actions(state) == []
        with pytest.raises(IllegalActionError):
            apply_action(state, index_to_action(0))


class TestRandomPlayInvariants:
    SEEDS = range(20)

    def test_invariants_hold_throughout(self):
        # [DERIVED] resources and power bowls never go negative, building
        # counts respect stock, cult positions stay on the track, and the
        # game ends in phase END within the ply cap.
        for seed in self.SEEDS:
            state = new_game(GameConfig(seed=seed))
            for _, act in random_playout(seed):
                state = apply_action(state, act)
                for p in state.players:
                    assert p.workers >= 0 and p.coins >= 0
                    assert p.priests >= 0
                    assert all(b >= 0 for b in p.power)
                    assert all(0 <= pos <= 10 for pos in p.cults)
                    for s in Structure:
                        if s != Structure.NONE:
                            assert p.building_count(s) <= BUILDING_STOCK[s]
            assert is_terminal(state)
            assert state.phase == Phase.END

    def test_outcomes_zero_sum(self):
        # [DERIVED] win/tie/loss maps to +1/0/-1 and the pair sums to 0.
        for seed in self.SEEDS:
            state = finish_playout(seed)
            z0, z1 = outcome(state, 0), outcome(state, 1)
            assert z0 + z1 == 0
            assert (z0, z1) in ((1, -1), (-1, 1), (0, 0))
            a, b = final_scores(state)
            assert (a > b) == (z0 == 1) and (a < b) == (z0 == -1)

    def test_apply_action_is_pure(self):
        # [DERIVED] the input state is never mutated: boards are read-only
        # arrays and all fields compare equal after applying an action.
        state = new_game(GameConfig(seed=2))
        for _ in range(40):
            if is_terminal(state):
                break
            terrain = state.terrain.copy()
            players = state.players
            act = legal_actions(state)[0]
            nxt = apply_action(state, act)
            assert np.array_equal(state.terrain, terrain)
            assert state.players == players
            with pytest.raises(ValueError):
                state.structure[0, 0] = 5  # read-only
            state = nxt


class TestReachabilityOracle:
    @staticmethod
    def oracle_reachable(state, pidx):
        """Independent recomputation: unbuilt land adjacent to an own
        structure, across own bridges, or within shipping steps over
        water."""
        own = [(r, c) for r, c in all_hexes()
               if state.owner[r, c] == pidx and state.structure[r, c] > 0]
        water = {h for h in all_hexes()
                 if state.terrain[h] == int(Terrain.WATER)}
        out = set()
        frontier = set()
        for h in own:
            for n in neighbors(*h):
                (frontier if n in water else out).add(n)
            for owner, h1, h2 in state.bridges:
                if owner == pidx and h in (h1, h2):
                    out.add(h2 if h == h1 else h1)
        seen = set(frontier)
        for _ in range(state.players[pidx].shipping):
            nxt = set()
            for w in frontier:
                for n in neighbors(*w):
                    if n in water:
                        if n not in seen:
                            seen.add(n)
                            nxt.add(n)
                    else:
                        out.add(n)
            frontier = nxt
        return {h for h in out if state.structure[h] == 0}

    def test_terraform_targets_match_oracle(self):
        # [DERIVED] every terraform/build action targets an oracle-
        # reachable hex, and every reachable home-terrain hex is buildable
        # whenever plain resources (no conversions) already cover the
        # cost.
        checked = 0
        for seed in range(6):
            for state, _ in random_playout(seed):
                if state.phase != Phase.ACTIONS or state.pending_town:
                    continue
                pidx = state.to_move
                player = state.players[pidx]
                spec = FACTION_SPECS[player.faction]
                reach = self.oracle_reachable(state, pidx)
                acts = [a for a in legal_actions(state)
                        if isinstance(a, TerraformBuild)]
                for a in acts:
                    assert a.hex in reach
                    checked += 1
                listed = {(a.hex, a.build) for a in acts}
                rate = spade_exchange_rate(player.dig_level)
                stock = BUILDING_STOCK[Structure.DWELLING] - \
                    player.building_count(Structure.DWELLING)
                cost = spec.dwelling_cost
                for h in reach:
                    d = wheel_distance(int(state.terrain[h]),
                                       int(spec.home_terrain))
                    if stock > 0 \
                            and player.workers >= d * rate + cost.workers \
                            and player.coins >= cost.coins:
                        assert (h, True) in listed
        assert checked > 200


@pytest.fixture(scope="module")
def history():
    state = new_game(TestScriptedGame.CONFIG)
    states = [state]
    for idx in TestScriptedGame.ACTIONS:
        state = apply_action(state, index_to_action(idx))
        states.append(state)
    return states


class TestScriptedGame:
    """A complete six-round game with every action's effect verified by
    hand: setup, digging upgrades, power actions, trading posts, temples
    with favor tiles, a founded town, a stronghold, a sanctuary, three
    bridges' worth of special actions, priest placement, and final
    scoring (cult standings, largest area, leftover resources)."""

    CONFIG = GameConfig(seed=0, scoring_tiles=(2, 3, 4, 5, 6, 7),
                        bonus_cards=(1, 2, 3, 5, 6))
    ACTIONS = (
        # Setup: two dwellings each, then bonus cards.
        1055, 1033, 961, 551, 2134, 2135,
        # Round 1: both improve digging; builds and a power action.
        2119, 1015, 2122, 2121, 1073, 2119, 2130, 2131,
        # Round 2: builds, trading post, passes.
        803, 979, 2135, 1040, 2134,
        # Round 3: trading posts and a temple (favor tile).
        1058, 1022, 1076, 1042, 2130, 2131,
        # Round 4: a fourth building founds a 7-power town; town tile 3.
        587, 2112, 806, 2141, 1249, 2135, 2132,
        # Round 5: bridge special, sanctuary, stronghold, power action.
        2128, 1043, 1059, 2121, 2130, 1024, 2134,
        # Round 6: second bridge, cult pushes, final passes.
        2128, 2113, 2130, 2109, 2115, 2106, 2134,
    )
    FINAL_SCORES = (85, 95)

    def test_final_scores(self, history):
        # [DERIVED] hand-computed: P0 = 61 (in-game, incl. +6 bridge pass
        # bonus) + 18 largest area (5 connected via bridges) + 6 from
        # 18 leftover coins; P1 = 44 in-game + 32 for leading all four
        # cults + 12 area + 7 from resources incl. 7 bowl-III power
        # (4 air // 2 -> 4 power in the last round).
        final = history[-1]
        assert is_terminal(final)
        assert final_scores(final) == self.FINAL_SCORES
        assert (outcome(final, 0), outcome(final, 1)) == (-1, 1)

    def test_round_boundaries(self, history):
        # [DERIVED] setup takes 6 plies; rounds end exactly where the
        # hand trace says.
        rounds = [s.round for s in history]
        assert rounds[0] == 0 and rounds[6] == 1
        for i, expect in ((14, 2), (19, 3), (25, 4), (32, 5), (39, 6)):
            assert rounds[i] == expect

    def test_round_three_snapshot(self, history):
        # [DERIVED] full hand-computed panels at the start of round 3
        # (after dig upgrades, two 4pw->2w / 3pw->1p power actions, and
        # both round incomes).
        s = history[19]
        p0, p1 = s.players
        assert (p0.workers, p0.coins, p0.priests) == (3, 8, 1)
        assert p0.power == (7, 1, 0) and p0.vp == 30
        assert p0.dig_level == 1 and p0.bonus_card == 6
        assert (p1.workers, p1.coins, p1.priests) == (6, 15, 0)
        assert p1.power == (5, 4, 0) and p1.vp == 33
        assert p1.cults == (0, 0, 1, 1) and p1.bonus_card == 5

    def test_town_founding(self, history):
        # [DERIVED] the trading-post upgrade at ply 27 completes a
        # 4-building, 7-power group; tile 3 pays 8vp + 1 priest.
        pending = history[28]
        assert pending.pending_town == 1
        assert pending.players[0].vp == 39
        after = history[29]
        assert after.pending_town == 0
        assert after.players[0].towns == (0, 0, 0, 1, 0)
        assert after.players[0].vp == 47
        assert after.players[0].priests == \
            pending.players[0].priests + 1
        assert after.town_supply[3] == history[0].town_supply[3] - 1
        assert int(after.town_marked.sum()) >= 4

    def test_stronghold_paid_with_conversions(self, history):
        # [DERIVED] the stronghold (3w 6c) is paid with 0 workers in
        # hand: two spare priests convert 1:1 and the last worker costs
        # 3 power, burning bowl II down to (4,1,0).
        before, after = history[34].players[0], history[35].players[0]
        assert before.workers == 0 and before.priests == 2
        assert before.power == (1, 7, 0)
        assert after.priests == 0 and after.power == (4, 1, 0)
        assert after.coins == before.coins - 6
        assert after.vp == before.vp + 5  # stronghold scoring round

    def test_bridges(self, history):
        # [DERIVED] both bridge specials cost 2 workers and connect own
        # structures across water; the final pass pays 3vp per bridge.
        assert history[33].bridges == (((0, (2, 4), (2, 6))),)
        assert history[40].bridges == \
            ((0, (2, 4), (2, 6)), (0, (2, 4), (3, 5)))
        assert history[40].players[0].bridges_built == 2
        assert history[42].players[0].vp == \
            history[41].players[0].vp + 6

    def test_favor_tiles(self, history):
        # [DERIVED] temples/sanctuary grant favors in the fixed priority
        # order 10, 9, 6 with their cult steps applied.
        p1 = history[-1].players[1]
        assert p1.favors == frozenset({10, 9, 6})
        final = history[-1]
        for f in (10, 9, 6):
            assert final.favor_supply[f] == 2

    def test_final_panels(self, history):
        # [DERIVED] complete hand-computed final resource panels.
        p0, p1 = history[-1].players
        assert (p0.workers, p0.coins, p0.priests) == (0, 18, 0)
        assert p0.power == (0, 5, 0)
        assert p0.buildings == (2, 2, 0, 0, 1)
        assert (p1.workers, p1.coins, p1.priests) == (7, 7, 0)
        assert p1.power == (0, 2, 7)
        assert p1.cults == (3, 4, 9, 4)
        assert p1.buildings == (3, 0, 1, 1, 0)
