from __future__ import annotations

import itertools

import pytest

from congames import fixtures as fx
from congames.errors import InputError
from congames.es_core import configurations
from congames.games import (
    LevelOrder,
    Game,
    check_levels,
    dual,
    empty_game,
    gsum,
    is_race_free,
    par,
    scott_leq,
    split,
    validate_game,
)

from .oracles import brute_scott_leq

FIXTURE_GAMES = [fx.g_seq(), fx.g_conc(), fx.g_race(), fx.g_watch(), fx.g_choice(), fx.g_chain(), fx.g_player(), fx.g_two()]


def game_iso(a: Game, b: Game) -> bool:
    """Polarity-respecting isomorphism by search over bijections."""
    if len(a.events) != len(b.events):
        return False
    ca, cb = set(configurations(a.es)), set(configurations(b.es))
    for perm in itertools.permutations(b.events):
        m = dict(zip(a.events, perm))
        if all(a.polarity[e] == b.polarity[m[e]] for e in a.events):
            if {frozenset(m[e] for e in x) for x in ca} == cb:
                return True
    return False


def test_fixture_games_valid():
    for g in FIXTURE_GAMES:
        assert validate_game(g) == []


def test_polarity_violation():
    g = Game(fx.g_seq().es, {"o": "-", "p": "?"})
    assert [v.rule for v in validate_game(g)] == ["polarity"]


def test_dual_seq():
    d = dual(fx.g_seq())
    assert d.polarity == {"o": "+", "p": "-"}
    assert d.es == fx.g_seq().es


def test_dual_involution():
    for g in FIXTURE_GAMES:
        assert dual(dual(g)) == g


def test_dual_empty():
    assert dual(empty_game()).events == ()


def test_par_seq_seq():
    g = par(fx.g_seq(), fx.g_seq())
    assert len(g.events) == 4
    assert sorted(g.es.order_pairs) == [("L:o", "L:p"), ("R:o", "R:p")]


def test_par_race_race_counts():
    assert len(configurations(par(fx.g_race(), fx.g_race()).es)) == 9


def test_par_with_empty():
    for g in FIXTURE_GAMES:
        assert game_iso(par(g, empty_game()), g)


def test_par_commutative_and_associative():
    a, b, c = fx.g_seq(), fx.g_race(), fx.g_player()
    assert game_iso(par(a, b), par(b, a))
    assert game_iso(par(par(a, b), c), par(a, par(b, c)))


def test_par_configurations_split():
    a, b = fx.g_choice(), fx.g_race()
    g = par(a, b)
    for x in configurations(g.es):
        assert a.es.is_configuration(split(g, "L", x))
        assert b.es.is_configuration(split(g, "R", x))


def test_sum_seq_seq():
    g = gsum([fx.g_seq(), fx.g_seq()])
    cs = set(configurations(g.es))
    assert cs == {
        frozenset(),
        frozenset({"1:o"}),
        frozenset({"1:o", "1:p"}),
        frozenset({"2:o"}),
        frozenset({"2:o", "2:p"}),
    }


def test_sum_unary_and_empty():
    for g in FIXTURE_GAMES:
        assert game_iso(gsum([g]), g)
    assert gsum([]).events == ()


def test_race_free_examples():
    assert is_race_free(fx.g_race()) == (False, (frozenset(), "o", "p"))
    assert is_race_free(fx.g_watch())[0]
    assert is_race_free(fx.g_seq())[0]
    for g in fx.race_free_games():
        assert is_race_free(g)[0]


def test_scott_examples():
    g = fx.g_conc()
    o, p, e = frozenset("o"), frozenset("p"), frozenset()
    assert scott_leq(g, o, e)
    assert scott_leq(g, e, p)
    assert scott_leq(g, o, p)
    assert not scott_leq(g, e, o)


@pytest.mark.parametrize("g", FIXTURE_GAMES, ids=lambda g: g.name)
def test_scott_is_partial_order_and_matches_oracle(g):
    cs = configurations(g.es)
    for x in cs:
        assert scott_leq(g, x, x)
    for x, y in itertools.product(cs, repeat=2):
        assert scott_leq(g, x, y) == brute_scott_leq(g, x, y)
        if x != y and scott_leq(g, x, y):
            assert not scott_leq(g, y, x)
    for x, y, z in itertools.product(cs, repeat=3):
        if scott_leq(g, x, y) and scott_leq(g, y, z):
            assert scott_leq(g, x, z)


# -- levels -------------------------------------------------------------------------


def with_levels(g: Game, level: dict) -> Game:
    return Game(g.es, g.polarity, level, g.name)


def test_levels_one_point():
    g = with_levels(fx.g_seq(), {"o": "l", "p": "l"})
    assert check_levels(LevelOrder(frozenset({"l"})), g) == []


def test_levels_game_violation():
    g = with_levels(fx.g_seq(), {"o": "l2", "p": "l1"})
    order = LevelOrder(frozenset({"l1", "l2"}), frozenset({("l1", "l2")}))
    out = check_levels(order, g)
    assert [(v.rule, v.witness["pair"]) for v in out] == [("game level", ["o", "p"])]


def test_levels_strategy_clause():
    s = fx.s_i()
    up = with_levels(fx.g_conc(), {"o": "l1", "p": "l2"})
    order = LevelOrder(frozenset({"l1", "l2"}), frozenset({("l1", "l2")}))
    assert check_levels(order, up, s) == []
    inc = LevelOrder(frozenset({"l1", "l2"}))
    out = check_levels(inc, up, s)
    assert [(v.rule, v.witness["pair"]) for v in out] == [("strategy level", ["o", "p"])]


def test_levels_not_total():
    g = with_levels(fx.g_seq(), {"o": "l"})
    with pytest.raises(InputError):
        check_levels(LevelOrder(frozenset({"l"})), g)


def test_level_order_transitivity_reported():
    order = LevelOrder(frozenset("abc"), frozenset({("a", "b"), ("b", "c")}))
    g = with_levels(fx.g_player(), {"q": "a"})
    rules = [v.rule for v in check_levels(order, g)]
    assert "level order transitive" in rules
