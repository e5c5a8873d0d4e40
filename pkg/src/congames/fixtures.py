"""Small named games and strategies used by the tests, the CLI fixtures and the docs."""

from __future__ import annotations

from fractions import Fraction

from .es_core import build
from .games import Game, dual, make_game
from .prob import STRATEGY, product_fill
from .strategy import Strategy, make_strategy

HALF = Fraction(1, 2)


def g_seq() -> Game:
    """A Player move after an Opponent move."""
    return make_game({"o": "-", "p": "+"}, [("o", "p")], name="G_seq")


def g_conc() -> Game:
    """An Opponent move concurrent with a Player move."""
    return make_game({"o": "-", "p": "+"}, name="G_conc")


def g_race() -> Game:
    return make_game({"o": "-", "p": "+"}, conflicts=[["o", "p"]], name="G_race")


def g_watch() -> Game:
    return make_game({"a": "-", "b": "-", "w": "+"}, name="G_watch")


WATCH_WINNING = [frozenset(), frozenset("aw"), frozenset("bw"), frozenset("abw")]


def g_choice() -> Game:
    """Opponent opens; Player then picks one of two conflicting answers."""
    return make_game(
        {"o": "-", "p": "+", "q": "+"},
        [("o", "p"), ("o", "q")],
        [["p", "q"]],
        name="G_choice",
    )


def g_chain() -> Game:
    """Alternating chain o- < p+ < r-."""
    return make_game({"o": "-", "p": "+", "r": "-"}, [("o", "p"), ("p", "r")], name="G_chain")


def g_player() -> Game:
    return make_game({"q": "+"}, name="G_player")


def s_i() -> Strategy:
    """Over ``G_conc``: Player waits for Opponent."""
    return make_strategy(g_conc(), build(["o", "p"], [("o", "p")]), {"o": "o", "p": "p"}, name="S_i")


def s_ii() -> Strategy:
    """Over ``G_conc``: Opponent is made to wait for Player."""
    return make_strategy(g_conc(), build(["o", "p"], [("p", "o")]), {"o": "o", "p": "p"}, name="S_ii")


def s_watch(with_valuation: bool = True) -> Strategy:
    es = build(["a", "b", "w1", "w2"], [("a", "w1"), ("b", "w2")], [["w1", "w2"]])
    s = make_strategy(g_watch(), es, {"a": "a", "b": "b", "w1": "w", "w2": "w"}, name="S_watch")
    if with_valuation:
        s.valuation = v_watch(s)
    return s


def v_watch(s: Strategy):
    return product_fill(s.es, {"w1": HALF, "w2": HALF}, STRATEGY, s.inner.polarity)


def watch_counter(weights: dict[str, Fraction], name: str) -> Strategy:
    """Counter-strategy in the dual of ``G_watch`` playing the weighted Player moves.

    Moves with weight zero are left out; the Opponent move ``w`` is always accepted.
    """
    played = [m for m in ("a", "b") if weights.get(m, 0) != 0]
    conflicts = [played] if len(played) == 2 else []
    es = build(played + ["w"], conflicts=conflicts)
    t = make_strategy(dual(g_watch()), es, {e: e for e in es.events}, name=name)
    t.valuation = product_fill(es, {m: weights[m] for m in played}, STRATEGY, t.inner.polarity)
    return t


def tau_half() -> Strategy:
    return watch_counter({"a": HALF, "b": HALF}, "tau_half")


def tau_a() -> Strategy:
    return watch_counter({"a": Fraction(1)}, "tau_a")


def tau_b() -> Strategy:
    return watch_counter({"b": Fraction(1)}, "tau_b")


def watch_payoff() -> dict[frozenset, Fraction]:
    g = g_watch()
    return {
        x: (Fraction(1) if x in WATCH_WINNING else Fraction(-1)) for x in g.configurations()
    }


# -- identity-law suite -------------------------------------------------------------


def s_choice_p() -> Strategy:
    """Over ``G_choice``: always answer ``p``."""
    es = build(["o", "p"], [("o", "p")])
    return make_strategy(g_choice(), es, {"o": "o", "p": "p"}, name="S_choice_p")


def s_choice_any() -> Strategy:
    """Over ``G_choice``: answer ``p`` or ``q``, nondeterministically."""
    g = g_choice()
    return make_strategy(g, g.es, {e: e for e in g.events}, name="S_choice_any")


def s_chain() -> Strategy:
    g = g_chain()
    return make_strategy(g, g.es, {e: e for e in g.events}, name="S_chain")


def s_chain_stop() -> Strategy:
    """Over ``G_chain``: accept ``o`` and never answer."""
    return make_strategy(g_chain(), build(["o"]), {"o": "o"}, name="S_chain_stop")


def s_seq() -> Strategy:
    g = g_seq()
    return make_strategy(g, g.es, {e: e for e in g.events}, name="S_seq")


def s_conc_eager() -> Strategy:
    """Over ``G_conc``: play ``p`` without waiting."""
    g = g_conc()
    return make_strategy(g, g.es, {e: e for e in g.events}, name="S_conc_eager")


def s_player() -> Strategy:
    g = g_player()
    return make_strategy(g, g.es, {"q": "q"}, name="S_player")


def s_watch_min() -> Strategy:
    """Over ``G_watch``: accept both Opponent moves and never answer."""
    return make_strategy(g_watch(), build(["a", "b"]), {"a": "a", "b": "b"}, name="S_watch_min")


def identity_suite() -> list[Strategy]:
    """Receptive innocent strategies over race-free games."""
    return [
        s_i(),
        s_conc_eager(),
        s_seq(),
        s_watch(with_valuation=False),
        s_watch_min(),
        s_choice_p(),
        s_choice_any(),
        s_chain(),
        s_chain_stop(),
        s_player(),
    ]


def race_free_games() -> list[Game]:
    return [g_seq(), g_conc(), g_watch(), g_choice(), g_chain(), g_player()]


# -- symmetry examples ----------------------------------------------------------------


def g_one() -> Game:
    return make_game({"p": "+"}, name="G_one")


def s_twin() -> Strategy:
    """Two conflicting copies of the one Player move."""
    return make_strategy(g_one(), build(["e1", "e2"], conflicts=[["e1", "e2"]]), {"e1": "p", "e2": "p"}, name="S_twin")


def s_single() -> Strategy:
    return make_strategy(g_one(), build(["e"]), {"e": "p"}, name="S_single")


TWIN_SWAP = [[["e1", "e2"]], [["e2", "e1"]]]


def g_two() -> Game:
    """Two conflicting Player moves, interchangeable under symmetry."""
    return make_game({"p1": "+", "p2": "+"}, conflicts=[["p1", "p2"]], name="G_two")


def s_left() -> Strategy:
    return make_strategy(g_two(), build(["t"]), {"t": "p1"}, name="S_left")


def s_right() -> Strategy:
    return make_strategy(g_two(), build(["u"]), {"u": "p2"}, name="S_right")


TWO_SWAP = [[["p1", "p2"]], [["p2", "p1"]]]
