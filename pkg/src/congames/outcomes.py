"""Winning conditions, payoff, expected payoff and values over candidate sets."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Iterable, Sequence

from .errors import InputError
from .es_core import configurations, extensions, fmt, pullback
from .games import PLUS, Game, dual, par, split
from . import prob
from .prob import STRATEGY, constant_valuation, is_exact, outcome_distribution, product_valuation
from .strategy import Strategy


@dataclass
class WinningSpec:
    game: Game
    winning: frozenset[frozenset]

    def __post_init__(self):
        self.winning = frozenset(frozenset(x) for x in self.winning)


@dataclass
class PayoffSpec:
    game: Game
    table: dict[frozenset, Number]

    def __call__(self, x: Iterable[str]) -> Number:
        x = frozenset(x)
        try:
            return self.table[x]
        except KeyError:
            raise InputError(f"payoff undefined on {fmt(x)}") from None


def validate_winning(w: WinningSpec) -> list[str]:
    return [f"{fmt(x)} is not a configuration" for x in w.winning if not w.game.es.is_configuration(x)]


def validate_payoff(p: PayoffSpec) -> list[str]:
    return [f"no payoff for {fmt(x)}" for x in configurations(p.game.es) if x not in p.table]


def plus_maximal(s: Strategy) -> list[frozenset]:
    """Configurations of ``s`` admitting no further Player move."""
    pol = s.inner.polarity
    return [
        x
        for x in configurations(s.es)
        if not any(pol[e] == PLUS for e in extensions(s.es, x))
    ]


def check_winning(s: Strategy, w: WinningSpec) -> tuple[bool, list[str] | None]:
    """Every +-maximal play of ``s`` lands in ``W``; else the first losing play."""
    for x in plus_maximal(s):
        if s.image(x) not in w.winning:
            return False, fmt(x)
    return True, None


def combine_winning(mode: str, specs: Sequence[WinningSpec]) -> WinningSpec:
    """``dual``: complement on the dual game; ``par``: win in either component."""
    if mode == "dual":
        (w,) = specs
        return WinningSpec(
            dual(w.game), frozenset(x for x in configurations(w.game.es) if x not in w.winning)
        )
    if mode == "par":
        w1, w2 = specs
        g = par(w1.game, w2.game)
        win = [
            x
            for x in configurations(g.es)
            if split(g, "L", x) in w1.winning or split(g, "R", x) in w2.winning
        ]
        return WinningSpec(g, frozenset(win))
    raise InputError(f"unknown mode {mode!r}")


def combine_payoff(mode: str, specs: Sequence[PayoffSpec]) -> PayoffSpec:
    """``dual``: negate; ``par``: sum of the component payoffs."""
    if mode == "dual":
        (p,) = specs
        return PayoffSpec(dual(p.game), {x: -v for x, v in p.table.items()})
    if mode == "par":
        p1, p2 = specs
        g = par(p1.game, p2.game)
        return PayoffSpec(
            g,
            {x: p1(split(g, "L", x)) + p2(split(g, "R", x)) for x in configurations(g.es)},
        )
    raise InputError(f"unknown mode {mode!r}")


def _check_opposed(sigma: Strategy, tau: Strategy) -> None:
    a, b = sigma.target, tau.target
    if a.es != b.es or any(a.polarity[e] == b.polarity[e] for e in a.events):
        raise InputError("counter-strategy must be over the dual of the strategy's game")


def interaction(sigma: Strategy, tau: Strategy):
    """Pullback of a strategy against a counter-strategy, and its map into the game."""
    _check_opposed(sigma, tau)
    pb = pullback(sigma.map, tau.map)
    f = {e: sigma.sigma[pb.pi1.mapping[e]] for e in pb.es.events}
    return pb, f


def _valuation(s: Strategy):
    """The attached valuation, or constant 1 (valid exactly for deterministic play)."""
    if s.valuation is not None:
        return s.valuation
    return constant_valuation(s.es, Fraction(1), STRATEGY, s.inner.polarity)


@dataclass
class PlayOutcome:
    expected: Number
    win_prob: Number | None
    distribution: dict[frozenset, Number]
    results: dict[frozenset, frozenset]


def play(
    sigma: Strategy, tau: Strategy, x: PayoffSpec, winning: WinningSpec | None = None
) -> PlayOutcome:
    """Distribution over final plays, expected payoff and (optionally) win probability."""
    pb, f = interaction(sigma, tau)
    v = product_valuation(pb, _valuation(sigma), _valuation(tau))
    dist = outcome_distribution(v)
    results = {z: frozenset(f[e] for e in z) for z in dist}
    expected = sum((p * x(results[z]) for z, p in dist.items()), Fraction(0))
    win = None
    if winning is not None:
        win = sum((p for z, p in dist.items() if results[z] in winning.winning), Fraction(0))
    return PlayOutcome(expected, win, dist, results)


def expected_payoff(sigma: Strategy, tau: Strategy, x: PayoffSpec) -> Number:
    """Expected payoff to Player of probabilistic ``sigma`` against ``tau``."""
    return play(sigma, tau, x).expected


def play_values(sigma: Strategy, tau: Strategy, x: PayoffSpec) -> tuple[Number, Number]:
    """(optimistic, pessimistic): max and min payoff over maximal plays."""
    pb, f = interaction(sigma, tau)
    vals = []
    for z in configurations(pb.es):
        if not extensions(pb.es, z):
            vals.append(x(frozenset(f[e] for e in z)))
    return max(vals), min(vals)


def value_over_sets(
    sigmas: Sequence[Strategy],
    taus: Sequence[Strategy],
    x: PayoffSpec,
    mode: str = "expected",
) -> dict:
    """Sup-inf and inf-sup of the chosen payoff over finite candidate lists.

    Ties for the maximising strategy go to the earliest candidate.
    """
    if not sigmas or not taus:
        raise InputError("candidate lists must be non-empty")

    def value(s: Strategy, t: Strategy) -> Number:
        if mode == "expected":
            return expected_payoff(s, t, x)
        opt, pess = play_values(s, t, x)
        if mode == "optimistic":
            return opt
        if mode == "pessimistic":
            return pess
        raise InputError(f"unknown mode {mode!r}")

    matrix = [[value(s, t) for t in taus] for s in sigmas]
    row_min = [min(r) for r in matrix]
    col_max = [max(matrix[i][j] for i in range(len(sigmas))) for j in range(len(taus))]
    supinf, infsup = max(row_min), min(col_max)
    exact = is_exact(v for r in matrix for v in r)
    determined = supinf == infsup if exact else abs(supinf - infsup) <= prob.FLOAT_TOL
    argmax = row_min.index(supinf)
    return {
        "matrix": matrix,
        "supinf": supinf,
        "infsup": infsup,
        "determined_over_sets": determined,
        "argmax": argmax,
    }
