"""Event structures with polarity: dual, parallel composition, sum, race-freeness,
the Scott order, and level checks for games of imperfect information.

Identifier scheme: :func:`dual` keeps identifiers (so it is an exact
involution), :func:`par` prefixes ``L:``/``R:``, :func:`gsum` prefixes the
1-based component index, and :func:`port_game` prefixes port names.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Iterable, Mapping

from .errors import InputError
from .es_core import (
    EventStructure,
    Violation,
    configurations,
    extensions,
    fmt,
    juxtapose,
    tag,
    validate_es,
)

if TYPE_CHECKING:
    from .strategy import Strategy

PLUS, MINUS = "+", "-"


def flip(p: str) -> str:
    return MINUS if p == PLUS else PLUS


@dataclass(eq=False)
class Game:
    """An event structure with a polarity on every event.

    ``level`` is the optional imperfect-information decoration; winning
    sets and payoffs live in :mod:`congames.outcomes`.
    """

    es: EventStructure
    polarity: Mapping[str, str]
    level: Mapping[str, str] | None = None
    name: str = ""

    @property
    def events(self) -> tuple[str, ...]:
        return self.es.events

    def pos(self, events: Iterable[str]) -> frozenset[str]:
        return frozenset(e for e in events if self.polarity[e] == PLUS)

    def neg(self, events: Iterable[str]) -> frozenset[str]:
        return frozenset(e for e in events if self.polarity[e] == MINUS)

    def configurations(self, **kw) -> list[frozenset]:
        return configurations(self.es, **kw)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Game):
            return NotImplemented
        return (
            self.es == other.es
            and dict(self.polarity) == dict(other.polarity)
            and (dict(self.level) if self.level else None)
            == (dict(other.level) if other.level else None)
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        pol = ", ".join(f"{e}{self.polarity[e]}" for e in self.events)
        return f"Game({self.name or '?'}: {pol}; order={sorted(self.es.order_pairs)})"

    @cached_property
    def _scott_cache(self) -> dict:
        return {}


def validate_game(a: Game) -> list[Violation]:
    out = validate_es(a.es)
    for e in a.events:
        if a.polarity.get(e) not in (PLUS, MINUS):
            out.append(Violation("polarity", {"event": e, "polarity": a.polarity.get(e)}))
    if a.level is not None:
        for e in a.events:
            if e not in a.level:
                out.append(Violation("level not total", {"event": e}))
    return out


def empty_game() -> Game:
    return Game(EventStructure(), {}, name="empty")


def make_game(
    polarity: Mapping[str, str],
    order: Iterable[tuple[str, str]] = (),
    conflicts: Iterable[Iterable[str]] = (),
    name: str = "",
    level: Mapping[str, str] | None = None,
) -> Game:
    from .es_core import build

    return Game(build(polarity, order, conflicts), dict(polarity), level, name)


def dual(a: Game) -> Game:
    """Same structure with every polarity reversed (identifiers kept)."""
    return Game(
        a.es,
        {e: flip(p) for e, p in a.polarity.items()},
        a.level,
        f"{a.name}^" if a.name else "",
    )


def _tagged(parts: list[tuple[str, Game]], exclusive: bool, name: str) -> Game:
    es = juxtapose([(t, g.es) for t, g in parts], exclusive=exclusive)
    pol = {tag(t, e): p for t, g in parts for e, p in g.polarity.items()}
    level = None
    if parts and all(g.level is not None for _, g in parts):
        level = {tag(t, e): lv for t, g in parts for e, lv in g.level.items()}
    return Game(es, pol, level, name)


def par(a: Game, b: Game) -> Game:
    """Parallel composition: juxtaposition with ``L:``/``R:`` tags."""
    return _tagged([("L", a), ("R", b)], False, f"({a.name}||{b.name})")


def gsum(games: list[Game]) -> Game:
    """Sum: disjoint union in which moves of different components conflict."""
    return _tagged(
        [(str(i + 1), g) for i, g in enumerate(games)],
        True,
        "Sum[" + ",".join(g.name for g in games) + "]",
    )


def split(a: Game, prefix: str, x: Iterable[str]) -> frozenset[str]:
    """Restriction of a configuration to one tagged side, with the tag removed."""
    pre = prefix + ":"
    return frozenset(e[len(pre):] for e in x if e.startswith(pre))


# -- ports -------------------------------------------------------------------


IN, OUT = "in", "out"


@dataclass(frozen=True, eq=False)
class Port:
    """A named wire of a strategy; inputs contribute the dual of their game."""

    name: str
    game: Game
    direction: str = OUT

    @property
    def seen(self) -> Game:
        return dual(self.game) if self.direction == IN else self.game

    def flipped(self) -> "Port":
        return Port(self.name, dual(self.game), OUT if self.direction == IN else IN)

    def renamed(self, name: str) -> "Port":
        return Port(name, self.game, self.direction)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Port):
            return NotImplemented
        return (self.name, self.direction) == (other.name, other.direction) and self.game == other.game

    __hash__ = None  # type: ignore[assignment]


def port_game(ports: Iterable[Port]) -> Game:
    ports = list(ports)
    names = [p.name for p in ports]
    if len(set(names)) != len(names):
        raise InputError(f"duplicate port names {names}")
    return _tagged([(p.name, p.seen) for p in ports], False, "")


# -- race-freeness and the Scott order ------------------------------------------


def is_race_free(a: Game) -> tuple[bool, tuple | None]:
    """Whether co-enabled moves of opposite polarity can always occur together."""
    for x in configurations(a.es):
        ext = sorted(extensions(a.es, x))
        for i, e in enumerate(ext):
            for f in ext[i + 1:]:
                if a.polarity[e] != a.polarity[f] and not a.es.is_configuration(x | {e, f}):
                    return False, (x, e, f)
    return True, None


def scott_leq(a: Game, x: Iterable[str], y: Iterable[str]) -> bool:
    """``x`` loses only Opponent moves and then gains only Player moves to reach ``y``.

    The intermediate configuration is forced to be ``x & y``: it must sit
    inside both, keep every Player move of ``x`` and every Opponent move of ``y``.
    """
    x, y = frozenset(x), frozenset(y)
    key = (x, y)
    cache = a._scott_cache
    if key in cache:
        return cache[key]
    z = x & y
    ok = (
        all(a.polarity[e] == MINUS for e in x - z)
        and all(a.polarity[e] == PLUS for e in y - z)
        and a.es.is_configuration(z)
    )
    cache[key] = ok
    return ok


# -- levels ------------------------------------------------------------------------


@dataclass
class LevelOrder:
    levels: frozenset[str]
    leq: frozenset[tuple[str, str]] = field(default_factory=frozenset)

    def le(self, a: str, b: str) -> bool:
        return a == b or (a, b) in self.leq


def validate_level_order(order: LevelOrder) -> list[Violation]:
    out = []
    for a, b in sorted(order.leq):
        if a not in order.levels or b not in order.levels:
            out.append(Violation("unknown level", {"pair": [a, b]}))
    for a, b in sorted(order.leq):
        for c, d in sorted(order.leq):
            if b == c and not order.le(a, d):
                out.append(Violation("level order transitive", {"pairs": [[a, b], [c, d]]}))
    return out


def check_levels(order: LevelOrder, a: Game, s: "Strategy | None" = None) -> list[Violation]:
    """Causality may only ascend levels, in the game and (if given) the strategy."""
    if a.level is None or any(e not in a.level for e in a.events):
        raise InputError("level mapping is not total on the game")
    out = validate_level_order(order)
    lv = a.level
    for e, f in sorted(a.es.order_pairs):
        if not order.le(lv[e], lv[f]):
            out.append(
                Violation("game level", {"pair": [e, f], "levels": [lv[e], lv[f]]})
            )
    if s is not None:
        sig = s.sigma
        for e, f in sorted(s.inner.es.order_pairs):
            le, lf = lv[sig[e]], lv[sig[f]]
            if not order.le(le, lf):
                out.append(
                    Violation("strategy level", {"pair": [e, f], "levels": [le, lf]})
                )
    return out


def race_witness_json(w: tuple | None) -> dict | None:
    if w is None:
        return None
    x, e, f = w
    return {"configuration": fmt(x), "events": [e, f]}
