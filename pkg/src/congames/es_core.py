"""Finite event structures, configurations, maps, factorisation and pullback.

An event structure here is a finite set of opaque string events with a causal
dependency relation (given by causes per event, closed transitively) and a
consistency predicate given by *minimal forbidden sets*: a finite set ``X`` is
consistent exactly when the down-closure of ``X`` includes no forbidden set.
Testing on down-closures makes "consistent sets stay consistent when their
causes are added" true by construction.

Configurations are ``frozenset`` objects of event identifiers.  Every list of
configurations produced here is ordered by size and then lexicographically on
the sorted identifiers, so output is reproducible.
"""

from __future__ import annotations

import itertools
import json
import os
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping

from .errors import InputError, ResourceLimitError

Configuration = frozenset

DEFAULT_MAX_CONFIGS = 10**6
_max_configs_override: int | None = None


def max_configs() -> int:
    """Current enumeration ceiling (``CONGAMES_MAX_CONFIGS`` overrides the default)."""
    if _max_configs_override is not None:
        return _max_configs_override
    env = os.environ.get("CONGAMES_MAX_CONFIGS")
    if env:
        return int(env)
    return DEFAULT_MAX_CONFIGS


def set_max_configs(limit: int | None) -> None:
    global _max_configs_override
    _max_configs_override = limit


def config_key(x: Iterable[str]) -> tuple:
    s = sorted(x)
    return (len(s), s)


def sort_configs(configs: Iterable[frozenset]) -> list[frozenset]:
    return sorted(configs, key=config_key)


def fmt(x: Iterable[str]) -> list[str]:
    """Sorted list form of a set of events, for reports."""
    return sorted(x)


def tag(prefix: str, event: str) -> str:
    return f"{prefix}:{event}"


def untag(event: str) -> tuple[str, str]:
    prefix, _, rest = event.partition(":")
    return prefix, rest


@dataclass(frozen=True)
class Violation:
    """One failed check: the rule broken and the evidence for it."""

    rule: str
    witness: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"rule": self.rule, "witness": self.witness}


class EventStructure:
    """Events, causal dependency and consistency (via minimal forbidden sets).

    ``causes`` maps an event to events it depends on; they need not be
    immediate, the order is the reflexive-transitive closure.  Construction
    never fails on axiom violations so that :func:`validate_es` can report
    them; only the identifiers themselves are normalised.
    """

    def __init__(
        self,
        events: Iterable[str] = (),
        causes: Mapping[str, Iterable[str]] | None = None,
        forbidden: Iterable[Iterable[str]] = (),
    ):
        self.events: tuple[str, ...] = tuple(sorted(set(events)))
        causes = causes or {}
        self.causes: dict[str, frozenset[str]] = {
            e: frozenset(causes.get(e, ())) for e in self.events
        }
        self.stray_causes = {
            e: frozenset(c) for e, c in causes.items() if e not in self.causes
        }
        fs = {frozenset(f) for f in forbidden}
        self.forbidden: frozenset[frozenset[str]] = frozenset(
            f for f in fs if not any(g < f for g in fs)
        )

    # -- order -------------------------------------------------------------

    @cached_property
    def down(self) -> dict[str, frozenset[str]]:
        """Reflexive down-closure of every event."""
        out = {}
        for e in self.events:
            seen = {e}
            stack = [e]
            while stack:
                for c in self.causes.get(stack.pop(), ()):
                    if c not in seen and c in self.causes:
                        seen.add(c)
                        stack.append(c)
            out[e] = frozenset(seen)
        return out

    @cached_property
    def up(self) -> dict[str, frozenset[str]]:
        ups: dict[str, set] = {e: set() for e in self.events}
        for e, below in self.down.items():
            for d in below:
                ups[d].add(e)
        return {e: frozenset(s) for e, s in ups.items()}

    def leq(self, a: str, b: str) -> bool:
        return a in self.down[b]

    def lt(self, a: str, b: str) -> bool:
        return a != b and a in self.down[b]

    def concurrent(self, a: str, b: str) -> bool:
        return (
            a != b
            and not self.leq(a, b)
            and not self.leq(b, a)
            and self.is_consistent({a, b})
        )

    @cached_property
    def order_pairs(self) -> frozenset[tuple[str, str]]:
        return frozenset((d, e) for e in self.events for d in self.down[e] if d != e)

    @cached_property
    def immediate(self) -> dict[str, frozenset[str]]:
        """Immediate causes (maximal strict causes) of every event."""
        out = {}
        for e in self.events:
            strict = self.down[e] - {e}
            out[e] = frozenset(
                d for d in strict if not any(d in self.down[c] and c != d for c in strict)
            )
        return out

    def down_closure(self, xs: Iterable[str]) -> frozenset[str]:
        out: set[str] = set()
        for e in xs:
            out |= self.down[e]
        return frozenset(out)

    # -- consistency -------------------------------------------------------

    @cached_property
    def _forbidden_by_event(self) -> dict[str, list[frozenset]]:
        idx: dict[str, list[frozenset]] = defaultdict(list)
        for f in self.forbidden:
            for e in f:
                idx[e].append(f)
        return idx

    def is_consistent(self, xs: Iterable[str]) -> bool:
        d = self.down_closure(xs)
        return not any(f <= d for f in self.forbidden)

    def is_configuration(self, xs: Iterable[str]) -> bool:
        x = frozenset(xs)
        if not x <= set(self.events):
            return False
        if any(not self.down[e] <= x for e in x):
            return False
        return not any(f <= x for f in self.forbidden)

    def can_extend(self, x: frozenset, e: str) -> bool:
        """Whether ``x | {e}`` is a configuration, for a configuration ``x``."""
        if e in x or not self.down[e] - {e} <= x:
            return False
        y = x | {e}
        return not any(f <= y for f in self._forbidden_by_event.get(e, ()))

    # -- misc --------------------------------------------------------------

    def restrict(self, keep: Iterable[str]) -> "EventStructure":
        """Substructure on a down-closed set of events."""
        keep = frozenset(keep)
        return EventStructure(
            keep,
            {e: self.causes[e] & keep for e in keep},
            [f for f in self.forbidden if f <= keep],
        )

    def rename(self, fn: Callable[[str], str]) -> "EventStructure":
        return EventStructure(
            [fn(e) for e in self.events],
            {fn(e): [fn(c) for c in cs] for e, cs in self.causes.items()},
            [[fn(e) for e in f] for f in self.forbidden],
        )

    @cached_property
    def _config_cache(self) -> dict:
        return {}

    def __len__(self) -> int:
        return len(self.events)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EventStructure):
            return NotImplemented
        if self.events != other.events or self.order_pairs != other.order_pairs:
            return False
        if self.forbidden == other.forbidden:
            return True
        return set(configurations(self)) == set(configurations(other))

    def __hash__(self) -> int:
        return hash((self.events, self.order_pairs))

    def __repr__(self) -> str:
        return (
            f"EventStructure(events={list(self.events)}, "
            f"order={sorted(self.order_pairs)}, forbidden={[fmt(f) for f in sorted(self.forbidden, key=config_key)]})"
        )


# -- validation and enumeration ---------------------------------------------


def validate_es(e: EventStructure) -> list[Violation]:
    """Report every axiom the structure breaks; an empty list means valid."""
    out = []
    events = set(e.events)
    for ev, cs in sorted(e.stray_causes.items()):
        out.append(Violation("unknown event", {"event": ev, "in": "causes"}))
    for ev in e.events:
        for c in sorted(e.causes[ev] - events):
            out.append(Violation("unknown event", {"event": c, "in": f"causes of {ev}"}))
    for ev in e.events:
        if ev in e.causes[ev]:
            out.append(Violation("causality acyclic", {"cycle": [ev, ev]}))
    reported = set()
    for a in e.events:
        for b in e.events:
            if a < b and a in e.down[b] and b in e.down[a]:
                key = frozenset(e.down[a] & e.up[a])
                if key not in reported:
                    reported.add(key)
                    out.append(Violation("causality acyclic", {"cycle": sorted(key)}))
    for f in sorted(e.forbidden, key=config_key):
        if len(f) == 0:
            out.append(Violation("empty forbidden", {"set": []}))
        elif len(f) == 1:
            out.append(Violation("singleton forbidden", {"set": fmt(f)}))
        if not f <= events:
            out.append(Violation("unknown event", {"set": fmt(f), "in": "forbidden"}))
    if not any(v.rule in ("causality acyclic", "empty forbidden") for v in out):
        for ev in e.events:
            below = e.down[ev]
            bad = [f for f in e.forbidden if f <= below and len(f) > 1]
            if bad:
                out.append(
                    Violation(
                        "event inconsistent with its causes",
                        {"event": ev, "forbidden": fmt(min(bad, key=config_key))},
                    )
                )
    return out


def configurations(
    e: EventStructure, max_events: int | None = None, limit: int | None = None
) -> list[frozenset]:
    """All configurations (with at most ``max_events`` events), deterministically ordered."""
    limit = max_configs() if limit is None else limit
    cached = e._config_cache.get("all")
    if cached is not None:
        if len(cached) > limit and max_events is None:
            raise ResourceLimitError("configurations", limit)
        if max_events is None:
            return list(cached)
        return [x for x in cached if len(x) <= max_events]

    out: list[frozenset] = [frozenset()]
    layer = [frozenset()]
    complete = True
    while layer:
        if max_events is not None and len(layer[0]) >= max_events:
            complete = False
            break
        nxt = set()
        for x in layer:
            for ev in e.events:
                if e.can_extend(x, ev):
                    nxt.add(x | {ev})
        layer = sort_configs(nxt)
        out.extend(layer)
        if len(out) > limit:
            raise ResourceLimitError("configurations", limit)
    if complete:
        e._config_cache["all"] = tuple(out)
    return out


def extensions(e: EventStructure, x: Iterable[str]) -> frozenset[str]:
    """Events ``f`` outside ``x`` for which ``x | {f}`` is a configuration."""
    x = frozenset(x)
    if not e.is_configuration(x):
        raise InputError(f"{fmt(x)} is not a configuration")
    return frozenset(ev for ev in e.events if e.can_extend(x, ev))


def maximal_configurations(e: EventStructure) -> list[frozenset]:
    return [x for x in configurations(e) if not extensions(e, x)]


# -- maps --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EsMap:
    """Partial function between the events of two structures."""

    source: EventStructure
    target: EventStructure
    mapping: Mapping[str, str]

    @property
    def total(self) -> bool:
        return all(ev in self.mapping for ev in self.source.events)

    def __call__(self, event: str) -> str:
        return self.mapping[event]

    def image(self, xs: Iterable[str]) -> frozenset[str]:
        return frozenset(self.mapping[ev] for ev in xs if ev in self.mapping)

    def defined(self) -> frozenset[str]:
        return frozenset(ev for ev in self.source.events if ev in self.mapping)

    def then(self, other: "EsMap") -> "EsMap":
        """Composite ``other . self``."""
        m = {
            a: other.mapping[b]
            for a, b in self.mapping.items()
            if b in other.mapping
        }
        return EsMap(self.source, other.target, m)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EsMap):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and dict(self.mapping) == dict(other.mapping)
        )

    __hash__ = None  # type: ignore[assignment]


@dataclass
class MapReport:
    violations: list[Violation]
    total: bool
    rigid: bool

    @property
    def ok(self) -> bool:
        return not self.violations


def identity_map(e: EventStructure) -> EsMap:
    return EsMap(e, e, {ev: ev for ev in e.events})


def validate_map(f: EsMap, limit: int | None = None) -> MapReport:
    """Check the map axioms on every configuration of the source."""
    out = []
    src, tgt = f.source, f.target
    tgt_events = set(tgt.events)
    for a, b in sorted(f.mapping.items()):
        if a not in src.down:
            out.append(Violation("unknown event", {"event": a, "in": "source"}))
        if b not in tgt_events:
            out.append(Violation("unknown event", {"event": b, "in": "target"}))
    if out:
        return MapReport(out, f.total, False)
    for x in configurations(src, limit=limit):
        defined = [ev for ev in x if ev in f.mapping]
        img = [f.mapping[ev] for ev in defined]
        if len(set(img)) != len(img):
            seen: dict[str, str] = {}
            for ev in sorted(defined):
                b = f.mapping[ev]
                if b in seen:
                    out.append(
                        Violation(
                            "local injectivity",
                            {"configuration": fmt(x), "events": [seen[b], ev], "image": b},
                        )
                    )
                    break
                seen[b] = ev
            continue
        if not tgt.is_configuration(img):
            out.append(
                Violation(
                    "image not a configuration",
                    {"configuration": fmt(x), "image": fmt(img)},
                )
            )
    rigid = all(
        tgt.leq(f.mapping[a], f.mapping[b])
        for a, b in src.order_pairs
        if a in f.mapping and b in f.mapping
    )
    return MapReport(out, f.total, rigid)


def _projection_forbidden(e: EventStructure, keep: frozenset) -> list[frozenset]:
    candidates = set()
    for f in e.forbidden:
        options = []
        for ev in sorted(f):
            ups = sorted(v for v in e.up.get(ev, ()) if v in keep)
            if not ups:
                break
            options.append(ups)
        else:
            for choice in itertools.product(*options):
                candidates.add(frozenset(choice))
    return [c for c in candidates if not any(d < c for d in candidates)]


def factorize(f: EsMap) -> tuple[EventStructure, EsMap, EsMap]:
    """Split ``f`` into a partial map onto its defined part and a total map."""
    src = f.source
    keep = f.defined()
    proj = EventStructure(
        keep,
        {ev: src.down[ev] & keep - {ev} for ev in keep},
        _projection_forbidden(src, keep),
    )
    p = EsMap(src, proj, {ev: ev for ev in keep})
    t = EsMap(proj, f.target, {ev: f.mapping[ev] for ev in keep})
    return proj, p, t


# -- pullback ------------------------------------------------------------------


def minimal_inconsistent(
    events: list[str],
    leq: Callable[[str, str], bool],
    consistent: Callable[[int], bool],
) -> list[frozenset]:
    """Minimal inconsistent sets for a consistency predicate on bitmasks.

    The predicate must be determined by down-closures, so minimal
    inconsistent sets are antichains and are found level by level.
    """
    n = len(events)
    comparable = [
        [i != j and (leq(events[i], events[j]) or leq(events[j], events[i])) for j in range(n)]
        for i in range(n)
    ]
    forbidden = []
    level = []
    for i in range(n):
        if consistent(1 << i):
            level.append((i,))
        else:
            forbidden.append(frozenset([events[i]]))
    while level:
        prev = set(level)
        nxt = []
        for t in level:
            for j in range(t[-1] + 1, n):
                if any(comparable[i][j] for i in t):
                    continue
                cand = t + (j,)
                if any(cand[:k] + cand[k + 1:] not in prev for k in range(len(cand) - 1)):
                    continue
                mask = 0
                for i in cand:
                    mask |= 1 << i
                if consistent(mask):
                    nxt.append(cand)
                else:
                    forbidden.append(frozenset(events[i] for i in cand))
        level = nxt
    return forbidden


def match_id(pairs: Iterable[tuple[str, str]]) -> str:
    """Identifier of a prime match: its sorted pair list as compact JSON."""
    return json.dumps(sorted([a, b] for a, b in pairs), separators=(",", ":"))


def _secured_order(
    pairs: list[tuple[str, str]], A: EventStructure, B: EventStructure
) -> dict[tuple, frozenset] | None:
    """Down-closures of each pair in the generated order, or None on a causal loop."""
    below: dict[tuple, set] = {p: set() for p in pairs}
    for p in pairs:
        for q in pairs:
            if p != q and (A.leq(q[0], p[0]) or B.leq(q[1], p[1])):
                below[p].add(q)
    # Kahn's algorithm detects loops.
    indeg = {p: len(below[p]) for p in pairs}
    above: dict[tuple, list] = defaultdict(list)
    for p, qs in below.items():
        for q in qs:
            above[q].append(p)
    ready = [p for p in pairs if indeg[p] == 0]
    order = []
    while ready:
        q = ready.pop()
        order.append(q)
        for p in above[q]:
            indeg[p] -= 1
            if indeg[p] == 0:
                ready.append(p)
    if len(order) != len(pairs):
        return None
    closure: dict[tuple, frozenset] = {}
    for p in order:
        acc = {p}
        for q in below[p]:
            acc |= closure[q]
        closure[p] = frozenset(acc)
    return closure


def enumerate_matches(
    f: EsMap,
    g: EsMap,
    bijections: Callable[[frozenset], Iterable[dict]] | None = None,
    limit: int | None = None,
) -> Iterator[tuple[frozenset, dict]]:
    """Yield secured matches ``(pairs, closures)`` between configurations over ``f``, ``g``.

    ``bijections(fx)`` supplies the bijections of the common target allowed
    from ``fx`` (each a dict); the strict pullback uses only identities.
    """
    limit = max_configs() if limit is None else limit
    A, B = f.source, g.source
    by_image: dict[frozenset, list[frozenset]] = defaultdict(list)
    for y in configurations(B, limit=limit):
        by_image[g.image(y)].append(y)
    count = 0
    for x in configurations(A, limit=limit):
        fx = f.image(x)
        phis = [{c: c for c in fx}] if bijections is None else bijections(fx)
        for phi in phis:
            cod = frozenset(phi.values())
            for y in by_image.get(cod, ()):
                ginv = {g.mapping[b]: b for b in y}
                pairs = sorted((a, ginv[phi[f.mapping[a]]]) for a in x)
                closure = _secured_order(pairs, A, B)
                if closure is None:
                    continue
                count += 1
                if count > limit:
                    raise ResourceLimitError("matches", limit)
                yield frozenset(pairs), closure


@dataclass
class Pullback:
    """Pullback object with its projections and the prime match behind each event."""

    es: EventStructure
    pi1: EsMap
    pi2: EsMap
    primes: dict[str, frozenset]
    matches: list[frozenset]

    def match_of(self, x: Iterable[str]) -> frozenset:
        out: set = set()
        for ev in x:
            out |= self.primes[ev]
        return frozenset(out)


def _build_pullback(f: EsMap, g: EsMap, matches: list[tuple[frozenset, dict]]) -> Pullback:
    prime_top: dict[frozenset, tuple] = {}
    for _, closure in matches:
        for p, down in closure.items():
            prime_top[down] = p
    ids = {pr: match_id(pr) for pr in prime_top}
    by_id = {ids[pr]: pr for pr in prime_top}
    causes = {
        ids[pr]: [ids[q] for q in prime_top if q < pr] for pr in prime_top
    }
    events = sorted(by_id)
    index = {ev: i for i, ev in enumerate(events)}
    match_masks = []
    match_sets = sorted({m for m, _ in matches}, key=lambda m: (len(m), sorted(m)))
    for m, closure in matches:
        mask = 0
        for down in closure.values():
            mask |= 1 << index[ids[down]]
        match_masks.append(mask)
    maximal = [m for m in set(match_masks) if not any(m != o and m & o == m for o in match_masks)]

    def consistent(mask: int) -> bool:
        return any(m & mask == mask for m in maximal)

    def leq(a: str, b: str) -> bool:
        return by_id[a] <= by_id[b]

    forbidden = minimal_inconsistent(events, leq, consistent)
    P = EventStructure(events, causes, forbidden)
    pi1 = EsMap(P, f.source, {ids[pr]: top[0] for pr, top in prime_top.items()})
    pi2 = EsMap(P, g.source, {ids[pr]: top[1] for pr, top in prime_top.items()})
    return Pullback(P, pi1, pi2, by_id, match_sets)


def pullback(f: EsMap, g: EsMap, limit: int | None = None) -> Pullback:
    """Pullback of two total maps with a common target.

    Events are the prime secured matches; see :func:`enumerate_matches`.
    """
    if not (f.total and g.total):
        raise InputError("pullback needs total maps")
    if f.target != g.target:
        raise InputError("pullback maps must share their target")
    matches = list(enumerate_matches(f, g, limit=limit))
    return _build_pullback(f, g, matches)


# -- juxtaposition ---------------------------------------------------------------


def juxtapose(parts: list[tuple[str, EventStructure]], exclusive: bool = False) -> EventStructure:
    """Disjoint union of tagged structures.

    Without ``exclusive`` a set is consistent iff each part is (parallel
    composition); with it, events of different parts are inconsistent (sum).
    """
    events, causes, forbidden = [], {}, []
    minimal: list[list[str]] = []
    for prefix, es in parts:
        for ev in es.events:
            events.append(tag(prefix, ev))
            causes[tag(prefix, ev)] = [tag(prefix, c) for c in es.causes[ev]]
        for fs in es.forbidden:
            forbidden.append([tag(prefix, ev) for ev in fs])
        minimal.append([tag(prefix, ev) for ev in es.events if not es.causes[ev]])
    if exclusive:
        for i, j in itertools.combinations(range(len(minimal)), 2):
            for u in minimal[i]:
                for v in minimal[j]:
                    forbidden.append([u, v])
    return EventStructure(events, causes, forbidden)


def build(
    events: Iterable[str],
    order: Iterable[tuple[str, str]] = (),
    conflicts: Iterable[Iterable[str]] = (),
) -> EventStructure:
    """Structure from ``(earlier, later)`` pairs and forbidden sets."""
    causes: dict[str, list[str]] = defaultdict(list)
    for a, b in order:
        causes[b].append(a)
    return EventStructure(events, causes, conflicts)
