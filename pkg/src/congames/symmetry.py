"""Symmetry on event structures as finite isomorphism families.

A family is stored extensionally: a set of bijections between
configurations, each a ``frozenset`` of ``(a, b)`` pairs.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable

from .errors import ResourceLimitError
from .es_core import (
    EsMap,
    EventStructure,
    Pullback,
    Violation,
    _build_pullback,
    configurations,
    enumerate_matches,
    fmt,
    max_configs,
    validate_map,
)
from .strategy import Strategy

Bijection = frozenset


def dom(theta: Bijection) -> frozenset:
    return frozenset(a for a, _ in theta)


def cod(theta: Bijection) -> frozenset:
    return frozenset(b for _, b in theta)


def inverse(theta: Bijection) -> Bijection:
    return frozenset((b, a) for a, b in theta)


def identity_on(x: Iterable[str]) -> Bijection:
    return frozenset((a, a) for a in x)


def _pairs_json(theta: Bijection) -> list:
    return sorted([a, b] for a, b in theta)


@dataclass(eq=False)
class IsoFamily:
    subject: EventStructure
    bijections: frozenset

    def __post_init__(self):
        self.bijections = frozenset(frozenset(tuple(p) for p in t) for t in self.bijections)

    def by_domain(self) -> dict[frozenset, list[Bijection]]:
        idx: dict[frozenset, list] = defaultdict(list)
        for t in self.bijections:
            idx[dom(t)].append(t)
        for v in idx.values():
            v.sort(key=_pairs_json)
        return idx

    def __contains__(self, theta) -> bool:
        return frozenset(theta) in self.bijections


def identity_family(es: EventStructure) -> IsoFamily:
    return IsoFamily(es, frozenset(identity_on(x) for x in configurations(es)))


def validate_isofamily(fam: IsoFamily) -> list[Violation]:
    """Groupoid closure, restriction and extension axioms."""
    es = fam.subject
    out = []
    if not fam.bijections:
        return [Violation("non-empty", {})]
    configs = configurations(es)
    for t in sorted(fam.bijections, key=_pairs_json):
        d, c = dom(t), cod(t)
        if len(d) != len(t) or len(c) != len(t):
            out.append(Violation("bijection", {"pairs": _pairs_json(t)}))
        elif not es.is_configuration(d) or not es.is_configuration(c):
            out.append(Violation("configurations", {"pairs": _pairs_json(t)}))
    if out:
        return out
    idx = fam.by_domain()
    for x in configs:
        if identity_on(x) not in fam:
            out.append(Violation("(i) identity", {"configuration": fmt(x)}))
    for t in sorted(fam.bijections, key=_pairs_json):
        if inverse(t) not in fam:
            out.append(Violation("(i) inverse", {"pairs": _pairs_json(t)}))
        fwd = dict(t)
        for phi in idx.get(cod(t), ()):
            comp = frozenset((a, dict(phi)[fwd[a]]) for a in fwd)
            if comp not in fam:
                out.append(
                    Violation("(i) composite", {"first": _pairs_json(t), "second": _pairs_json(phi)})
                )
    for t in sorted(fam.bijections, key=_pairs_json):
        d = dom(t)
        fwd = dict(t)
        for x in configs:
            if x <= d:
                r = frozenset((a, fwd[a]) for a in x)
                if not es.is_configuration(cod(r)) or r not in fam:
                    out.append(
                        Violation("(ii) restriction", {"pairs": _pairs_json(t), "to": fmt(x)})
                    )
            elif d < x:
                if not any(t <= t2 for t2 in idx.get(x, ())):
                    out.append(Violation("(iii) extension", {"pairs": _pairs_json(t), "to": fmt(x)}))
    return out


def _transport(f: EsMap, theta: Bijection) -> Bijection:
    return frozenset((f.mapping[a], f.mapping[b]) for a, b in theta)


def map_symmetry(
    f: EsMap, fam_a: IsoFamily, fam_b: IsoFamily, g: EsMap | None = None
) -> dict:
    """Whether ``f`` preserves symmetry and, given ``g``, whether ``f ~ g``."""
    report: dict = {"preserves": True, "witness": None, "sim": None, "sim_witness": None}
    for t in sorted(fam_a.bijections, key=_pairs_json):
        if _transport(f, t) not in fam_b:
            report["preserves"] = False
            report["witness"] = _pairs_json(t)
            break
    if g is not None:
        report["sim"] = True
        for x in configurations(f.source):
            phi = frozenset((f.mapping[a], g.mapping[a]) for a in x)
            if phi not in fam_b:
                report["sim"] = False
                report["sim_witness"] = fmt(x)
                break
    return report


def similar_maps(f: EsMap, g: EsMap, fam_b: IsoFamily) -> bool:
    return all(
        frozenset((f.mapping[a], g.mapping[a]) for a in x) in fam_b
        for x in configurations(f.source)
    )


def pseudo_pullback(f: EsMap, g: EsMap, fam_c: IsoFamily, limit: int | None = None) -> Pullback:
    """Pullback up to symmetry: matches may go through any bijection of ``fam_c``."""
    idx = fam_c.by_domain()

    def bijections(fx: frozenset):
        return [dict(t) for t in idx.get(fx, ())]

    matches = list(enumerate_matches(f, g, bijections, limit=limit))
    return _build_pullback(f, g, matches)


def _candidate_maps(s1: Strategy, s2: Strategy, fam1: IsoFamily, fam2: IsoFamily, budget: list[int]):
    fibers: dict[str, list[str]] = defaultdict(list)
    for e in s2.es.events:
        fibers[s2.sigma[e]].append(e)
    events = list(s1.es.events)
    choices = [sorted(fibers.get(s1.sigma[e], ())) for e in events]
    out = []
    for combo in itertools.product(*choices):
        budget[0] -= 1
        if budget[0] < 0:
            raise ResourceLimitError("similarity search", max_configs())
        m = EsMap(s1.es, s2.es, dict(zip(events, combo)))
        if not validate_map(m).ok:
            continue
        if not map_symmetry(m, fam1, fam2)["preserves"]:
            continue
        out.append(m)
    return out


def strategies_similar(
    s1: Strategy,
    s2: Strategy,
    fam1: IsoFamily | None = None,
    fam2: IsoFamily | None = None,
) -> bool:
    """Maps both ways commuting with ``sigma`` whose composites are ~ identities."""
    if s1.target != s2.target:
        return False
    fam1 = identity_family(s1.es) if fam1 is None else fam1
    fam2 = identity_family(s2.es) if fam2 is None else fam2
    budget = [max_configs()]
    fs = _candidate_maps(s1, s2, fam1, fam2, budget)
    if not fs:
        return False
    gs = _candidate_maps(s2, s1, fam2, fam1, budget)
    id1 = EsMap(s1.es, s1.es, {e: e for e in s1.es.events})
    id2 = EsMap(s2.es, s2.es, {e: e for e in s2.es.events})
    for f in fs:
        for g in gs:
            if similar_maps(f.then(g), id1, fam1) and similar_maps(g.then(f), id2, fam2):
                return True
    return False
