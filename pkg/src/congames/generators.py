"""Seeded random event structures and valuations for property sweeps."""

from __future__ import annotations

import random
from fractions import Fraction

from .es_core import EventStructure, build, configurations
from .prob import ALL_POSITIVE, ConfigValuation, full_cover_violations, validate_valuation

GRID = [Fraction(k, 4) for k in range(5)]


def random_es(rng: random.Random, n_events: int, p_cause: float = 0.3, p_conflict: float = 0.3) -> EventStructure:
    """Events ``e0 .. e{n-1}``; causes only point backwards, so the order is acyclic."""
    events = [f"e{i}" for i in range(n_events)]
    order = [(events[i], events[j]) for j in range(n_events) for i in range(j) if rng.random() < p_cause]
    es = build(events, order)
    conflicts = []
    for j in range(n_events):
        for i in range(j):
            a, b = events[i], events[j]
            if not es.leq(a, b) and rng.random() < p_conflict:
                conflicts.append([a, b])
    return build(events, order, conflicts)


def random_valuation(rng: random.Random, es: EventStructure) -> ConfigValuation:
    """Grid-valued valuation: a product fill, a decreasing walk, or arbitrary values."""
    configs = configurations(es)
    kind = rng.randrange(3)
    vals = {}
    if kind == 0:
        w = {e: rng.choice(GRID) for e in es.events}
        for x in configs:
            p = Fraction(1)
            for e in x:
                p *= w[e]
            vals[x] = p
    elif kind == 1:
        for x in configs:
            if not x:
                vals[x] = Fraction(1)
                continue
            cap = min(vals[x - {e}] for e in x if (x - {e}) in vals)
            vals[x] = rng.choice([g for g in GRID if g <= cap])
    else:
        for x in configs:
            vals[x] = Fraction(1) if not x else rng.choice(GRID)
    return ConfigValuation(es, vals, ALL_POSITIVE)


def footnote_sweep(trials: int, seed: int = 0, max_events: int = 4) -> dict:
    """Compare single-extension validation with the full-cover check."""
    rng = random.Random(seed)
    agree, valid, bad = 0, 0, []
    for t in range(trials):
        es = random_es(rng, rng.randint(1, max_events))
        v = random_valuation(rng, es)
        found = validate_valuation(v)
        single = not found
        full = not [x for x in found if x.rule != "drop"] and not full_cover_violations(v)
        agree += single == full
        valid += single
        if single != full:
            bad.append(t)
    return {"trials": trials, "seed": seed, "agree": agree, "valid": valid, "disagreements": bad}
