"""Configuration-valuations, drop functions and outcome distributions.

Values are kept exact (``Fraction``) whenever the inputs are; floats are
compared with a tolerance of ``1e-9``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Iterable, Mapping

from .errors import InputError
from .es_core import EventStructure, Pullback, Violation, configurations, extensions, fmt

ALL_POSITIVE = "all-positive"
STRATEGY = "strategy"
FLOAT_TOL = 1e-9


def as_number(v) -> Number:
    """Parse ``"1/2"``-style strings and ints to ``Fraction``; floats stay floats."""
    if isinstance(v, (Fraction, float)):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v) if "." not in v and "e" not in v.lower() else float(v)
    raise InputError(f"not a number: {v!r}")


def is_exact(values: Iterable) -> bool:
    return all(isinstance(v, (Fraction, int)) for v in values)


@dataclass(eq=False)
class ConfigValuation:
    """Extensional map from configurations of ``subject`` to ``[0, 1]``."""

    subject: EventStructure
    values: dict[frozenset, Number]
    mode: str = ALL_POSITIVE
    polarity: Mapping[str, str] | None = None

    def __call__(self, x: Iterable[str]) -> Number:
        x = frozenset(x)
        try:
            return self.values[x]
        except KeyError:
            raise InputError(f"valuation has no value for {fmt(x)}") from None

    @property
    def exact(self) -> bool:
        return is_exact(self.values.values())

    @property
    def tol(self) -> float:
        return 0 if self.exact else FLOAT_TOL

    def renamed(self, es: EventStructure, names: Mapping[str, str]) -> "ConfigValuation":
        return ConfigValuation(
            es,
            {frozenset(names[e] for e in x): v for x, v in self.values.items()},
            self.mode,
            {names[e]: p for e, p in self.polarity.items()} if self.polarity else None,
        )


def constant_valuation(es: EventStructure, value=Fraction(1), mode=ALL_POSITIVE, polarity=None):
    return ConfigValuation(es, {x: value for x in configurations(es)}, mode, polarity)


def product_fill(
    es: EventStructure,
    weights: Mapping[str, Number],
    mode: str = ALL_POSITIVE,
    polarity: Mapping[str, str] | None = None,
) -> ConfigValuation:
    """Complete a sparse valuation: ``v(x)`` is the product of the weights in ``x`` (default 1)."""
    vals = {}
    for x in configurations(es):
        p = Fraction(1)
        for e in x:
            p = p * as_number(weights.get(e, 1))
        vals[x] = p
    return ConfigValuation(es, vals, mode, polarity)


def drop(v: ConfigValuation, y: Iterable[str], xs: list[Iterable[str]]) -> Number:
    """Probability of extending ``y`` but none of ``xs``, by inclusion-exclusion."""
    es = v.subject
    y = frozenset(y)
    xs = [frozenset(x) for x in xs]
    for c in [y, *xs]:
        if not es.is_configuration(c):
            raise InputError(f"{fmt(c)} is not a configuration")
    if any(not y <= x for x in xs):
        raise InputError("drop needs y below every x")
    total = v(y)
    for r in range(1, len(xs) + 1):
        sign = 1 if r % 2 == 1 else -1
        for idx in itertools.combinations(range(len(xs)), r):
            u = frozenset().union(*(xs[i] for i in idx))
            if es.is_configuration(u):
                total = total - sign * v(u)
    return total


def _nonempty_subsets(items: list) -> Iterable[tuple]:
    for r in range(1, len(items) + 1):
        yield from itertools.combinations(items, r)


def validate_valuation(v: ConfigValuation) -> list[Violation]:
    """Normalisation, range and drop conditions (single-event covers suffice).

    In strategy mode Opponent extensions must not change the value and the
    drop condition is required only across Player extensions.
    """
    es = v.subject
    out = []
    configs = configurations(es)
    cset = set(configs)
    for x in sorted(v.values, key=lambda c: (len(c), sorted(c))):
        if x not in cset:
            out.append(Violation("not a configuration", {"configuration": fmt(x)}))
    missing = [x for x in configs if x not in v.values]
    for x in missing:
        out.append(Violation("missing value", {"configuration": fmt(x)}))
    if missing:
        return out
    tol = v.tol
    if abs(v(frozenset()) - 1) > tol:
        out.append(Violation("normalized", {"value": str(v(frozenset()))}))
    for x in configs:
        val = v(x)
        if val < -tol or val > 1 + tol:
            out.append(Violation("range", {"configuration": fmt(x), "value": str(val)}))
    if v.mode == STRATEGY:
        if v.polarity is None:
            raise InputError("strategy-mode valuation needs polarity")
        pol = v.polarity
    for y in configs:
        ext = sorted(extensions(es, y))
        if v.mode == STRATEGY:
            for e in ext:
                if pol[e] == "-" and abs(v(y | {e}) - v(y)) > tol:
                    out.append(
                        Violation(
                            "+- independence",
                            {"configuration": fmt(y), "event": e, "values": [str(v(y)), str(v(y | {e}))]},
                        )
                    )
            ext = [e for e in ext if pol[e] == "+"]
        for sub in _nonempty_subsets(ext):
            d = drop(v, y, [y | {e} for e in sub])
            if d < -tol:
                out.append(
                    Violation(
                        "drop",
                        {"configuration": fmt(y), "extensions": list(sub), "drop": str(d)},
                    )
                )
    return out


def _component(x: frozenset, subject: EventStructure, prefix: str) -> frozenset:
    if x <= set(subject.events):
        return x
    pre = prefix + ":"
    return frozenset(e[len(pre):] for e in x if e.startswith(pre))


def product_valuation(
    interaction: Pullback, v_s: ConfigValuation | None, v_t: ConfigValuation | None
) -> ConfigValuation:
    """``v(z) = v_S(pi1 z) * v_T(pi2 z)`` on the configurations of an interaction.

    Works on a plain pullback of ``sigma`` against ``tau`` and on the
    interaction built by composition (components tagged ``S``/``T``).
    """
    if v_s is None or v_t is None:
        raise InputError("both strategies need a valuation")
    P = interaction.es
    vals = {}
    for z in configurations(P):
        x = _component(interaction.pi1.image(z), v_s.subject, "S")
        y = _component(interaction.pi2.image(z), v_t.subject, "T")
        vals[z] = v_s(x) * v_t(y)
    return ConfigValuation(P, vals, ALL_POSITIVE)


def outcome_distribution(v: ConfigValuation) -> dict[frozenset, Number]:
    """Probability of each configuration being the final result."""
    if v.mode != ALL_POSITIVE:
        raise InputError("outcome distributions need an all-positive valuation")
    bad = validate_valuation(v)
    if bad:
        raise InputError(f"invalid valuation: {bad[0].rule} {bad[0].witness}")
    es = v.subject
    return {
        z: drop(v, z, [z | {e} for e in sorted(extensions(es, z))])
        for z in configurations(es)
    }


def full_cover_violations(v: ConfigValuation) -> list[Violation]:
    """Drop condition over every antichain of configurations above each ``y``.

    The slow form of the check; a set containing ``x`` and some larger
    ``x'`` has the same drop as the set without ``x'``, so antichains cover
    every finite family.
    """
    if v.mode != ALL_POSITIVE:
        raise InputError("the full-cover check is for all-positive valuations")
    es = v.subject
    configs = configurations(es)
    tol = v.tol
    out = []
    for y in configs:
        above = [x for x in configs if y < x]

        def antichains(start: int, chosen: list) -> Iterable[list]:
            for i in range(start, len(above)):
                x = above[i]
                if all(not (x <= c or c <= x) for c in chosen):
                    chosen.append(x)
                    yield list(chosen)
                    yield from antichains(i + 1, chosen)
                    chosen.pop()

        for xs in antichains(0, []):
            d = drop(v, y, xs)
            if d < -tol:
                out.append(
                    Violation("drop", {"configuration": fmt(y), "covers": [fmt(x) for x in xs], "drop": str(d)})
                )
    return out
