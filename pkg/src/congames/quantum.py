"""Quantum event structures: events act as unitaries or projections on C^dim.

Tolerances: structural checks use ``1e-9``; two serialisations of a
configuration must give operators agreeing to ``1e-12``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .errors import CongamesError, InputError
from .es_core import EventStructure, Violation, configurations, fmt
from .prob import ALL_POSITIVE, ConfigValuation, validate_valuation

STRUCT_TOL = 1e-9
SERIAL_TOL = 1e-12
MAX_DIM = 64
UNITARY, PROJECTION = "unitary", "projection"


class SerializationError(CongamesError):
    """Two linear extensions of a configuration gave different operators."""


@dataclass(eq=False)
class QuantumES:
    es: EventStructure
    dim: int
    assign: dict[str, tuple[str, np.ndarray]]
    rho: np.ndarray


def _norm(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def validate_qes(q: QuantumES) -> list[Violation]:
    out = []
    if not 1 <= q.dim <= MAX_DIM:
        return [Violation("dimension", {"dim": q.dim, "max": MAX_DIM})]
    eye = np.eye(q.dim)
    for e in q.es.events:
        if e not in q.assign:
            out.append(Violation("operator missing", {"event": e}))
            continue
        kind, m = q.assign[e]
        if m.shape != (q.dim, q.dim):
            out.append(Violation("operator shape", {"event": e, "shape": list(m.shape)}))
            continue
        if kind == UNITARY:
            err = _norm(m.conj().T @ m - eye)
            if err > STRUCT_TOL:
                out.append(Violation("unitary", {"event": e, "error": err}))
        elif kind == PROJECTION:
            err = max(_norm(m @ m - m), _norm(m - m.conj().T))
            if err > STRUCT_TOL:
                out.append(Violation("projection", {"event": e, "error": err}))
        else:
            out.append(Violation("operator kind", {"event": e, "kind": kind}))
    r = q.rho
    if r.shape != (q.dim, q.dim):
        out.append(Violation("density shape", {"shape": list(r.shape)}))
    else:
        if _norm(r - r.conj().T) > STRUCT_TOL:
            out.append(Violation("density hermitian", {}))
        elif np.min(np.linalg.eigvalsh(r)) < -STRUCT_TOL:
            out.append(Violation("density positive", {"min_eigenvalue": float(np.min(np.linalg.eigvalsh(r)))}))
        if abs(np.trace(r) - 1) > STRUCT_TOL:
            out.append(Violation("density trace", {"trace": complex(np.trace(r)).real}))
    if out:
        return out
    for e1, e2 in itertools.combinations(q.es.events, 2):
        if q.es.concurrent(e1, e2):
            a, b = q.assign[e1][1], q.assign[e2][1]
            err = _norm(a @ b - b @ a)
            if err > STRUCT_TOL:
                out.append(Violation("commuting", {"events": [e1, e2], "error": err}))
    return out


def linear_extension(es: EventStructure, x: Iterable[str], latest: bool = False) -> list[str]:
    """Serialise ``x`` causally, choosing the least (or greatest) available event first."""
    rest = set(x)
    seq: list[str] = []
    while rest:
        ready = sorted(e for e in rest if es.down[e] - {e} <= set(seq))
        e = ready[-1] if latest else ready[0]
        seq.append(e)
        rest.discard(e)
    return seq


def linear_extensions(es: EventStructure, x: Iterable[str]) -> Iterator[list[str]]:
    x = frozenset(x)

    def go(done: list[str]) -> Iterator[list[str]]:
        if len(done) == len(x):
            yield list(done)
            return
        for e in sorted(x - set(done)):
            if es.down[e] - {e} <= set(done):
                done.append(e)
                yield from go(done)
                done.pop()

    yield from go([])


def operator_along(q: QuantumES, seq: Iterable[str]) -> np.ndarray:
    a = np.eye(q.dim, dtype=complex)
    for e in seq:
        a = q.assign[e][1] @ a
    return a


def config_operator_and_weight(q: QuantumES, x: Iterable[str]) -> tuple[np.ndarray, float]:
    """Operator of a configuration and its weight ``Tr(A^dagger A rho)``."""
    x = frozenset(x)
    if not q.es.is_configuration(x):
        raise InputError(f"{fmt(x)} is not a configuration")
    a = operator_along(q, linear_extension(q.es, x))
    b = operator_along(q, linear_extension(q.es, x, latest=True))
    if _norm(a - b) > SERIAL_TOL:
        raise SerializationError(f"serialisations of {fmt(x)} disagree by {_norm(a - b):.3g}")
    v = float(np.real(np.trace(a.conj().T @ a @ q.rho)))
    return a, v


def weights(q: QuantumES, es: EventStructure | None = None) -> dict[frozenset, float]:
    es = q.es if es is None else es
    return {x: config_operator_and_weight(q, x)[1] for x in configurations(es)}


def local_valuation_check(q: QuantumES, w: Iterable[str]) -> list[Violation]:
    """Weights restricted to the events of configuration ``w`` form a valuation."""
    w = frozenset(w)
    if not q.es.is_configuration(w):
        raise InputError(f"{fmt(w)} is not a configuration")
    sub = q.es.restrict(w)
    return validate_valuation(ConfigValuation(sub, weights(q, sub), ALL_POSITIVE))


def whole_valuation_check(q: QuantumES) -> list[Violation]:
    """Weights on the whole structure as a valuation (need not hold)."""
    return validate_valuation(ConfigValuation(q.es, weights(q), ALL_POSITIVE))


def matrix_from_json(rows) -> np.ndarray:
    """Row-major arrays of ``[re, im]`` pairs."""
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=complex)


def matrix_to_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]
