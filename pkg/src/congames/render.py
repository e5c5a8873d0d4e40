"""Graphviz DOT export.

Nodes are events labelled ``id:+`` or ``id:-``.  Immediate causality is a
solid arrow; an arrow crossing between two boxed sides (ports or parallel
components) is dashed.  Minimal forbidden pairs are dashed undirected
edges; larger forbidden sets hang off a point node.
"""

from __future__ import annotations

from typing import Mapping

from .es_core import EventStructure
from .games import Game
from .strategy import Strategy


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def es_to_dot(
    es: EventStructure,
    polarity: Mapping[str, str] | None = None,
    side: Mapping[str, str] | None = None,
    name: str = "es",
) -> str:
    side = side or {}
    lines = [f"digraph {_q(name)} {{", "  rankdir=BT;", "  node [shape=plaintext];"]

    def node(e: str) -> str:
        lab = f"{e}:{polarity[e]}" if polarity else e
        return f"{_q(e)} [label={_q(lab)}];"

    sides = sorted({side[e] for e in es.events if e in side})
    for s in sides:
        lines.append(f"  subgraph {_q('cluster_' + s)} {{")
        lines.append(f"    label={_q(s)}; style=solid; shape=box;")
        for e in es.events:
            if side.get(e) == s:
                lines.append("    " + node(e))
        lines.append("  }")
    for e in es.events:
        if e not in side:
            lines.append("  " + node(e))
    for b in es.events:
        for a in sorted(es.immediate[b]):
            cross = side.get(a) != side.get(b)
            style = " [style=dashed]" if cross else ""
            lines.append(f"  {_q(a)} -> {_q(b)}{style};")
    for k, fs in enumerate(sorted(sorted(f) for f in es.forbidden)):
        if len(fs) == 2:
            lines.append(f"  {_q(fs[0])} -> {_q(fs[1])} [style=dashed, dir=none];")
        else:
            hub = f"#conflict{k}"
            lines.append(f"  {_q(hub)} [shape=point, label=\"\"];")
            for e in fs:
                lines.append(f"  {_q(hub)} -> {_q(e)} [style=dashed, dir=none];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def game_to_dot(g: Game) -> str:
    return es_to_dot(g.es, g.polarity, name=g.name or "game")


def strategy_to_dot(s: Strategy) -> str:
    """Inner structure of ``s``, boxed by the port each event lands in."""
    side = {}
    if s.ports is not None:
        side = {e: s.sigma[e].partition(":")[0] for e in s.es.events}
    return es_to_dot(s.es, s.inner.polarity, side, name=s.name or "strategy")
