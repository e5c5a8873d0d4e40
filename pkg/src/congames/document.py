"""JSON documents: games, strategies, maps, levels, quantum blocks, symmetries, outcomes.

Every value is validated eagerly on load and errors carry a JSON pointer.
Game references are names, DSL game expressions such as ``"~G"`` or
``"A || B"``, or inline game objects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Number
from pathlib import Path
from typing import Any

import numpy as np

from .errors import CongamesError, DocumentError, InputError
from .es_core import EsMap, EventStructure, build, configurations, config_key, fmt, validate_map
from .games import IN, OUT, Game, LevelOrder, Port, validate_game, validate_level_order
from .outcomes import PayoffSpec, WinningSpec
from .prob import ALL_POSITIVE, STRATEGY, ConfigValuation, as_number, product_fill
from .quantum import PROJECTION, UNITARY, QuantumES, validate_qes
from .strategy import Strategy, make_strategy, validate_strategy
from .symmetry import IsoFamily, identity_on, validate_isofamily

SCHEMA = 1


def _ptr(*parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


@dataclass
class Symmetry:
    subject: tuple[str, str]  # ("game" | "strategy", name)
    family: IsoFamily


@dataclass
class Document:
    games: dict[str, Game] = field(default_factory=dict)
    strategies: dict[str, Strategy] = field(default_factory=dict)
    maps: dict[str, Any] = field(default_factory=dict)
    levels: LevelOrder | None = None
    quantum: dict[str, QuantumES] = field(default_factory=dict)
    symmetries: dict[str, Symmetry] = field(default_factory=dict)
    payoffs: dict[str, PayoffSpec] = field(default_factory=dict)
    winning: dict[str, WinningSpec] = field(default_factory=dict)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Document):
            return NotImplemented
        return document_to_json(self) == document_to_json(other)

    def game(self, name: str) -> Game:
        if name not in self.games:
            raise InputError(f"no game named {name!r}")
        return self.games[name]

    def strategy(self, name: str) -> Strategy:
        if name not in self.strategies:
            raise InputError(f"no strategy named {name!r}")
        return self.strategies[name]

    def env(self):
        from .dsl import Env

        return Env(dict(self.games), dict(self.maps))


# -- loading ------------------------------------------------------------------------


def _need(obj, key, ptr, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise DocumentError(ptr, f"missing {key!r}")
    v = obj[key]
    if kind is not None and not isinstance(v, kind):
        raise DocumentError(_ptr_join(ptr, key), f"expected {kind.__name__ if isinstance(kind, type) else kind}")
    return v


def _ptr_join(ptr: str, *parts) -> str:
    return ptr + _ptr(*parts)


def _str_list(v, ptr) -> list[str]:
    if not isinstance(v, list) or not all(isinstance(x, str) for x in v):
        raise DocumentError(ptr, "expected a list of strings")
    return v


def _pairs(v, ptr) -> list[tuple[str, str]]:
    if not isinstance(v, list):
        raise DocumentError(ptr, "expected a list of pairs")
    out = []
    for i, p in enumerate(v):
        if not (isinstance(p, list) and len(p) == 2 and all(isinstance(x, str) for x in p)):
            raise DocumentError(_ptr_join(ptr, i), "expected a pair of event names")
        out.append((p[0], p[1]))
    return out


def _conflicts(v, ptr) -> list[list[str]]:
    if not isinstance(v, list):
        raise DocumentError(ptr, "expected a list of sets")
    return [_str_list(c, _ptr_join(ptr, i)) for i, c in enumerate(v)]


def _number(v, ptr) -> Number:
    if isinstance(v, bool):
        raise DocumentError(ptr, "expected a number")
    try:
        return as_number(v)
    except (InputError, ValueError, ZeroDivisionError):
        raise DocumentError(ptr, f"not a number: {v!r}") from None


def _es(obj, ptr, events) -> EventStructure:
    causes = _pairs(obj.get("causes", []), _ptr_join(ptr, "causes"))
    conflicts = _conflicts(obj.get("conflicts", []), _ptr_join(ptr, "conflicts"))
    known = set(events)
    for i, (a, b) in enumerate(causes):
        for x in (a, b):
            if x not in known:
                raise DocumentError(_ptr_join(ptr, "causes", i), f"unknown event {x!r}")
    for i, c in enumerate(conflicts):
        for x in c:
            if x not in known:
                raise DocumentError(_ptr_join(ptr, "conflicts", i), f"unknown event {x!r}")
    return build(events, causes, conflicts)


def _check_violations(violations, ptr):
    if violations:
        v = violations[0]
        raise DocumentError(ptr, f"{v.rule} {json.dumps(v.witness, default=str)}")


def _load_game(obj, ptr, name="") -> Game:
    if not isinstance(obj, dict):
        raise DocumentError(ptr, "expected a game object")
    pol = _need(obj, "events", ptr, dict)
    for e, p in pol.items():
        if p not in ("+", "-"):
            raise DocumentError(_ptr_join(ptr, "events", e), "polarity must be '+' or '-'")
    es = _es(obj, ptr, list(pol))
    level = obj.get("level")
    if level is not None and not isinstance(level, dict):
        raise DocumentError(_ptr_join(ptr, "level"), "expected an object")
    g = Game(es, dict(pol), dict(level) if level is not None else None, name)
    _check_violations(validate_game(g), ptr)
    return g


def _game_ref(doc: Document, ref, ptr) -> Game:
    if isinstance(ref, dict):
        return _load_game(ref, ptr)
    if not isinstance(ref, str):
        raise DocumentError(ptr, "expected a game reference")
    if ref in doc.games:
        return doc.games[ref]
    from .dsl import DslSyntaxError, Env, TypeCheckError, _Parser

    try:
        p = _Parser(ref)
        gx = p.game()
        if p.tok.kind != "eof":
            raise p.error("expected end of game expression")
        return Env(doc.games).game(gx)
    except TypeCheckError as exc:
        raise DocumentError(ptr, f"dangling game reference: {exc}") from None
    except DslSyntaxError as exc:
        raise DocumentError(ptr, f"bad game expression: {exc}") from None


def _valuation(obj, ptr, es: EventStructure, pol) -> ConfigValuation:
    if not isinstance(obj, dict):
        raise DocumentError(ptr, "expected a valuation object")
    mode = obj.get("mode", STRATEGY)
    if mode not in (STRATEGY, ALL_POSITIVE):
        raise DocumentError(_ptr_join(ptr, "mode"), f"unknown mode {mode!r}")
    if "weights" in obj:
        w = _need(obj, "weights", ptr, dict)
        weights = {}
        for e, v in w.items():
            if e not in es.events:
                raise DocumentError(_ptr_join(ptr, "weights", e), f"unknown event {e!r}")
            weights[e] = _number(v, _ptr_join(ptr, "weights", e))
        return product_fill(es, weights, mode, pol)
    rows = _need(obj, "values", ptr, list)
    vals = {}
    for i, row in enumerate(rows):
        p = _ptr_join(ptr, "values", i)
        x = frozenset(_str_list(_need(row, "configuration", p), _ptr_join(p, "configuration")))
        if not es.is_configuration(x):
            raise DocumentError(p, f"{fmt(x)} is not a configuration")
        vals[x] = _number(_need(row, "value", p), _ptr_join(p, "value"))
    return ConfigValuation(es, vals, mode, pol)


def _ports(doc, obj, ptr) -> list[Port]:
    out = []
    for i, p in enumerate(obj):
        pp = _ptr_join(ptr, i)
        name = _need(p, "name", pp, str)
        direction = p.get("direction", OUT)
        if direction not in (IN, OUT):
            raise DocumentError(_ptr_join(pp, "direction"), "direction must be 'in' or 'out'")
        out.append(Port(name, _game_ref(doc, _need(p, "game", pp), _ptr_join(pp, "game")), direction))
    return out


def _load_strategy(doc: Document, name: str, obj, ptr) -> Strategy:
    if not isinstance(obj, dict):
        raise DocumentError(ptr, "expected a strategy object")
    events = _str_list(_need(obj, "events", ptr), _ptr_join(ptr, "events"))
    es = _es(obj, ptr, events)
    sigma = _need(obj, "map", ptr, dict)
    ports = None
    if "ports" in obj:
        ports = _ports(doc, _need(obj, "ports", ptr, list), _ptr_join(ptr, "ports"))
        from .games import port_game

        target = port_game(ports)
    else:
        target = _game_ref(doc, _need(obj, "game", ptr), _ptr_join(ptr, "game"))
    for e in events:
        if e not in sigma:
            raise DocumentError(_ptr_join(ptr, "map"), f"map undefined on {e!r}")
        if sigma[e] not in target.polarity:
            raise DocumentError(_ptr_join(ptr, "map", e), f"unknown game event {sigma[e]!r}")
    s = make_strategy(target, es, {e: sigma[e] for e in events}, ports, name=name)
    _check_violations(validate_strategy(s), ptr)
    if "valuation" in obj:
        s.valuation = _valuation(obj["valuation"], _ptr_join(ptr, "valuation"), es, s.inner.polarity)
    return s


def _matrix(v, dim, ptr) -> np.ndarray:
    if not isinstance(v, list) or len(v) != dim:
        raise DocumentError(ptr, f"expected {dim} rows")
    rows = []
    for i, row in enumerate(v):
        if not isinstance(row, list) or len(row) != dim:
            raise DocumentError(_ptr_join(ptr, i), f"expected {dim} entries")
        out = []
        for j, z in enumerate(row):
            if isinstance(z, list) and len(z) == 2:
                out.append(complex(float(z[0]), float(z[1])))
            elif isinstance(z, (int, float)) and not isinstance(z, bool):
                out.append(complex(z))
            else:
                raise DocumentError(_ptr_join(ptr, i, j), "entry must be a number or [re, im]")
        rows.append(out)
    return np.array(rows, dtype=complex)


def _load_quantum(obj, ptr) -> QuantumES:
    if not isinstance(obj, dict):
        raise DocumentError(ptr, "expected a quantum object")
    events = _str_list(_need(obj, "events", ptr), _ptr_join(ptr, "events"))
    es = _es(obj, ptr, events)
    dim = _need(obj, "dim", ptr, int)
    if not 1 <= dim <= 64:
        raise DocumentError(_ptr_join(ptr, "dim"), "dimension must be between 1 and 64")
    ops = _need(obj, "operators", ptr, dict)
    assign = {}
    for e in events:
        op = _need(ops, e, _ptr_join(ptr, "operators"))
        p = _ptr_join(ptr, "operators", e)
        kind = _need(op, "kind", p, str)
        if kind not in (UNITARY, PROJECTION):
            raise DocumentError(_ptr_join(p, "kind"), f"unknown operator kind {kind!r}")
        assign[e] = (kind, _matrix(_need(op, "matrix", p), dim, _ptr_join(p, "matrix")))
    q = QuantumES(es, dim, assign, _matrix(_need(obj, "rho", ptr), dim, _ptr_join(ptr, "rho")))
    _check_violations(validate_qes(q), ptr)
    return q


def _load_symmetry(doc: Document, obj, ptr) -> Symmetry:
    if not isinstance(obj, dict):
        raise DocumentError(ptr, "expected a symmetry object")
    subj = _need(obj, "subject", ptr, dict)
    if "strategy" in subj:
        name = subj["strategy"]
        if name not in doc.strategies:
            raise DocumentError(_ptr_join(ptr, "subject", "strategy"), f"dangling strategy reference {name!r}")
        es, kind = doc.strategies[name].es, "strategy"
    elif "game" in subj:
        name = subj["game"]
        if name not in doc.games:
            raise DocumentError(_ptr_join(ptr, "subject", "game"), f"dangling game reference {name!r}")
        es, kind = doc.games[name].es, "game"
    else:
        raise DocumentError(_ptr_join(ptr, "subject"), "expected 'game' or 'strategy'")
    bij = []
    for i, t in enumerate(_need(obj, "bijections", ptr, list)):
        bij.append(frozenset(_pairs(t, _ptr_join(ptr, "bijections", i))))
    if obj.get("with_identities", False):
        bij.extend(identity_on(x) for x in configurations(es))
    fam = IsoFamily(es, frozenset(bij))
    _check_violations(validate_isofamily(fam), ptr)
    return Symmetry((kind, name), fam)


def _config_list(v, ptr, game: Game) -> list[frozenset]:
    out = []
    for i, x in enumerate(v):
        x = frozenset(_str_list(x, _ptr_join(ptr, i)))
        if not game.es.is_configuration(x):
            raise DocumentError(_ptr_join(ptr, i), f"{fmt(x)} is not a configuration")
        out.append(x)
    return out


def document_from_json(data: Any) -> Document:
    if not isinstance(data, dict):
        raise DocumentError("", "document must be a JSON object")
    if "schema" in data and data["schema"] != SCHEMA:
        raise DocumentError("/schema", f"unsupported schema {data['schema']!r}")
    doc = Document()
    for name, g in data.get("games", {}).items():
        doc.games[name] = _load_game(g, _ptr("games", name), name)
    for name, m in data.get("maps", {}).items():
        from .dsl import MapDef

        p = _ptr("maps", name)
        src, tgt = _need(m, "source", p, str), _need(m, "target", p, str)
        for key, ref in (("source", src), ("target", tgt)):
            if ref not in doc.games:
                raise DocumentError(_ptr_join(p, key), f"dangling game reference {ref!r}")
        f = EsMap(doc.games[src].es, doc.games[tgt].es, dict(_need(m, "map", p, dict)))
        rep = validate_map(f)
        _check_violations(rep.violations, p)
        doc.maps[name] = MapDef(f, src, tgt)
    for name, s in data.get("strategies", {}).items():
        doc.strategies[name] = _load_strategy(doc, name, s, _ptr("strategies", name))
    if data.get("levels") is not None:
        lv = data["levels"]
        p = _ptr("levels")
        order = LevelOrder(
            frozenset(_str_list(_need(lv, "levels", p), _ptr_join(p, "levels"))),
            frozenset(_pairs(lv.get("leq", []), _ptr_join(p, "leq"))),
        )
        _check_violations(validate_level_order(order), p)
        doc.levels = order
    for name, q in data.get("quantum", {}).items():
        doc.quantum[name] = _load_quantum(q, _ptr("quantum", name))
    for name, s in data.get("symmetries", {}).items():
        doc.symmetries[name] = _load_symmetry(doc, s, _ptr("symmetries", name))
    for gname, table in data.get("payoffs", {}).items():
        p = _ptr("payoffs", gname)
        if gname not in doc.games:
            raise DocumentError(p, f"dangling game reference {gname!r}")
        g = doc.games[gname]
        default = table.get("default")
        vals = {}
        for x in configurations(g.es):
            if default is not None:
                vals[x] = _number(default, _ptr_join(p, "default"))
        for i, row in enumerate(table.get("table", [])):
            rp = _ptr_join(p, "table", i)
            (x,) = _config_list([_need(row, "configuration", rp)], _ptr_join(rp, "configuration"), g)
            vals[x] = _number(_need(row, "value", rp), _ptr_join(rp, "value"))
        spec = PayoffSpec(g, vals)
        missing = [x for x in configurations(g.es) if x not in vals]
        if missing:
            raise DocumentError(p, f"no payoff for {fmt(missing[0])}")
        doc.payoffs[gname] = spec
    for gname, ws in data.get("winning", {}).items():
        p = _ptr("winning", gname)
        if gname not in doc.games:
            raise DocumentError(p, f"dangling game reference {gname!r}")
        doc.winning[gname] = WinningSpec(doc.games[gname], frozenset(_config_list(ws, p, doc.games[gname])))
    return doc


def load_document(path: str | Path) -> Document:
    """Parse and fully validate a document file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError("", f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError("", f"invalid JSON at line {exc.lineno} column {exc.colno}") from None
    try:
        return document_from_json(data)
    except DocumentError:
        raise
    except CongamesError as exc:
        raise DocumentError("", str(exc)) from None


# -- saving -------------------------------------------------------------------------------


def num_json(v: Number):
    """JSON number: integral rationals as ints, others as floats."""
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else float(v)
    if isinstance(v, complex):
        return float(v.real)
    return v


def exact_str(v: Number) -> str:
    return str(v) if isinstance(v, (Fraction, int)) else repr(float(v))


def es_json(es: EventStructure) -> dict:
    """Immediate causality as ``[earlier, later]`` pairs and minimal forbidden sets."""
    return {
        "causes": sorted([a, b] for b in es.events for a in es.immediate[b]),
        "conflicts": sorted(sorted(f) for f in es.forbidden),
    }


def game_json(g: Game) -> dict:
    out = {"events": {e: g.polarity[e] for e in g.events}, **es_json(g.es)}
    if g.level is not None:
        out["level"] = {e: g.level[e] for e in g.events}
    return out


def _game_ref_json(doc: Document | None, g: Game):
    if doc is not None:
        for name, h in doc.games.items():
            if h == g:
                return name
    return game_json(g)


def valuation_json(v: ConfigValuation) -> dict:
    return {
        "mode": v.mode,
        "values": [
            {"configuration": fmt(x), "value": exact_str(v.values[x])}
            for x in sorted(v.values, key=config_key)
        ],
    }


def strategy_json(s: Strategy, doc: Document | None = None) -> dict:
    out: dict = {}
    if s.ports is not None:
        out["ports"] = [
            {"name": p.name, "game": _game_ref_json(doc, p.game), "direction": p.direction}
            for p in s.ports
        ]
    else:
        out["game"] = _game_ref_json(doc, s.target)
    out["events"] = list(s.es.events)
    out.update(es_json(s.es))
    out["map"] = {e: s.sigma[e] for e in s.es.events}
    out["polarity"] = {e: s.inner.polarity[e] for e in s.es.events}
    if s.valuation is not None:
        out["valuation"] = valuation_json(s.valuation)
    return out


def _complex_json(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def document_to_json(doc: Document) -> dict:
    out: dict = {"schema": SCHEMA}
    out["games"] = {n: game_json(g) for n, g in doc.games.items()}
    out["maps"] = {
        n: {"source": m.source, "target": m.target, "map": dict(sorted(m.map.mapping.items()))}
        for n, m in doc.maps.items()
    }
    strategies = {}
    for n, s in doc.strategies.items():
        js = strategy_json(s, doc)
        js.pop("polarity")
        strategies[n] = js
    out["strategies"] = strategies
    if doc.levels is not None:
        out["levels"] = {"levels": sorted(doc.levels.levels), "leq": sorted([a, b] for a, b in doc.levels.leq)}
    out["quantum"] = {
        n: {
            "events": list(q.es.events),
            **es_json(q.es),
            "dim": q.dim,
            "operators": {e: {"kind": k, "matrix": _complex_json(m)} for e, (k, m) in sorted(q.assign.items())},
            "rho": _complex_json(q.rho),
        }
        for n, q in doc.quantum.items()
    }
    out["symmetries"] = {
        n: {
            "subject": {sym.subject[0]: sym.subject[1]},
            "bijections": sorted(sorted([a, b] for a, b in t) for t in sym.family.bijections),
        }
        for n, sym in doc.symmetries.items()
    }
    out["payoffs"] = {
        n: {
            "table": [
                {"configuration": fmt(x), "value": exact_str(p.table[x])}
                for x in sorted(p.table, key=config_key)
            ]
        }
        for n, p in doc.payoffs.items()
    }
    out["winning"] = {n: [fmt(x) for x in sorted(w.winning, key=config_key)] for n, w in doc.winning.items()}
    return out


def save_document(doc: Document, path: str | Path) -> None:
    Path(path).write_text(json.dumps(document_to_json(doc), indent=2) + "\n", encoding="utf-8")
