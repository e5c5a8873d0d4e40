"""A small typed language of strategies: judgements ``x:A |- t -| y:B``.

Variables on the left are inputs, those on the right outputs.  Moving a
variable across the turnstile dualises its game and leaves the denoted
strategy unchanged.  See ``docs/grammar.ebnf`` for the concrete syntax.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Iterator, Union

from .errors import ConstructionError, InputError
from .es_core import EsMap, configurations, tag
from .games import IN, OUT, Game, Port, dual, gsum, par, port_game, scott_leq, split
from .strategy import (
    Strategy,
    compose,
    conjunction,
    from_configurations,
    minimum_strategy,
    mu_fix,
    nsum,
    redeclare,
    reorder_ports,
    trace,
)

KEYWORDS = frozenset({"sum", "trace", "mu", "push", "pull", "inj", "Sum"})
LEFT, RIGHT = "left", "right"
DEFAULT_FUEL = 64


class DslSyntaxError(InputError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line, self.column = line, column


class TypeCheckError(InputError):
    def __init__(self, rule: str, message: str):
        super().__init__(f"{rule}: {message}")
        self.rule = rule


# -- abstract syntax ------------------------------------------------------------


@dataclass(frozen=True)
class GName:
    name: str


@dataclass(frozen=True)
class GDual:
    game: "GameExpr"


@dataclass(frozen=True)
class GPar:
    left: "GameExpr"
    right: "GameExpr"


@dataclass(frozen=True)
class GSum:
    items: tuple["GameExpr", ...]


GameExpr = Union[GName, GDual, GPar, GSum]


@dataclass(frozen=True)
class PVar:
    name: str


@dataclass(frozen=True)
class PInj:
    index: int
    arg: "PExpr"


@dataclass(frozen=True)
class PPair:
    left: "PExpr"
    right: "PExpr"


@dataclass(frozen=True)
class PApp:
    fn: str
    arg: "PExpr"


PExpr = Union[PVar, PInj, PPair, PApp]


@dataclass(frozen=True)
class CopyCat:
    """``lo <=[game] hi``: outputs in ``lo``, inputs in ``hi``."""

    lo: PExpr
    game: GameExpr
    hi: PExpr


@dataclass(frozen=True)
class Compose:
    first: "Term"
    second: "Term"
    shared: tuple[str, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class NSum:
    items: tuple["Term", ...]


@dataclass(frozen=True)
class Conj:
    left: "Term"
    right: "Term"


@dataclass(frozen=True)
class Trace:
    inp: str
    out: str
    body: "Term"


@dataclass(frozen=True)
class Mu:
    var: str
    game: GameExpr
    body: "Term"


@dataclass(frozen=True)
class LiftMap:
    """``push[f](x, y)`` or ``pull[f](y, x)`` for a map ``f`` from x's game to y's."""

    direction: str
    fn: str
    inp: str
    out: str


Term = Union[CopyCat, Compose, NSum, Conj, Trace, Mu, LiftMap]


@dataclass(frozen=True)
class Judgement:
    left: tuple[tuple[str, GameExpr], ...]
    term: Term
    right: tuple[tuple[str, GameExpr], ...]


# -- lexer and parser ---------------------------------------------------------------

_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+|#[^\n]*)"
    r"|(?P<sym>\|-|-\||<=|/\\|\|\||[()\[\],:;.=~<>])"
    r"|(?P<int>[0-9]+)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    out, pos, line, col = [], 0, 1, 1
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            out.append(Token(kind, s, line, col))
        nl = s.count("\n")
        if nl:
            line += nl
            col = len(s) - s.rfind("\n")
        else:
            col += len(s)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str) -> DslSyntaxError:
        t = self.tok
        found = t.text or "end of input"
        return DslSyntaxError(f"{msg}, found {found!r}", t.line, t.column)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("sym", "ident")

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        t = self.tok
        self.i += 1
        return t

    def ident(self) -> str:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            raise self.error("expected an identifier")
        self.i += 1
        return t.text

    def integer(self) -> int:
        t = self.tok
        if t.kind != "int":
            raise self.error("expected an integer")
        self.i += 1
        return int(t.text)

    # games

    def game(self) -> GameExpr:
        g = self.game_atom()
        while self.at("||"):
            self.i += 1
            g = GPar(g, self.game_atom())
        return g

    def game_atom(self) -> GameExpr:
        if self.at("~"):
            self.i += 1
            return GDual(self.game_atom())
        if self.at("("):
            self.i += 1
            g = self.game()
            self.expect(")")
            return g
        if self.at("Sum"):
            self.i += 1
            self.expect("[")
            items = [self.game()]
            while self.at(","):
                self.i += 1
                items.append(self.game())
            self.expect("]")
            return GSum(tuple(items))
        return GName(self.ident())

    # configuration expressions

    def pexpr(self) -> PExpr:
        if self.at("inj"):
            self.i += 1
            self.expect("<")
            j = self.integer()
            self.expect(">")
            return PInj(j, self.pexpr())
        if self.at("("):
            self.i += 1
            a = self.pexpr()
            self.expect(",")
            b = self.pexpr()
            self.expect(")")
            return PPair(a, b)
        name = self.ident()
        if self.at("("):
            self.i += 1
            arg = self.pexpr()
            self.expect(")")
            return PApp(name, arg)
        return PVar(name)

    # terms

    def term(self) -> Term:
        if self.at("sum"):
            self.i += 1
            self.expect("(")
            items = []
            if not self.at(")"):
                items.append(self.term())
                while self.at(","):
                    self.i += 1
                    items.append(self.term())
            self.expect(")")
            return NSum(tuple(items))
        if self.at("trace"):
            self.i += 1
            x = self.ident()
            self.expect("=")
            y = self.ident()
            self.expect(".")
            return Trace(x, y, self.term())
        if self.at("mu"):
            self.i += 1
            x = self.ident()
            self.expect(":")
            g = self.game()
            self.expect(".")
            return Mu(x, g, self.term())
        if self.at("push") or self.at("pull"):
            direction = self.tok.text
            self.i += 1
            self.expect("[")
            f = self.ident()
            self.expect("]")
            self.expect("(")
            a = self.ident()
            self.expect(",")
            b = self.ident()
            self.expect(")")
            return LiftMap(direction, f, a, b)
        if self.at("("):
            start = self.i
            try:
                self.i += 1
                t = self.term()
                if self.at(";"):
                    self.i += 1
                    u = self.term()
                    self.expect(")")
                    return Compose(t, u)
                if self.at("/\\"):
                    self.i += 1
                    u = self.term()
                    self.expect(")")
                    return Conj(t, u)
                raise self.error("expected ';' or '/\\'")
            except DslSyntaxError as first:
                far = self.i
                self.i = start
                try:
                    return self.copycat()
                except DslSyntaxError:
                    if self.i >= far:
                        raise
                    self.i = far
                    raise first from None
        return self.copycat()

    def copycat(self) -> CopyCat:
        lo = self.pexpr()
        self.expect("<=")
        self.expect("[")
        g = self.game()
        self.expect("]")
        return CopyCat(lo, g, self.pexpr())

    def context(self, stop: str) -> tuple[tuple[str, GameExpr], ...]:
        out = []
        if self.at(stop) or self.tok.kind == "eof":
            return ()
        while True:
            v = self.ident()
            self.expect(":")
            out.append((v, self.game()))
            if not self.at(","):
                return tuple(out)
            self.i += 1

    def judgement(self) -> Judgement:
        left = self.context("|-")
        self.expect("|-")
        t = self.term()
        self.expect("-|")
        right = self.context("")
        if self.tok.kind != "eof":
            raise self.error("expected end of input")
        return Judgement(left, t, right)


def parse(text: str) -> Judgement:
    """Parse a judgement; errors carry line and column."""
    return _Parser(text).judgement()


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    if p.tok.kind != "eof":
        raise p.error("expected end of input")
    return t


# -- pretty printing -----------------------------------------------------------------


def pretty_game(g: GameExpr) -> str:
    if isinstance(g, GName):
        return g.name
    if isinstance(g, GDual):
        inner = pretty_game(g.game)
        return "~" + (f"({inner})" if isinstance(g.game, GPar) else inner)
    if isinstance(g, GPar):
        r = pretty_game(g.right)
        return f"{pretty_game(g.left)} || " + (f"({r})" if isinstance(g.right, GPar) else r)
    return "Sum[" + ", ".join(pretty_game(x) for x in g.items) + "]"


def pretty_pexpr(p: PExpr) -> str:
    if isinstance(p, PVar):
        return p.name
    if isinstance(p, PInj):
        return f"inj<{p.index}> {pretty_pexpr(p.arg)}"
    if isinstance(p, PPair):
        return f"({pretty_pexpr(p.left)}, {pretty_pexpr(p.right)})"
    return f"{p.fn}({pretty_pexpr(p.arg)})"


def pretty_term(t: Term) -> str:
    if isinstance(t, CopyCat):
        return f"{pretty_pexpr(t.lo)} <=[{pretty_game(t.game)}] {pretty_pexpr(t.hi)}"
    if isinstance(t, Compose):
        return f"({pretty_term(t.first)} ; {pretty_term(t.second)})"
    if isinstance(t, Conj):
        return f"({pretty_term(t.left)} /\\ {pretty_term(t.right)})"
    if isinstance(t, NSum):
        return "sum(" + ", ".join(pretty_term(u) for u in t.items) + ")"
    if isinstance(t, Trace):
        return f"trace {t.inp}={t.out}. {pretty_term(t.body)}"
    if isinstance(t, Mu):
        return f"mu {t.var}:{pretty_game(t.game)}. {pretty_term(t.body)}"
    return f"{t.direction}[{t.fn}]({t.inp}, {t.out})"


def pretty(j: Judgement) -> str:
    def ctx(c):
        return ", ".join(f"{v}:{pretty_game(g)}" for v, g in c)

    left, right = ctx(j.left), ctx(j.right)
    return (left + " " if left else "") + "|- " + pretty_term(j.term) + " -|" + (" " + right if right else "")


# -- environment and type checking ------------------------------------------------------


@dataclass
class MapDef:
    map: EsMap
    source: str
    target: str


@dataclass
class Env:
    games: dict[str, Game] = field(default_factory=dict)
    maps: dict[str, MapDef] = field(default_factory=dict)

    def game(self, g: GameExpr) -> Game:
        if isinstance(g, GName):
            if g.name not in self.games:
                raise TypeCheckError("unknown game", g.name)
            return self.games[g.name]
        if isinstance(g, GDual):
            return dual(self.game(g.game))
        if isinstance(g, GPar):
            return par(self.game(g.left), self.game(g.right))
        return gsum([self.game(x) for x in g.items])

    def mapdef(self, name: str) -> MapDef:
        if name not in self.maps:
            raise TypeCheckError("unknown map", name)
        return self.maps[name]


def _as(side: str, placed: tuple[str, Game]) -> Game:
    """Game of a variable once placed on ``side`` of the turnstile."""
    s, g = placed
    return g if s == side else dual(g)


def _derive(p: PExpr, g: Game, gx: GameExpr | None, env: Env, out: dict[str, Game]) -> None:
    if isinstance(p, PVar):
        if p.name in out:
            raise TypeCheckError("linearity", f"variable {p.name} used twice")
        out[p.name] = g
    elif isinstance(p, PInj):
        if not isinstance(gx, GSum):
            raise TypeCheckError("injection", "inj<j> needs a game written Sum[...]")
        if not 1 <= p.index <= len(gx.items):
            raise TypeCheckError("injection", f"no component {p.index} in a sum of {len(gx.items)}")
        sub = gx.items[p.index - 1]
        _derive(p.arg, env.game(sub), sub, env, out)
    elif isinstance(p, PPair):
        if not isinstance(gx, GPar):
            raise TypeCheckError("pairing", "(p, q) needs a game written A || B")
        _derive(p.left, env.game(gx.left), gx.left, env, out)
        _derive(p.right, env.game(gx.right), gx.right, env, out)
    else:
        d = env.mapdef(p.fn)
        if env.games.get(d.target) != g:
            raise TypeCheckError("map application", f"{p.fn} does not map into this game")
        _derive(p.arg, env.games[d.source], GName(d.source), env, out)


def _copycat_parts(t: Term, env: Env) -> tuple[PExpr, Game, GameExpr | None, PExpr]:
    if isinstance(t, CopyCat):
        return t.lo, env.game(t.game), t.game, t.hi
    d = env.mapdef(t.fn)
    b = env.games[d.target]
    if t.direction == "push":
        # x:A |- y <=[B] f(x) -| y:B
        return PVar(t.out), b, GName(d.target), PApp(t.fn, PVar(t.inp))
    # y:B |- f(x) <=[B] y -| x:A
    return PApp(t.fn, PVar(t.out)), b, GName(d.target), PVar(t.inp)


def _eval(p: PExpr, val: dict[str, frozenset], env: Env) -> frozenset:
    if isinstance(p, PVar):
        return val[p.name]
    if isinstance(p, PInj):
        return frozenset(tag(str(p.index), e) for e in _eval(p.arg, val, env))
    if isinstance(p, PPair):
        return frozenset(tag("L", e) for e in _eval(p.left, val, env)) | frozenset(
            tag("R", e) for e in _eval(p.right, val, env)
        )
    return env.mapdef(p.fn).map.image(_eval(p.arg, val, env))


def _vars(p: PExpr) -> list[str]:
    if isinstance(p, PVar):
        return [p.name]
    if isinstance(p, PPair):
        return _vars(p.left) + _vars(p.right)
    return _vars(p.arg)


Signature = dict  # variable -> (canonical side, game)


def _same_signature(a: Signature, b: Signature) -> bool:
    return set(a) == set(b) and all(_as(LEFT, a[v]) == _as(LEFT, b[v]) for v in a)


def _check(t: Term, env: Env) -> tuple[Term, Signature | None]:
    """Annotated term and the canonical placement of its free variables."""
    if isinstance(t, (CopyCat, LiftMap)):
        if isinstance(t, LiftMap) and t.inp == t.out:
            raise TypeCheckError("linearity", f"variable {t.inp} used twice")
        lo, g, gx, hi = _copycat_parts(t, env)
        outs: dict[str, Game] = {}
        ins: dict[str, Game] = {}
        _derive(lo, g, gx, env, outs)
        _derive(hi, g, gx, env, ins)
        both = set(outs) & set(ins)
        if both:
            raise TypeCheckError("linearity", f"variable {sorted(both)[0]} used twice")
        empty = {v: frozenset() for v in [*outs, *ins]}
        if not scott_leq(g, _eval(lo, empty, env), _eval(hi, empty, env)):
            raise TypeCheckError("copy-cat side condition", "p[0] is not below p'[0]")
        sig = {v: (RIGHT, outs[v]) for v in _vars(lo)}
        sig.update({v: (LEFT, ins[v]) for v in _vars(hi)})
        return t, sig
    if isinstance(t, Compose):
        t1, s1 = _check(t.first, env)
        t2, s2 = _check(t.second, env)
        if s1 is None or s2 is None:
            raise TypeCheckError("composition", "cannot infer the context of an empty sum")
        shared = sorted(set(s1) & set(s2))
        for v in shared:
            if _as(RIGHT, s1[v]) != _as(LEFT, s2[v]):
                raise TypeCheckError("shared context mismatch", f"variable {v} carries different games")
        sig = {v: (LEFT, _as(LEFT, s1[v])) for v in s1 if v not in shared}
        sig.update({v: (RIGHT, _as(RIGHT, s2[v])) for v in s2 if v not in shared})
        return Compose(t1, t2, tuple(shared)), sig
    if isinstance(t, (NSum, Conj)):
        items = t.items if isinstance(t, NSum) else (t.left, t.right)
        checked = [_check(u, env) for u in items]
        sigs = [s for _, s in checked if s is not None]
        for s in sigs[1:]:
            if not _same_signature(sigs[0], s):
                rule = "sum" if isinstance(t, NSum) else "conjunction"
                raise TypeCheckError(rule, "components have different contexts")
        terms = tuple(u for u, _ in checked)
        new = NSum(terms) if isinstance(t, NSum) else Conj(*terms)
        return new, (sigs[0] if sigs else None)
    if isinstance(t, Trace):
        body, s = _check(t.body, env)
        if s is None or t.inp not in s or t.out not in s or t.inp == t.out:
            raise TypeCheckError("trace", f"{t.inp} and {t.out} must be distinct free variables")
        if _as(LEFT, s[t.inp]) != _as(RIGHT, s[t.out]):
            raise TypeCheckError("trace", "traced variables carry different games")
        return Trace(t.inp, t.out, body), {v: p for v, p in s.items() if v not in (t.inp, t.out)}
    if isinstance(t, Mu):
        a = env.game(t.game)
        body, s = _check(t.body, env)
        if s is None or t.var not in s:
            raise TypeCheckError("recursion", f"body must use {t.var}")
        rest = [v for v in s if v != t.var]
        if len(rest) != 1:
            raise TypeCheckError("recursion", "general recursion requires δ_Γ (unsupported)")
        (y,) = rest
        if _as(LEFT, s[t.var]) != a or _as(RIGHT, s[y]) != a:
            raise TypeCheckError("recursion", "recursion variables must carry the declared game")
        return Mu(t.var, t.game, body), {y: (RIGHT, a)}
    raise TypeCheckError("syntax", f"unknown term {t!r}")


@dataclass
class TypedJudgement:
    judgement: Judgement
    term: Term
    left: list[tuple[str, Game]]
    right: list[tuple[str, Game]]

    @property
    def ports(self) -> list[Port]:
        return [Port(v, g, IN) for v, g in self.left] + [Port(v, g, OUT) for v, g in self.right]


def typecheck(j: Judgement, env: Env) -> TypedJudgement:
    names = [v for v, _ in j.left] + [v for v, _ in j.right]
    dup = {v for v in names if names.count(v) > 1}
    if dup:
        raise TypeCheckError("distinct variables", f"{sorted(dup)[0]} declared twice")
    if isinstance(j.term, Mu) and j.left:
        raise TypeCheckError("recursion", "general recursion requires δ_Γ (unsupported)")
    left = [(v, env.game(g)) for v, g in j.left]
    right = [(v, env.game(g)) for v, g in j.right]
    term, sig = _check(j.term, env)
    if sig is not None:
        for v in names:
            if v not in sig:
                raise TypeCheckError("context", f"variable {v} is not used by the term")
        for v in sig:
            if v not in names:
                raise TypeCheckError("context", f"variable {v} is unbound")
        for side, ctx in ((LEFT, left), (RIGHT, right)):
            for v, g in ctx:
                if _as(side, sig[v]) != g:
                    raise TypeCheckError(
                        "duality", f"variable {v} is declared with a game that does not match its use"
                    )
    return TypedJudgement(j, term, left, right)


# -- elaboration ----------------------------------------------------------------------------


def _arrange(s: Strategy, left: list[str], right: list[str]) -> Strategy:
    """Move ports across the turnstile as needed and put them in order."""
    flip = [p.name for p in s.ports if (p.direction == IN) != (p.name in left)]
    if flip:
        s = redeclare(s, flip)
    return reorder_ports(s, list(left) + list(right))


def _sides(s: Strategy) -> tuple[list[str], list[str]]:
    return [p.name for p in s.in_ports], [p.name for p in s.out_ports]


def _relation_strategy(t: Term, env: Env) -> Strategy:
    lo, g, gx, hi = _copycat_parts(t, env)
    outs: dict[str, Game] = {}
    ins: dict[str, Game] = {}
    _derive(lo, g, gx, env, outs)
    _derive(hi, g, gx, env, ins)
    ports = [Port(v, ins[v], IN) for v in _vars(hi)] + [Port(v, outs[v], OUT) for v in _vars(lo)]
    pg = port_game(ports)
    family = []
    for z in configurations(pg.es):
        val = {p.name: split(pg, p.name, z) for p in ports}
        a, b = _eval(lo, val, env), _eval(hi, val, env)
        if g.es.is_configuration(a) and g.es.is_configuration(b) and scott_leq(g, a, b):
            family.append(z)
    try:
        return from_configurations(pg, family, ports, name=pretty_term(t))
    except ConstructionError as exc:
        raise ConstructionError(f"unsupported general copy-cat term: {exc}") from None


def _elab(t: Term, env: Env, hint: tuple[list[Port], list[str], list[str]], fuel: int) -> Strategy:
    if isinstance(t, (CopyCat, LiftMap)):
        return _relation_strategy(t, env)
    if isinstance(t, Compose):
        s1 = _elab(t.first, env, hint, fuel)
        s2 = _elab(t.second, env, hint, fuel)
        shared = list(t.shared)
        l1 = [p.name for p in s1.ports if p.name not in shared]
        r2 = [p.name for p in s2.ports if p.name not in shared]
        s1 = _arrange(s1, l1, shared)
        s2 = _arrange(s2, shared, r2)
        return compose(s1, s2).hidden
    if isinstance(t, (NSum, Conj)):
        items = t.items if isinstance(t, NSum) else (t.left, t.right)
        known = [_elab(u, env, hint, fuel) for u in items if not (isinstance(u, NSum) and not u.items)]
        if known:
            left, right = _sides(known[0])
            ports = list(known[0].ports)
        else:
            ports, left, right = hint
        parts = []
        for u in items:
            if isinstance(u, NSum) and not u.items:
                parts.append(minimum_strategy(port_game(ports), ports))
            else:
                parts.append(_arrange(known.pop(0), left, right))
        if isinstance(t, Conj):
            return conjunction(*parts)
        return nsum(parts, ports=ports)
    if isinstance(t, Trace):
        s = _elab(t.body, env, hint, fuel)
        left = [p.name for p in s.ports if p.name != t.inp and p.name != t.out and p.direction == IN]
        right = [p.name for p in s.ports if p.name != t.inp and p.name != t.out and p.direction == OUT]
        s = _arrange(s, left + [t.inp], [t.out] + right)
        return trace(s, t.inp, t.out)
    if isinstance(t, Mu):
        a = env.game(t.game)
        body = _elab(t.body, env, hint, fuel)
        (y,) = [p.name for p in body.ports if p.name != t.var]
        body = _arrange(body, [t.var], [y])

        def step(x: Strategy) -> Strategy:
            return compose(x, body).hidden

        return mu_fix(step, a, fuel=fuel, port=y)
    raise InputError(f"cannot elaborate {t!r}")


def elaborate(tj: TypedJudgement, env: Env, fuel: int = DEFAULT_FUEL) -> Strategy:
    """Denotation of a checked judgement, ports ordered as its contexts."""
    left = [v for v, _ in tj.left]
    right = [v for v, _ in tj.right]
    s = _elab(tj.term, env, (tj.ports, left, right), fuel)
    s = _arrange(s, left, right)
    s.name = pretty(tj.judgement)
    return s


def run(text: str, env: Env, fuel: int = DEFAULT_FUEL) -> Strategy:
    return elaborate(typecheck(parse(text), env), env, fuel)


def subterms(t: Term) -> Iterator[Term]:
    yield t
    if isinstance(t, Compose):
        yield from subterms(t.first)
        yield from subterms(t.second)
    elif isinstance(t, Conj):
        yield from subterms(t.left)
        yield from subterms(t.right)
    elif isinstance(t, NSum):
        for u in t.items:
            yield from subterms(u)
    elif isinstance(t, (Trace, Mu)):
        yield from subterms(t.body)


def rewire(j: Judgement, var: str) -> Judgement:
    """Move ``var`` across the turnstile, dualising its declared game."""
    left = [(v, g) for v, g in j.left if v != var]
    right = [(v, g) for v, g in j.right if v != var]
    moved_left = [(v, g) for v, g in j.left if v == var]
    moved_right = [(v, g) for v, g in j.right if v == var]
    if not moved_left and not moved_right:
        raise InputError(f"no variable {var}")
    for v, g in moved_left:
        right.append((v, _undual(g)))
    for v, g in moved_right:
        left.append((v, _undual(g)))
    return replace(j, left=tuple(left), right=tuple(right))


def _undual(g: GameExpr) -> GameExpr:
    return g.game if isinstance(g, GDual) else GDual(g)
