"""Strategies as total polarity-preserving maps into a game.

A strategy may carry *ports*: named wires, each an input (contributing the
dual of its game) or an output.  The target game is then the juxtaposition
of the ports, with events ``port:event``.  Moving a port across the
turnstile (:func:`redeclare`) changes metadata only.  Composition matches
the output ports of the first strategy with the input ports of the second,
by position.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Iterable, Sequence

from .errors import ConstructionError, FixpointError, InputError, ResourceLimitError
from .es_core import (
    EsMap,
    EventStructure,
    Pullback,
    Violation,
    configurations,
    extensions,
    factorize,
    fmt,
    juxtapose,
    max_configs,
    minimal_inconsistent,
    pullback,
    tag,
    validate_es,
    validate_map,
)
from .games import IN, MINUS, OUT, PLUS, Game, Port, port_game


@dataclass(eq=False)
class Strategy:
    """``sigma`` maps events of ``inner`` to events of ``target``."""

    inner: Game
    target: Game
    sigma: dict[str, str]
    ports: tuple[Port, ...] | None = None
    valuation: Any = None
    warnings: list[str] = field(default_factory=list)
    name: str = ""

    @property
    def es(self) -> EventStructure:
        return self.inner.es

    @property
    def map(self) -> EsMap:
        return EsMap(self.inner.es, self.target.es, self.sigma)

    def image(self, xs: Iterable[str]) -> frozenset[str]:
        return frozenset(self.sigma[e] for e in xs)

    def port(self, name: str) -> Port:
        for p in self.ports or ():
            if p.name == name:
                return p
        raise InputError(f"no port named {name!r}")

    @property
    def in_ports(self) -> list[Port]:
        return [p for p in self.ports or () if p.direction == IN]

    @property
    def out_ports(self) -> list[Port]:
        return [p for p in self.ports or () if p.direction == OUT]

    def __repr__(self) -> str:
        return f"Strategy({self.name or '?'}: {len(self.inner.events)} events -> {self.target.name or '?'})"


def make_strategy(
    target: Game,
    es: EventStructure,
    sigma: dict[str, str],
    ports: Sequence[Port] | None = None,
    name: str = "",
    valuation: Any = None,
) -> Strategy:
    """Strategy whose inner polarity is inherited from the target along ``sigma``."""
    if ports is not None:
        target = port_game(ports)
        ports = tuple(ports)
    missing = [e for e in es.events if e not in sigma]
    if missing:
        raise InputError(f"sigma undefined on {missing}")
    pol = {e: target.polarity[sigma[e]] for e in es.events}
    return Strategy(Game(es, pol, name=name), target, dict(sigma), ports, valuation, [], name)


def between(a: Game, b: Game) -> tuple[Port, Port]:
    """Ports of a strategy from ``a`` to ``b``: ``L`` input, ``R`` output."""
    return (Port("L", a, IN), Port("R", b, OUT))


def validate_strategy(s: Strategy) -> list[Violation]:
    out = validate_es(s.inner.es)
    if out:
        return out
    rep = validate_map(s.map)
    out.extend(rep.violations)
    if not rep.total:
        out.append(Violation("sigma total", {}))
    for e in s.inner.events:
        if e in s.sigma and s.sigma[e] in s.target.polarity:
            if s.inner.polarity[e] != s.target.polarity[s.sigma[e]]:
                out.append(Violation("polarity preserved", {"event": e}))
    return out


# -- port plumbing ----------------------------------------------------------------


def as_between(s: Strategy) -> Strategy:
    """View a strategy in a game as one from the empty game (single output ``R``)."""
    if s.ports is not None:
        return s
    ports = (Port("R", s.target, OUT),)
    return replace(
        s,
        target=port_game(ports),
        sigma={e: tag("R", a) for e, a in s.sigma.items()},
        ports=ports,
    )


def redeclare(s: Strategy, names: Iterable[str]) -> Strategy:
    """Move the named ports across the turnstile, dualising their games."""
    names = set(names)
    if s.ports is None:
        raise InputError("strategy has no ports")
    unknown = names - {p.name for p in s.ports}
    if unknown:
        raise InputError(f"no ports named {sorted(unknown)}")
    ports = tuple(p.flipped() if p.name in names else p for p in s.ports)
    return replace(s, ports=ports)


def reorder_ports(s: Strategy, names: Sequence[str]) -> Strategy:
    by = {p.name: p for p in s.ports or ()}
    if sorted(names) != sorted(by):
        raise InputError(f"port order {list(names)} does not list {sorted(by)}")
    return replace(s, ports=tuple(by[n] for n in names))


def rename_ports(s: Strategy, renaming: dict[str, str]) -> Strategy:
    ports = tuple(p.renamed(renaming.get(p.name, p.name)) for p in s.ports or ())

    def move(ev: str) -> str:
        head, _, rest = ev.partition(":")
        return tag(renaming.get(head, head), rest)

    return replace(
        s,
        target=port_game(ports),
        sigma={e: move(a) for e, a in s.sigma.items()},
        ports=ports,
    )


def relabel(s: Strategy) -> Strategy:
    """Rename inner events after their images (``image`` or ``image#k``)."""
    fibers: dict[str, list[str]] = defaultdict(list)
    for e in s.inner.events:
        fibers[s.sigma[e]].append(e)
    names = {}
    for img, evs in fibers.items():
        evs.sort(key=lambda e: (len(s.inner.es.down[e]), e))
        if len(evs) == 1:
            names[evs[0]] = img
        else:
            for k, e in enumerate(evs, 1):
                names[e] = f"{img}#{k}"
    es = s.inner.es.rename(names.__getitem__)
    val = s.valuation
    if val is not None:
        val = val.renamed(es, names)
    return replace(
        s,
        inner=Game(es, {names[e]: p for e, p in s.inner.polarity.items()}, name=s.inner.name),
        sigma={names[e]: a for e, a in s.sigma.items()},
        valuation=val,
    )


# -- basic strategies --------------------------------------------------------------


def copycat(a: Game) -> Strategy:
    """Copy-cat on ``a``: every Player move waits for its Opponent copy."""
    ports = between(a, a)
    target = port_game(ports)
    causes = {e: set(target.es.causes[e]) for e in target.events}
    for e in a.events:
        left, right = tag("L", e), tag("R", e)
        if target.polarity[right] == PLUS:
            causes[right].add(left)
        else:
            causes[left].add(right)
    es = EventStructure(target.events, causes, target.es.forbidden)
    if any(v.rule == "causality acyclic" for v in validate_es(es)):
        raise ConstructionError("copy-cat order not antisymmetric")
    return make_strategy(target, es, {e: e for e in es.events}, ports, name=f"cc_{a.name}")


def minimum_strategy(target: Game, ports: Sequence[Port] | None = None) -> Strategy:
    """The strategy that only accepts Opponent moves with purely Opponent causes."""
    if ports is not None:
        target = port_game(ports)
    keep = [
        e for e in target.events if all(target.polarity[d] == MINUS for d in target.es.down[e])
    ]
    es = target.es.restrict(keep)
    return make_strategy(target, es, {e: e for e in keep}, ports, name="min")


def game_as_strategy(a: Game) -> Strategy:
    """Identity map on a game, viewed as a strategy in it."""
    return make_strategy(a, a.es, {e: e for e in a.events}, name=f"id_{a.name}")


def from_configurations(
    target: Game,
    family: Iterable[frozenset],
    ports: Sequence[Port] | None = None,
    name: str = "",
) -> Strategy:
    """Strategy with ``sigma`` the identity whose configurations are ``family``.

    Fails unless every event has a unique minimal configuration in the
    family and the resulting structure reproduces the family exactly.
    """
    if ports is not None:
        target = port_game(ports)
    fam = set(frozenset(x) for x in family)
    if frozenset() not in fam:
        raise ConstructionError("family lacks the empty configuration")
    events = sorted(set().union(*fam))
    history = {}
    for e in events:
        hs = [x for x in fam if e in x]
        h = frozenset.intersection(*hs)
        if h not in fam:
            raise ConstructionError(f"event {e} has no unique minimal history")
        history[e] = h
    causes = {e: history[e] - {e} for e in events}
    index = {e: i for i, e in enumerate(events)}
    masks = []
    for x in fam:
        m = 0
        for e in x:
            m |= 1 << index[e]
        masks.append(m)
    maximal = [m for m in set(masks) if not any(m != o and m & o == m for o in masks)]
    forbidden = minimal_inconsistent(
        events,
        lambda a, b: a in history[b],
        lambda mask: any(m & mask == mask for m in maximal),
    )
    es = EventStructure(events, causes, forbidden)
    if set(configurations(es)) != fam:
        raise ConstructionError("family is not the configurations of an event structure")
    return make_strategy(target, es, {e: e for e in events}, ports, name=name)


# -- checks ----------------------------------------------------------------------------


@dataclass
class StrategyReport:
    receptive: tuple[bool, dict | None]
    innocent: tuple[bool, dict | None]
    deterministic: tuple[bool, dict | None]

    def to_json(self) -> dict:
        return {
            k: {"holds": v[0], "witness": v[1]}
            for k, v in (
                ("receptive", self.receptive),
                ("innocent", self.innocent),
                ("deterministic", self.deterministic),
            )
        }


def check_receptive(s: Strategy) -> tuple[bool, dict | None]:
    S, A = s.inner.es, s.target.es
    for x in configurations(S):
        sx = s.image(x)
        ext = extensions(S, x)
        for a in sorted(extensions(A, sx)):
            if s.target.polarity[a] != MINUS:
                continue
            hits = sorted(e for e in ext if s.sigma[e] == a)
            if len(hits) != 1:
                return False, {"configuration": fmt(x), "move": a, "matches": hits}
    return True, None


def check_innocent(s: Strategy) -> tuple[bool, dict | None]:
    S, pol, A = s.inner.es, s.inner.polarity, s.target.es
    for e2 in S.events:
        for e1 in sorted(S.immediate[e2]):
            if pol[e1] == MINUS and pol[e2] == PLUS:
                continue
            if not A.leq(s.sigma[e1], s.sigma[e2]):
                return False, {"s": e1, "s'": e2}
    return True, None


def check_deterministic(s: Strategy) -> tuple[bool, dict | None]:
    S, pol = s.inner.es, s.inner.polarity
    for x in configurations(S):
        ext = sorted(extensions(S, x))
        for e1, e2 in itertools.permutations(ext, 2):
            if pol[e1] == PLUS and not S.is_consistent(x | {e1, e2}):
                return False, {"configuration": fmt(x), "s": e1, "s'": e2}
    return True, None


def check_strategy(s: Strategy) -> StrategyReport:
    return StrategyReport(check_receptive(s), check_innocent(s), check_deterministic(s))


# -- composition -------------------------------------------------------------------------


@dataclass
class Composition:
    """Interaction (before hiding) and the composite strategy (after)."""

    interaction: Pullback
    to_world: EsMap
    world: EventStructure
    hidden: Strategy


def _port_names_check(ports: Sequence[Port]) -> None:
    names = [p.name for p in ports]
    if len(set(names)) != len(names):
        raise InputError(f"port names clash after composition: {names}")


def compose(sigma: Strategy, tau: Strategy, limit: int | None = None) -> Composition:
    """Interaction of ``sigma`` and ``tau`` over their shared ports, then hiding.

    The outputs of ``sigma`` are matched with the inputs of ``tau`` by
    position and must carry equal games.
    """
    sigma, tau = as_between(sigma), as_between(tau)
    s_in, s_out = sigma.in_ports, sigma.out_ports
    t_in, t_out = tau.in_ports, tau.out_ports
    if len(s_out) != len(t_in) or any(p.game != q.game for p, q in zip(s_out, t_in)):
        raise InputError(
            "mismatched shared game: outputs "
            f"{[p.name for p in s_out]} vs inputs {[q.name for q in t_in]}"
        )
    result_ports = list(s_in) + list(t_out)
    _port_names_check(result_ports)
    shared = {q.name: p.name for p, q in zip(s_out, t_in)}
    s_side = {p.name: ("A/" if p.direction == IN else "B/") for p in sigma.ports}

    world = juxtapose(
        [("A/" + p.name, p.game.es) for p in s_in]
        + [("B/" + p.name, p.game.es) for p in s_out]
        + [("C/" + p.name, p.game.es) for p in t_out]
    )
    s_par_c = juxtapose([("S", sigma.es)] + [("C/" + p.name, p.game.es) for p in t_out])
    a_par_t = juxtapose([("A/" + p.name, p.game.es) for p in s_in] + [("T", tau.es)])

    def from_sigma(a: str) -> str:
        head, _, rest = a.partition(":")
        return s_side[head] + a

    def from_tau(a: str) -> str:
        head, _, rest = a.partition(":")
        if head in shared:
            return "B/" + tag(shared[head], rest)
        return "C/" + a

    m1 = {}
    for e in s_par_c.events:
        m1[e] = from_sigma(sigma.sigma[e[2:]]) if e.startswith("S:") else e
    m2 = {}
    for e in a_par_t.events:
        m2[e] = from_tau(tau.sigma[e[2:]]) if e.startswith("T:") else e
    f = EsMap(s_par_c, world, m1)
    g = EsMap(a_par_t, world, m2)
    pb = pullback(f, g, limit=limit)
    to_world = EsMap(pb.es, world, {e: m1[pb.pi1.mapping[e]] for e in pb.es.events})

    target = port_game(result_ports)
    visible = {}
    for e, w in to_world.mapping.items():
        if w.startswith("A/") or w.startswith("C/"):
            visible[e] = w[2:]
    proj, _, t = factorize(EsMap(pb.es, target.es, visible))
    hidden = make_strategy(target, proj, dict(t.mapping), result_ports)
    hidden = relabel(hidden)
    return Composition(pb, to_world, world, hidden)


def tensor(s1: Strategy, s2: Strategy) -> Strategy:
    """Parallel composition of two strategies with disjoint port names."""
    s1, s2 = as_between(s1), as_between(s2)
    ports = list(s1.ports) + list(s2.ports)
    _port_names_check(ports)
    es = juxtapose([("1", s1.es), ("2", s2.es)])
    sig = {tag("1", e): a for e, a in s1.sigma.items()}
    sig.update({tag("2", e): a for e, a in s2.sigma.items()})
    return relabel(make_strategy(port_game(ports), es, sig, ports))


# -- sums, conjunction -------------------------------------------------------------------------


def _same_interface(strategies: Sequence[Strategy]) -> None:
    first = strategies[0]
    for s in strategies[1:]:
        if s.target != first.target:
            raise InputError("strategies are over different games")
        if (s.ports is None) != (first.ports is None) or (
            s.ports is not None and list(s.ports) != list(first.ports)
        ):
            raise InputError("strategies have different ports")


def nsum(
    strategies: Sequence[Strategy],
    target: Game | None = None,
    ports: Sequence[Port] | None = None,
) -> Strategy:
    """Nondeterministic sum; initial Opponent events with equal image are shared.

    The empty sum is the minimum strategy of ``target`` (or of ``ports``).
    A warning is attached when the result is not receptive.
    """
    if not strategies:
        if target is None and ports is None:
            raise InputError("empty sum needs a game")
        return minimum_strategy(target if target is not None else port_game(ports), ports)
    _same_interface(strategies)
    first = strategies[0]
    warnings = []
    # initial Opponent events per component, keyed by image
    initial: list[dict[str, str]] = []
    for i, s in enumerate(strategies):
        seen: dict[str, list[str]] = defaultdict(list)
        for e in s.inner.events:
            if not s.es.causes[e] and s.inner.polarity[e] == MINUS:
                seen[s.sigma[e]].append(e)
        dup = {a for a, es in seen.items() if len(es) > 1}
        if dup:
            warnings.append(f"summand {i} has several initial copies of {sorted(dup)}; not shared")
        initial.append({es_[0]: a for a, es_ in seen.items() if len(es_) == 1})
    counts: dict[str, int] = defaultdict(int)
    for d in initial:
        for a in d.values():
            counts[a] += 1
    shared_images = {a for a, c in counts.items() if c > 1}

    def name(i: int, e: str) -> str:
        a = initial[i].get(e)
        if a is not None and a in shared_images:
            return tag("0", a)
        return tag(str(i + 1), e)

    events, causes, forbidden, sig = set(), defaultdict(set), [], {}
    private_roots: list[list[str]] = []
    for i, s in enumerate(strategies):
        roots = []
        for e in s.inner.events:
            n = name(i, e)
            events.add(n)
            sig[n] = s.sigma[e]
            causes[n] |= {name(i, c) for c in s.es.causes[e]}
            if not n.startswith("0:") and all(name(i, c).startswith("0:") for c in s.es.down[e] - {e}):
                roots.append(n)
        for fs in s.es.forbidden:
            forbidden.append([name(i, e) for e in fs])
        private_roots.append(roots)
    for i, j in itertools.combinations(range(len(strategies)), 2):
        for u in private_roots[i]:
            for v in private_roots[j]:
                forbidden.append([u, v])
    es = EventStructure(events, causes, forbidden)
    out = make_strategy(first.target, es, sig, first.ports, name="sum")
    out = relabel(out)
    ok, wit = check_receptive(out)
    if not ok:
        warnings.append(f"sum is not receptive: {wit}")
    out.warnings = warnings
    return out


def conjunction(s1: Strategy, s2: Strategy) -> Strategy:
    """Pullback of two strategies over the same game: play where both agree."""
    _same_interface([s1, s2])
    pb = pullback(s1.map, s2.map)
    sig = {e: s1.sigma[pb.pi1.mapping[e]] for e in pb.es.events}
    out = make_strategy(s1.target, pb.es, sig, s1.ports, name="conj")
    return relabel(out)


# -- trace and recursion ------------------------------------------------------------------------


def trace(t: Strategy, x: str, y: str) -> Strategy:
    """Feed output port ``y`` back into input port ``x`` through copy-cat."""
    if t.ports is None:
        raise InputError("trace needs a strategy with ports")
    px, py = t.port(x), t.port(y)
    if px.direction != IN or py.direction != OUT:
        raise InputError("trace needs an input and an output port")
    if px.game != py.game:
        raise InputError("trace ports carry different games")
    a = px.game
    gamma = [p.name for p in t.in_ports if p.name != x]
    delta = [p.name for p in t.out_ports if p.name != y]
    t1 = redeclare(t, delta + [x])
    t1 = reorder_ports(t1, gamma + delta + [x, y])
    loop = rename_ports(copycat(a), {"L": y, "R": x})
    loop = redeclare(loop, [x])
    loop = reorder_ports(loop, [x, y])
    hidden = compose(t1, loop).hidden
    return redeclare(hidden, delta)


def substructure_embedding(
    s1: Strategy, s2: Strategy, surjective: bool = False, limit: int | None = None
) -> dict[str, str] | None:
    """Least injective ``f`` with ``sigma1 = sigma2 f`` making ``s1`` a down-closed substructure.

    With ``surjective`` this is a polarity-respecting isomorphism.
    """
    if s1.target != s2.target:
        return None
    S1, S2 = s1.es, s2.es
    if surjective and len(S1.events) != len(S2.events):
        return None
    if len(S1.events) > len(S2.events):
        return None
    limit = max_configs() if limit is None else limit
    fibers: dict[str, list[str]] = defaultdict(list)
    for e in S2.events:
        fibers[s2.sigma[e]].append(e)
    order = sorted(S1.events, key=lambda e: (len(S1.down[e]), e))
    for e in order:
        if len(fibers.get(s1.sigma[e], ())) == 0:
            return None
    configs1 = set(configurations(S1))
    nodes = 0
    assign: dict[str, str] = {}
    used: set[str] = set()

    def fits(e: str, c: str) -> bool:
        if s1.inner.polarity[e] != s2.inner.polarity[c]:
            return False
        for d, dc in assign.items():
            if S1.leq(d, e) != S2.leq(dc, c) or S1.leq(e, d) != S2.leq(c, dc):
                return False
            if S1.is_consistent({d, e}) != S2.is_consistent({dc, c}):
                return False
        return True

    def leaf() -> bool:
        img = set(assign.values())
        if any(not S2.down[c] <= img for c in img):
            return False
        inv = {c: e for e, c in assign.items()}
        sub = [frozenset(inv[c] for c in y) for y in configurations(S2) if y <= img]
        return set(sub) == configs1

    def search(i: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > limit:
            raise ResourceLimitError("embedding search", limit)
        if i == len(order):
            return leaf()
        e = order[i]
        for c in sorted(fibers[s1.sigma[e]]):
            if c in used or not fits(e, c):
                continue
            assign[e] = c
            used.add(c)
            if search(i + 1):
                return True
            del assign[e]
            used.discard(c)
        return False

    return dict(assign) if search(0) else None


def iso_equivalent(s1: Strategy, s2: Strategy) -> tuple[bool, dict[str, str] | None]:
    """Polarity-respecting isomorphism of inner structures commuting with ``sigma``."""
    w = substructure_embedding(s1, s2, surjective=True)
    return w is not None, w


def mu_fix(
    body: Callable[[Strategy], Strategy], a: Game, fuel: int = 64, port: str = "y"
) -> Strategy:
    """Iterate ``body`` from the minimum strategy of ``a`` until it stabilises."""
    if fuel < 1:
        raise InputError("fuel must be positive")
    x = minimum_strategy(a, [Port(port, a, OUT)])
    for n in range(fuel):
        nxt = body(x)
        if substructure_embedding(x, nxt) is None:
            raise FixpointError(f"not monotone in the substructure order at step {n}", step=n)
        if iso_equivalent(x, nxt)[0]:
            return x
        x = nxt
    raise FixpointError(f"fuel exhausted after {fuel} steps", step=fuel)
