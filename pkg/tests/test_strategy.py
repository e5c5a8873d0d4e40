from __future__ import annotations

import itertools

import pytest

from congames import fixtures as fx
from congames.errors import FixpointError, InputError
from congames.es_core import build, configurations, validate_es
from congames.games import IN, OUT, Port, dual, empty_game, is_race_free, make_game, split
from congames.prob import STRATEGY, constant_valuation, validate_valuation
from congames.strategy import (
    as_between,
    check_deterministic,
    check_innocent,
    check_receptive,
    check_strategy,
    compose,
    conjunction,
    copycat,
    from_configurations,
    iso_equivalent,
    make_strategy,
    minimum_strategy,
    mu_fix,
    nsum,
    redeclare,
    rename_ports,
    reorder_ports,
    tensor,
    trace,
    validate_strategy,
)

from .oracles import brute_configurations, brute_iso, brute_scott_leq

GAMES = [fx.g_seq(), fx.g_conc(), fx.g_race(), fx.g_watch(), fx.g_choice(), fx.g_chain(), fx.g_player(), fx.g_two()]


def left_identity(s):
    """``copycat ; s`` with ``s`` read as a strategy from the dual of its game."""
    b = redeclare(as_between(s), ["R"])
    out = compose(copycat(dual(s.target)), b).hidden
    return rename_ports(out, {"L": "R"}), b


def right_identity(s):
    b = as_between(s)
    return compose(b, copycat(s.target)).hidden, b


# -- copy-cat ------------------------------------------------------------------


def test_copycat_seq_edges():
    cc = copycat(fx.g_seq())
    assert sorted(cc.es.events) == ["L:o", "L:p", "R:o", "R:p"]
    immediate = sorted((a, b) for b in cc.es.events for a in cc.es.immediate[b])
    assert immediate == [("L:o", "L:p"), ("L:p", "R:p"), ("R:o", "L:o")]
    assert cc.inner.polarity == {"L:o": "+", "L:p": "-", "R:o": "-", "R:p": "+"}


def test_copycat_empty():
    assert copycat(empty_game()).es.events == ()


@pytest.mark.parametrize("g", GAMES, ids=lambda g: g.name)
def test_copycat_configs_are_scott_pairs(g):
    cc = copycat(g)
    got = set(configurations(cc.es))
    pairs = {
        frozenset({f"L:{e}" for e in x1} | {f"R:{e}" for e in x2})
        for x1 in brute_configurations(g.es)
        for x2 in brute_configurations(g.es)
        if brute_scott_leq(g, x2, x1)
    }
    assert got == pairs


@pytest.mark.parametrize("g", GAMES, ids=lambda g: g.name)
def test_copycat_receptive_innocent(g):
    rep = check_strategy(copycat(g))
    assert rep.receptive[0] and rep.innocent[0]
    assert validate_strategy(copycat(g)) == []


def test_copycat_determinism_is_race_freedom():
    ok, w = check_deterministic(copycat(fx.g_race()))
    assert not ok
    assert w == {"configuration": ["L:p"], "s": "R:p", "s'": "R:o"}
    for g in fx.race_free_games():
        assert check_deterministic(copycat(g))[0]


# -- checks ----------------------------------------------------------------------


def test_s_i_passes_all():
    rep = check_strategy(fx.s_i())
    assert rep.receptive == (True, None)
    assert rep.innocent == (True, None)
    assert rep.deterministic == (True, None)


def test_s_ii_not_innocent():
    assert check_innocent(fx.s_ii()) == (False, {"s": "p", "s'": "o"})


def test_receptivity_failure():
    s = make_strategy(fx.g_seq(), build(["o", "p"], [("o", "p")]), {"o": "o", "p": "p"})
    assert check_receptive(s)[0]
    lazy = make_strategy(fx.g_watch(), build(["a"]), {"a": "a"})
    ok, w = check_receptive(lazy)
    assert not ok and w["move"] == "b"


def test_determinism_failure_on_choice():
    ok, w = check_deterministic(fx.s_choice_any())
    assert not ok and w["configuration"] == ["o"]


def _fixture_strategies():
    return fx.identity_suite() + [fx.s_ii(), copycat(fx.g_race()), copycat(fx.g_seq()), fx.s_twin(), fx.s_single()]


@pytest.mark.parametrize("s", _fixture_strategies(), ids=lambda s: s.name)
def test_determinism_iff_constant_one_valuation(s):
    # probabilistic strategies are only defined over race-free games
    if not is_race_free(s.target)[0]:
        pytest.skip("game has a race")
    v = constant_valuation(s.es, 1, STRATEGY, s.inner.polarity)
    assert check_deterministic(s)[0] == (validate_valuation(v) == [])


def test_constant_one_blind_to_races():
    s = copycat(fx.g_race())
    v = constant_valuation(s.es, 1, STRATEGY, s.inner.polarity)
    assert validate_valuation(v) == [] and not check_deterministic(s)[0]


# -- composition -------------------------------------------------------------------


@pytest.mark.parametrize("s", fx.identity_suite(), ids=lambda s: s.name)
def test_identity_laws(s):
    r, b = right_identity(s)
    assert iso_equivalent(r, b)[0]
    l, b = left_identity(s)
    assert iso_equivalent(l, b)[0]


def test_identity_law_fails_without_innocence():
    r, b = right_identity(fx.s_ii())
    assert not iso_equivalent(r, b)[0]


def test_s_i_then_copycat():
    r, b = right_identity(fx.s_i())
    ok, w = iso_equivalent(r, b)
    assert ok
    assert {r.sigma[e]: b.sigma[f] for e, f in w.items()} == {"R:o": "R:o", "R:p": "R:p"}


def test_copycat_idempotent():
    cc = copycat(fx.g_seq())
    assert iso_equivalent(compose(cc, cc).hidden, cc)[0]


def test_compose_mismatch():
    with pytest.raises(InputError):
        compose(copycat(fx.g_seq()), copycat(fx.g_conc()))


@pytest.mark.parametrize(
    "first", [fx.s_ii(), fx.s_i(), fx.s_conc_eager()], ids=lambda s: s.name
)
def test_composition_associative(first):
    g = fx.g_conc()
    sigma = as_between(first)
    tau2 = rename_ports(copycat(g), {"R": "M"})
    ups2 = rename_ports(copycat(g), {"L": "M"})
    left = compose(compose(sigma, tau2).hidden, ups2).hidden
    right = compose(sigma, compose(tau2, ups2).hidden).hidden
    assert iso_equivalent(left, right)[0]
    assert brute_iso(left, right)


def test_composition_preserves_conditions():
    for s in fx.identity_suite():
        r, _ = right_identity(s)
        l, _ = left_identity(s)
        for out in (r, l):
            assert check_receptive(out)[0] and check_innocent(out)[0]


def test_interaction_watch_half():
    from congames.outcomes import interaction

    pb, f = interaction(fx.s_watch(), fx.tau_half())
    cs = configurations(pb.es)
    images = {frozenset(pb.pi1.image(z)) for z in cs}
    assert images == {frozenset(), frozenset("a"), frozenset("b"), frozenset({"a", "w1"}), frozenset({"b", "w2"})}
    maximal = {frozenset(pb.pi1.image(z)) for z in cs if not any(z < z2 for z2 in cs)}
    assert maximal == {frozenset({"a", "w1"}), frozenset({"b", "w2"})}


# -- sums and conjunction ------------------------------------------------------------


def test_empty_sum_is_minimum():
    s = nsum([], target=fx.g_chain())
    assert set(s.sigma.values()) == {"o"}
    s = nsum([], target=fx.g_watch())
    assert set(s.sigma.values()) == {"a", "b"}


def test_unary_sum():
    for s in fx.identity_suite():
        assert iso_equivalent(nsum([s]), s)[0]


def test_sum_s_i_twice():
    s = nsum([fx.s_i(), fx.s_i()])
    assert sorted(s.es.events) == ["o", "p#1", "p#2"]
    assert s.inner.polarity == {"o": "-", "p#1": "+", "p#2": "+"}
    assert s.es.forbidden == frozenset({frozenset({"p#1", "p#2"})})
    assert s.es.causes["p#1"] == {"o"} and s.es.causes["p#2"] == {"o"}
    assert s.warnings == []


def test_conjunction_self():
    for s in fx.identity_suite():
        injective = len(set(s.sigma.values())) == len(s.sigma)
        if injective:
            assert iso_equivalent(conjunction(s, s), s)[0]


def test_conjunction_self_non_injective():
    # both watchers map to w, so the kernel pair also matches w1 against w2
    s = fx.s_watch(with_valuation=False)
    c = conjunction(s, s)
    assert not iso_equivalent(c, s)[0]
    assert sorted(c.es.events) == ["a", "b", "w#1", "w#2", "w#3", "w#4"]


def test_conjunction_with_minimum():
    c = conjunction(fx.s_i(), minimum_strategy(fx.g_conc()))
    assert list(c.sigma.values()) == ["o"]


def test_conjunction_disjoint_answers():
    q = make_strategy(fx.g_choice(), build(["o", "q"], [("o", "q")]), {"o": "o", "q": "q"})
    c = conjunction(fx.s_choice_p(), q)
    assert iso_equivalent(c, minimum_strategy(fx.g_choice()))[0]


# -- trace -----------------------------------------------------------------------------


def test_trace_over_empty_game():
    b = as_between(fx.s_i())
    ports = [Port("x", empty_game(), IN), Port("R", fx.g_conc(), OUT), Port("y", empty_game(), OUT)]
    t = make_strategy(None, b.es, dict(b.sigma), ports)
    out = trace(t, "x", "y")
    assert iso_equivalent(out, b)[0]


def test_trace_hides_everything():
    out = trace(copycat(fx.g_seq()), "L", "R")
    assert out.es.events == ()
    assert out.ports == ()


def test_trace_of_swap_is_copycat():
    g = fx.g_seq()
    c1 = rename_ports(copycat(g), {"L": "x", "R": "v"})
    c2 = rename_ports(copycat(g), {"L": "u", "R": "y"})
    t = tensor(c1, c2)
    out = reorder_ports(trace(t, "u", "v"), ["x", "y"])
    expect = rename_ports(copycat(g), {"L": "x", "R": "y"})
    assert iso_equivalent(out, expect)[0]


def test_trace_rejects_mismatch():
    with pytest.raises(InputError):
        trace(copycat(fx.g_seq()), "R", "L")


# -- iso ---------------------------------------------------------------------------------


def test_iso_self_and_s_i_vs_s_ii():
    ok, w = iso_equivalent(fx.s_i(), fx.s_i())
    assert ok and w == {"o": "o", "p": "p"}
    assert not iso_equivalent(fx.s_i(), fx.s_ii())[0]


@pytest.mark.parametrize("s1,s2", list(itertools.combinations(_fixture_strategies(), 2)))
def test_iso_matches_oracle(s1, s2):
    if s1.target != s2.target:
        assert not iso_equivalent(s1, s2)[0]
    else:
        assert iso_equivalent(s1, s2)[0] == brute_iso(s1, s2)


# -- recursion ------------------------------------------------------------------------------


def test_mu_identity_body():
    g = fx.g_seq()
    cc = rename_ports(copycat(g), {"L": "y", "R": "z"})

    def body(x):
        return rename_ports(compose(x, cc).hidden, {"z": "y"})

    out = mu_fix(body, g)
    assert iso_equivalent(out, minimum_strategy(g, [Port("y", g, OUT)]))[0]


def test_mu_constant_body():
    g = fx.g_seq()
    s = as_between(fx.s_seq())
    s = rename_ports(s, {"R": "y"})
    out = mu_fix(lambda _x: s, g)
    assert iso_equivalent(out, s)[0]


def _chain_game(n):
    pol, order = {}, []
    prev = None
    for i in range(n):
        for kind, p in (("o", "-"), ("p", "+")):
            e = f"{kind}{i}"
            pol[e] = p
            if prev:
                order.append((prev, e))
            prev = e
    return make_game(pol, order, name=f"chain{n}")


def _growing_body(g):
    ports = [Port("y", g, OUT)]
    chain = [f"y:{e}" for e in sorted(g.events, key=lambda e: (int(e[1:]), e[0]))]

    def body(x):
        answered = sum(1 for e in x.inner.events if x.inner.polarity[e] == "+")
        upto = min(len(chain), 2 * (answered + 1) + 1)
        fam = [frozenset(chain[:k]) for k in range(upto + 1)]
        return from_configurations(None, fam, ports)

    return body


def test_mu_fuel_exhausted():
    g = _chain_game(6)
    with pytest.raises(FixpointError) as exc:
        mu_fix(_growing_body(g), g, fuel=3)
    assert "fuel exhausted" in str(exc.value) and exc.value.step == 3


def test_mu_growing_body_converges_with_fuel():
    g = _chain_game(3)
    out = mu_fix(_growing_body(g), g, fuel=10)
    assert len(out.es.events) == 6


def test_mu_rejects_non_monotone():
    g = fx.g_seq()
    first = as_between(fx.s_seq())
    first = rename_ports(first, {"R": "y"})
    steps = iter([first, minimum_strategy(g, [Port("y", g, OUT)])])
    with pytest.raises(FixpointError) as exc:
        mu_fix(lambda _x: next(steps), g)
    assert "monotone" in str(exc.value)


def test_strategy_validation_reports_polarity():
    s = fx.s_i()
    s.inner.polarity["p"] = "-"
    assert "polarity preserved" in {v.rule for v in validate_strategy(s)}


def test_strategy_splits_into_sides():
    cc = copycat(fx.g_choice())
    for x in configurations(cc.es):
        assert fx.g_choice().es.is_configuration(split(cc.target, "L", x))
        assert validate_es(cc.es) == []
