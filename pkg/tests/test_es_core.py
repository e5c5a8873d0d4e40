from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from congames import fixtures as fx
from congames.errors import InputError, ResourceLimitError
from congames.es_core import (
    EsMap,
    EventStructure,
    build,
    configurations,
    extensions,
    factorize,
    identity_map,
    maximal_configurations,
    pullback,
    set_max_configs,
    validate_es,
    validate_map,
)
from congames.generators import random_es

from .oracles import brute_configurations, brute_consistent, brute_map_ok, brute_matches, pullback_config_pairs


def rules(violations):
    return {v.rule for v in violations}


# -- validation ---------------------------------------------------------------


def test_g_seq_valid():
    assert validate_es(fx.g_seq().es) == []


def test_cycle_reported():
    es = EventStructure(["e", "f"], {"e": ["f"], "f": ["e"]})
    assert "causality acyclic" in rules(validate_es(es))
    self_loop = EventStructure(["e"], {"e": ["e"]})
    assert "causality acyclic" in rules(validate_es(self_loop))


def test_singleton_forbidden_reported():
    es = EventStructure(["e", "f"], {}, [["e"]])
    assert "singleton forbidden" in rules(validate_es(es))


def test_unknown_event_reported():
    es = EventStructure(["e"], {"e": ["ghost"]})
    assert "unknown event" in rules(validate_es(es))
    es = EventStructure(["e"], {}, [["e", "ghost"]])
    assert "unknown event" in rules(validate_es(es))


def test_forbidden_sets_normalised_to_minimal():
    es = EventStructure(["a", "b", "c"], {}, [["a", "b"], ["a", "b", "c"]])
    assert es.forbidden == frozenset({frozenset("ab")})


# -- configurations -----------------------------------------------------------


def test_configurations_examples():
    assert configurations(fx.g_seq().es) == [frozenset(), frozenset("o"), frozenset("op")]
    assert configurations(fx.g_race().es) == [frozenset(), frozenset("o"), frozenset("p")]
    assert configurations(EventStructure()) == [frozenset()]


def test_configurations_order_by_size_then_ids():
    cs = configurations(fx.g_watch().es)
    keys = [(len(x), sorted(x)) for x in cs]
    assert keys == sorted(keys)


def test_configurations_max_events():
    assert configurations(fx.g_watch().es, max_events=1) == [
        frozenset(),
        frozenset("a"),
        frozenset("b"),
        frozenset("w"),
    ]


def test_extensions_examples():
    assert extensions(fx.g_seq().es, frozenset()) == {"o"}
    assert extensions(fx.g_seq().es, {"o"}) == {"p"}
    assert extensions(fx.g_race().es, {"o"}) == frozenset()
    with pytest.raises(InputError):
        extensions(fx.g_seq().es, {"p"})


def test_ceiling_raises_resource_error():
    es = build([f"e{i}" for i in range(6)])
    set_max_configs(10)
    with pytest.raises(ResourceLimitError):
        configurations(es)
    set_max_configs(None)
    assert len(configurations(es)) == 64


def test_ceiling_from_environment(monkeypatch):
    from congames import es_core

    monkeypatch.setenv("CONGAMES_MAX_CONFIGS", "5")
    es = build([f"e{i}" for i in range(4)])
    assert es_core.max_configs() == 5
    with pytest.raises(ResourceLimitError):
        configurations(es)


def test_maximal_configurations():
    assert maximal_configurations(fx.g_race().es) == [frozenset("o"), frozenset("p")]


@given(st.integers(0, 10**6), st.integers(1, 6))
def test_configurations_match_subset_oracle(seed, n):
    es = random_es(random.Random(seed), n)
    got = configurations(es)
    assert set(got) == brute_configurations(es)
    assert len(got) == len(set(got))
    for x in got:
        assert es.is_configuration(x)
        assert all(brute_consistent(es, sub) for r in range(len(x) + 1) for sub in itertools.combinations(x, r))
        assert all(es.down[e] <= x for e in x)


@given(st.integers(0, 10**6), st.integers(1, 5))
def test_consistency_matches_oracle(seed, n):
    es = random_es(random.Random(seed), n)
    for r in range(n + 1):
        for xs in itertools.combinations(es.events, r):
            assert es.is_consistent(xs) == brute_consistent(es, xs)


# -- maps ---------------------------------------------------------------------


def test_s_i_map_valid_total_not_rigid():
    rep = validate_map(fx.s_i().map)
    assert rep.ok and rep.total and not rep.rigid


def test_identity_map_rigid():
    rep = validate_map(identity_map(fx.g_seq().es))
    assert rep.ok and rep.total and rep.rigid


def test_local_injectivity_violation():
    src = build(["a", "b"])
    tgt = build(["c"])
    rep = validate_map(EsMap(src, tgt, {"a": "c", "b": "c"}))
    assert "local injectivity" in rules(rep.violations)


def test_image_not_configuration_violation():
    tgt = fx.g_seq().es
    src = build(["x"])
    rep = validate_map(EsMap(src, tgt, {"x": "p"}))
    assert "image not a configuration" in rules(rep.violations)


def _all_maps(src, tgt, partial):
    options = list(tgt.events) + ([None] if partial else [])
    for combo in itertools.product(options, repeat=len(src.events)):
        yield EsMap(src, tgt, {a: b for a, b in zip(src.events, combo) if b is not None})


@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 3))
def test_validate_map_matches_oracle(seed, n, m):
    rng = random.Random(seed)
    src, tgt = random_es(rng, n), random_es(rng, m)
    for f in _all_maps(src, tgt, partial=True):
        assert validate_map(f).ok == brute_map_ok(f)


# -- factorisation --------------------------------------------------------------


def test_factorize_total_is_source():
    f = fx.s_i().map
    proj, p, t = factorize(f)
    assert proj == f.source
    assert t.mapping == f.mapping


def test_factorize_nowhere_defined():
    f = EsMap(fx.g_seq().es, fx.g_seq().es, {})
    proj, _, _ = factorize(f)
    assert proj.events == ()


def test_factorize_hide_p():
    es = fx.g_seq().es
    proj, p, t = factorize(EsMap(es, es, {"o": "o"}))
    assert proj.events == ("o",)
    assert configurations(proj) == [frozenset(), frozenset("o")]


def _factorisation_cases():
    watch = fx.s_watch(with_valuation=False)
    choice = fx.g_choice()
    out = [
        EsMap(watch.es, watch.target.es, {"a": "a", "w1": "w", "w2": "w"}),
        EsMap(watch.es, watch.target.es, {"w1": "w", "w2": "w"}),
        EsMap(choice.es, build(["p", "q"], conflicts=[["p", "q"]]), {"p": "p", "q": "q"}),
        EsMap(choice.es, build(["o", "q"], [("o", "q")]), {"o": "o", "q": "q"}),
        EsMap(fx.g_chain().es, build(["o", "r"], [("o", "r")]), {"o": "o", "r": "r"}),
    ]
    return out


@pytest.mark.parametrize("f", _factorisation_cases())
def test_factorize_properties(f):
    assert validate_map(f).ok
    proj, p, t = factorize(f)
    assert validate_es(proj) == []
    assert set(proj.events) == f.defined()
    assert p.then(t).mapping == dict(f.mapping)
    assert validate_map(t).ok and t.total
    expected = {x & f.defined() for x in brute_configurations(f.source)}
    assert set(configurations(proj)) == expected


@pytest.mark.parametrize("f", _factorisation_cases())
def test_factorize_unique_mediating_map(f):
    """Against a renamed copy of the factorisation there is exactly one mediator."""
    proj, p, t = factorize(f)
    copy = proj.rename(lambda e: e + "'")
    p2 = EsMap(f.source, copy, {a: b + "'" for a, b in p.mapping.items()})
    t2 = EsMap(copy, f.target, {b + "'": c for b, c in t.mapping.items()})
    mediators = []
    for h in _all_maps(proj, copy, partial=False):
        if not validate_map(h).ok:
            continue
        if p.then(h).mapping == p2.mapping and h.then(t2).mapping == t.mapping:
            mediators.append(h)
    assert len(mediators) == 1


# -- pullbacks -------------------------------------------------------------------


def _pullback_cases():
    seq = fx.g_seq().es
    conc = fx.g_conc()
    watch = fx.s_watch(with_valuation=False)
    a = build(["a", "b"], [("a", "b")])
    b = build(["a'", "b'"], [("a'", "b'")])
    c = build(["c", "d"])
    loop = (EsMap(a, c, {"a": "c", "b": "d"}), EsMap(b, c, {"a'": "d", "b'": "c"}))
    cases = {
        "id_seq": (identity_map(seq), identity_map(seq)),
        "loop": loop,
        "s_i_s_ii": (fx.s_i().map, fx.s_ii().map),
        "s_i_conc": (fx.s_i().map, identity_map(conc.es)),
        "watch_half": (watch.map, fx.tau_half().map),
        "watch_a": (watch.map, fx.tau_a().map),
        "watch_self": (watch.map, watch.map),
        "twin_single": (fx.s_twin().map, fx.s_single().map),
        "choice": (fx.s_choice_any().map, fx.s_choice_p().map),
    }
    return cases


@pytest.mark.parametrize("name", sorted(_pullback_cases()))
def test_pullback_matches_oracle(name):
    f, g = _pullback_cases()[name]
    pb = pullback(f, g)
    assert validate_es(pb.es) == []
    got = {pullback_config_pairs(pb, z): z for z in configurations(pb.es)}
    assert set(got) == brute_matches(f, g)
    # configurations are ordered as their matches
    for m1, z1 in got.items():
        for m2, z2 in got.items():
            assert (z1 <= z2) == (m1 <= m2)
    assert validate_map(pb.pi1).ok and validate_map(pb.pi2).ok
    for e in pb.es.events:
        assert f.mapping[pb.pi1.mapping[e]] == g.mapping[pb.pi2.mapping[e]]


def test_pullback_causal_loop_is_empty():
    f, g = _pullback_cases()["loop"]
    assert pullback(f, g).es.events == ()


def test_pullback_of_identities():
    seq = fx.g_seq().es
    pb = pullback(identity_map(seq), identity_map(seq))
    assert len(pb.es.events) == 2
    assert set(pb.pi1.mapping.values()) == {"o", "p"}
    assert pb.pi1.mapping == pb.pi2.mapping
    assert [len(x) for x in configurations(pb.es)] == [0, 1, 2]


def test_pullback_needs_total_maps():
    seq = fx.g_seq().es
    with pytest.raises(InputError):
        pullback(EsMap(seq, seq, {"o": "o"}), identity_map(seq))
