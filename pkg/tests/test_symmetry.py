from __future__ import annotations

import itertools

import pytest

from congames import fixtures as fx
from congames.es_core import EsMap, build, configurations, identity_map, pullback
from congames.strategy import copycat, iso_equivalent
from congames.symmetry import (
    IsoFamily,
    cod,
    dom,
    identity_family,
    inverse,
    map_symmetry,
    pseudo_pullback,
    similar_maps,
    strategies_similar,
    validate_isofamily,
)

from .oracles import brute_matches, pullback_config_pairs


def with_identities(es, extra):
    fam = identity_family(es)
    return IsoFamily(es, fam.bijections | {frozenset(tuple(p) for p in t) for t in extra})


def twin_family():
    return with_identities(fx.s_twin().es, fx.TWIN_SWAP)


def two_family():
    return with_identities(fx.g_two().es, fx.TWO_SWAP)


def rules(vs):
    return {v.rule for v in vs}


def test_identity_family_valid():
    assert validate_isofamily(identity_family(fx.g_conc().es)) == []


def test_swap_family_valid():
    assert validate_isofamily(twin_family()) == []
    assert validate_isofamily(two_family()) == []


def test_missing_inverse():
    es = fx.s_twin().es
    fam = with_identities(es, [[["e1", "e2"]]])
    assert "(i) inverse" in rules(validate_isofamily(fam))


def test_missing_extension():
    es = build(["a", "b"])
    fam = with_identities(es, [[["a", "b"]], [["b", "a"]]])
    assert "(iii) extension" in rules(validate_isofamily(fam))
    full = with_identities(es, [[["a", "b"]], [["b", "a"]], [["a", "b"], ["b", "a"]]])
    assert validate_isofamily(full) == []


def test_missing_restriction():
    es = build(["a", "b"])
    fam = with_identities(es, [[["a", "b"], ["b", "a"]]])
    assert "(ii) restriction" in rules(validate_isofamily(fam))


def test_missing_identity_and_composite():
    es = build(["a", "b", "c"])
    fam = IsoFamily(es, [[("a", "b")], [("b", "a")], [("b", "c")], [("c", "b")]])
    got = rules(validate_isofamily(fam))
    assert "(i) identity" in got and "(i) composite" in got


def test_non_bijection_rejected():
    es = build(["a", "b"])
    fam = IsoFamily(es, [[("a", "b"), ("b", "b")]])
    assert rules(validate_isofamily(fam)) == {"bijection"}


@pytest.mark.parametrize("fam", [twin_family(), two_family(), identity_family(fx.g_choice().es)], ids=["twin", "two", "choice"])
def test_valid_families_preserve_order(fam):
    es = fam.subject
    for t in fam.bijections:
        fwd = dict(t)
        for a, b in itertools.product(dom(t), repeat=2):
            assert es.leq(a, b) == es.leq(fwd[a], fwd[b])
        assert inverse(inverse(t)) == t
        assert len(cod(t)) == len(t)


# -- maps -------------------------------------------------------------------------------


def test_identity_map_symmetry():
    es = fx.g_conc().es
    fam = identity_family(es)
    rep = map_symmetry(identity_map(es), fam, fam, identity_map(es))
    assert rep == {"preserves": True, "witness": None, "sim": True, "sim_witness": None}


def test_similar_but_different_maps():
    left = fx.s_left()
    f = left.map
    g = EsMap(left.es, fx.g_two().es, {"t": "p2"})
    assert f.mapping != g.mapping
    rep = map_symmetry(f, identity_family(left.es), two_family(), g)
    assert rep["preserves"] and rep["sim"]
    assert not similar_maps(f, g, identity_family(fx.g_two().es))


def test_map_breaking_symmetry():
    twin = fx.s_twin()
    target = build(["p", "q"], conflicts=[["p", "q"]])
    f = EsMap(twin.es, target, {"e1": "p", "e2": "q"})
    rep = map_symmetry(f, twin_family(), identity_family(target))
    assert not rep["preserves"]
    assert rep["witness"] == [["e1", "e2"]]


# -- pseudo-pullbacks ------------------------------------------------------------------------


def _fixture_map_pairs():
    watch = fx.s_watch(with_valuation=False)
    return [
        (identity_map(fx.g_seq().es), identity_map(fx.g_seq().es)),
        (fx.s_i().map, fx.s_ii().map),
        (watch.map, fx.tau_half().map),
        (fx.s_choice_any().map, fx.s_choice_p().map),
        (fx.s_left().map, fx.s_right().map),
    ]


@pytest.mark.parametrize("pair", range(len(_fixture_map_pairs())))
def test_pseudo_pullback_identity_family_is_pullback(pair):
    f, g = _fixture_map_pairs()[pair]
    pb = pullback(f, g)
    ppb = pseudo_pullback(f, g, identity_family(f.target))
    assert ppb.es == pb.es
    assert ppb.pi1.mapping == pb.pi1.mapping and ppb.pi2.mapping == pb.pi2.mapping


def test_pseudo_pullback_swap_nonempty():
    f, g = fx.s_left().map, fx.s_right().map
    assert pullback(f, g).es.events == ()
    ppb = pseudo_pullback(f, g, two_family())
    assert len(ppb.es.events) == 1
    assert {pullback_config_pairs(ppb, z) for z in configurations(ppb.es)} == {frozenset(), frozenset({("t", "u")})}
    assert brute_matches(f, g) == {frozenset()}


@pytest.mark.parametrize("fam", [twin_family(), two_family(), identity_family(fx.g_watch().es)], ids=["twin", "two", "watch"])
def test_pseudo_pullback_of_identities_recovers_family(fam):
    es = fam.subject
    ppb = pseudo_pullback(identity_map(es), identity_map(es), fam)
    got = {pullback_config_pairs(ppb, z) for z in configurations(ppb.es)}
    assert got == set(fam.bijections)


# -- strategies up to symmetry -------------------------------------------------------------------


def test_similar_reflexive_and_iso():
    for s in fx.identity_suite():
        assert strategies_similar(s, s)
    cc = copycat(fx.g_seq())
    assert strategies_similar(cc, copycat(fx.g_seq()))


def test_twin_similar_to_single_under_swap():
    twin, single = fx.s_twin(), fx.s_single()
    assert strategies_similar(twin, single, twin_family(), identity_family(single.es))
    assert strategies_similar(single, twin, identity_family(single.es), twin_family())
    assert not iso_equivalent(twin, single)[0]
    assert not strategies_similar(twin, single)


@pytest.mark.parametrize("s1,s2", list(itertools.combinations(fx.identity_suite(), 2)))
def test_similar_symmetric(s1, s2):
    assert strategies_similar(s1, s2) == strategies_similar(s2, s1)
    if iso_equivalent(s1, s2)[0]:
        assert strategies_similar(s1, s2)
