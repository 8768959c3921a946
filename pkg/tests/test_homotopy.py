import random

import pytest
from hypothesis import given, strategies as st

from laxcyl.corpus import random_connected_poset
from laxcyl.cylinder import LaxDatum, cylinder
from laxcyl.errors import DisconnectedFiber, NotConnected
from laxcyl.gallery import CROWN, circle, circle_datum, cone_datum, pos_space, wedge_datum
from laxcyl.homotopy import (PANEL, GroupPresentation, count_homs, group_preset, h1_invariants, order_complex,
                             panel_counts, pi1_presentation, simplify, symmetric_group, van_kampen_check)
from laxcyl.poset import Poset

import oracles

Z = GroupPresentation(["a"])
Z2 = GroupPresentation(["a", "b"], [(("a", 1), ("b", 1), ("a", -1), ("b", -1))])
connected = st.builds(lambda seed, n: random_connected_poset(random.Random(seed), n, "abcde"),
                      st.integers(0, 10 ** 6), st.integers(1, 5))


def test_small_order_complexes():
    assert order_complex(Poset.point()).f_vector() == [1]
    assert order_complex(Poset.chain([0, 1])).f_vector() == [2, 1]
    K = order_complex(CROWN)
    assert K.f_vector() == oracles.f_vector(CROWN) == [4, 4]


def test_circle_presentation():
    pres = pi1_presentation(order_complex(CROWN))
    assert len(pres.generators) == 1 and pres.relators == []
    assert h1_invariants(order_complex(CROWN)) == oracles.h1(CROWN) == [0]


def test_filled_triangle_is_simply_connected():
    T = Poset.chain("xyz")
    pres = pi1_presentation(order_complex(T))
    assert len(pres.generators) == 1 and len(pres.relators) == 1
    assert simplify(pres).generators == []


def test_point_presentation_trivial():
    pres = pi1_presentation(order_complex(Poset.point()))
    assert pres.generators == [] and h1_invariants(order_complex(Poset.point())) == []


def test_disconnected_complex_rejected():
    with pytest.raises(NotConnected):
        pi1_presentation(order_complex(Poset.antichain("ab")))


def test_hom_counts():
    assert count_homs(GroupPresentation([]), group_preset("S3")) == 1
    assert count_homs(Z, group_preset("Z/2")) == oracles.cyclic_homs_from_free(1, 2) == 2
    assert count_homs(Z2, symmetric_group(3)) == oracles.commuting_pairs(3) == 18


def test_circle_counts_into_z2():
    pres = pi1_presentation(order_complex(circle().base))
    assert count_homs(pres, group_preset("Z/2")) == 2


def test_wedge():
    X = wedge_datum()
    K = order_complex(cylinder(X).base)
    assert h1_invariants(K) == oracles.h1(cylinder(X).base) == [0, 0]
    assert count_homs(pi1_presentation(K), group_preset("S3")) == 36
    r = van_kampen_check(X)
    assert r["verdict"] and r["h1"]["amalgam"] == [0, 0]


def test_cone_is_contractible():
    X = cone_datum()
    r = van_kampen_check(X)
    assert r["verdict"] and r["h1"]["cylinder"] == [] == oracles.h1(cylinder(X).base)
    assert all(v["cylinder"] == 1 for v in r["homs"].values())


def test_single_fiber_routes_agree():
    r = van_kampen_check(circle_datum())
    assert r["verdict"] and r["h1"]["cylinder"] == r["h1"]["amalgam"] == [0]


def test_disconnected_fiber_rejected():
    X = LaxDatum(Poset.point("o"), {"o": pos_space(Poset.antichain("ab"))})
    with pytest.raises(DisconnectedFiber):
        van_kampen_check(X)


def test_corpus_van_kampen(corpus):
    for X in corpus.pos_data:
        r = van_kampen_check(X)
        assert r["verdict"], r["witness"]
        assert r["cylinder_vertices"] == sum(len(F) for F in X.fibers.values())
        assert r["h1"]["cylinder"] == oracles.h1(cylinder(X).base)


@given(connected)
def test_h1_matches_smith_oracle(P):
    assert h1_invariants(order_complex(P)) == oracles.h1(P)


@given(connected)
def test_extremum_gives_trivial_group(P):
    if P.minimum() is None and P.maximum() is None:
        return
    K = order_complex(P)
    assert h1_invariants(K) == []
    assert set(panel_counts(pi1_presentation(K)).values()) == {1}


@given(connected)
def test_order_complex_closed_under_faces(P):
    K = order_complex(P)
    assert K.is_closed_under_faces() and len(K.vertices) == len(P)


@given(connected)
def test_simplify_keeps_counts(P):
    pres = pi1_presentation(order_complex(P))
    for name in PANEL:
        G = group_preset(name)
        assert count_homs(pres, G, reduce=False) == count_homs(simplify(pres), G, reduce=False)
