import random

import pytest
from hypothesis import given, strategies as st

from laxcyl.cdata import CDataMorphism, compose_morphisms, hom_poset, identity_morphism
from laxcyl.corpus import datum_morphisms_into, lax_instances, random_cdata, ring_triple
from laxcyl.cylinder import (LaxDatum, check_fiber_product_commute, collapse_to_point, comparison_to_colimit,
                             compose_datum_morphisms, cylinder, cylinder_map, fiberwise_product,
                             identity_datum_morphism,
                             identity_law_report, lax_transformations, point_indexing, verify_lax_colimit)
from laxcyl.errors import NonFunctorial, ValidationError
from laxcyl.gallery import circle, pos_space, wedge_datum
from laxcyl.kernels import FINPOS, FINSET
from laxcyl.poset import STAR, MonotoneMap, Poset

import oracles

instances = st.builds(lambda seed: lax_instances(random.Random(seed), 1)[0], st.integers(0, 10 ** 6))


def point_into(F, x):
    P = pos_space(Poset.point())
    return CDataMorphism(P, F, MonotoneMap(P.base, F.base, [x]), {STAR: FINPOS.identity(P.stalk(STAR))})


def three_point():
    """Shape p < q with a 2-chain over p and a point over q sent to its bottom."""
    chain = pos_space(Poset.chain([0, 1]))
    return LaxDatum(Poset.chain("pq"), {"p": chain, "q": pos_space(Poset.point())},
                    {("p", "q"): point_into(chain, 0)})


def test_one_point_shape_is_the_fiber():
    F = circle()
    C = cylinder(point_indexing(F))
    assert len(C) == 4 and C.base.related_pairs() == [((STAR, a), (STAR, b)) for a, b in F.base.related_pairs()]


def test_three_point_cylinder():
    C = cylinder(three_point())
    lt = {(a, b) for a, b in C.base.related_pairs() if a != b}
    assert lt == {(("p", 0), ("p", 1)), (("p", 0), ("q", STAR))}


def test_three_point_universal_property():
    X, Y = three_point(), pos_space(Poset.chain([0, 1]))
    r = verify_lax_colimit(X, Y)
    assert r["iso"] and r["witness"] is None
    assert (r["homs"], len(hom_poset(cylinder(X), Y).poset.related_pairs())) == \
        oracles.hom_shape(cylinder(X), Y, True)
    L = lax_transformations(X, Y)
    assert (len(L.families), len(L.poset.related_pairs())) == oracles.lax_shape(X, Y, True)


def test_point_shape_lax_transformations_are_homs(rng):
    F, Y = random_cdata(rng, FINSET, 2), random_cdata(rng, FINSET, 2)
    assert len(lax_transformations(point_indexing(F), Y).families) == len(hom_poset(F, Y))


def test_empty_fiber_hom_gives_no_lax_transformations():
    empty = pos_space(Poset.antichain([]))
    X = LaxDatum(Poset.point("o"), {"o": circle()})
    assert lax_transformations(X, empty).families == []
    assert verify_lax_colimit(X, empty)["iso"]


def test_corrupted_transitions_rejected_upfront():
    """X_pr must equal X_pq ∘ X_qr; a mismatching given X_pr is refused."""
    pt, two = pos_space(Poset.point()), pos_space(Poset.antichain([0, 1]))
    shape = Poset.chain("pqr")
    with pytest.raises((NonFunctorial, ValidationError)):
        LaxDatum(shape, {"p": two, "q": pt, "r": pt},
                 {("p", "q"): point_into(two, 0), ("q", "r"): identity_morphism(pt),
                  ("p", "r"): point_into(two, 1)})


@given(instances)
def test_universal_property_matches_brute_force(inst):
    X, Y = inst
    ordered = X.fibers[X.shape.elements[0]].kernel is FINPOS
    r = verify_lax_colimit(X, Y)
    assert r["iso"]
    assert r["lax"] == oracles.lax_shape(X, Y, ordered)[0]
    assert r["homs"] == oracles.hom_shape(cylinder(X), Y, ordered)[0]


@given(instances)
def test_cylinder_order_matches_definition(inst):
    X, _ = inst
    C = cylinder(X)
    pts, rel = oracles.brute_cylinder_order(X)
    assert sorted(C.points) == sorted(pts)
    assert set(C.base.related_pairs()) == {(a, b) for a, b in rel if a != b}
    assert len(C) == sum(len(X.fibers[p]) for p in X.shape.elements)


@given(instances)
def test_fiber_order_is_kept(inst):
    X, _ = inst
    C = cylinder(X)
    for p in X.shape.elements:
        F = X.fibers[p].base
        for x in F.elements:
            for y in F.elements:
                assert C.base.leq((p, x), (p, y)) == F.leq(x, y)


@given(instances)
def test_identity_laws(inst):
    X, Y = inst
    assert all(identity_law_report(Y).values())
    for F in X.fibers.values():
        assert all(identity_law_report(F).values())


@given(instances)
def test_comparison_to_colimit_is_surjective(inst):
    X, _ = inst
    cmp = comparison_to_colimit(X)
    assert cmp.surjective and cmp.cocone_ok


def test_comparison_on_point_shape_is_identity():
    cmp = comparison_to_colimit(LaxDatum(Poset.point("o"), {"o": circle()}))
    assert len(cmp.colimit.poset) == 4 and len(set(cmp.map.values)) == 4


def test_span_of_points_glues_to_one():
    pt = pos_space(Poset.point())
    shape = Poset.from_covers("uvw", [("u", "w"), ("v", "w")])
    i = identity_morphism(pt)
    X = LaxDatum(shape, {"u": pt, "v": pt, "w": pt}, {("u", "w"): i, ("v", "w"): i})
    cmp = comparison_to_colimit(X)
    assert len(cylinder(X)) == 3 and len(cmp.colimit.poset) == 1


def test_wedge_comparison():
    """Nine cylinder points; the glue point and its two images become one class."""
    cmp = comparison_to_colimit(wedge_datum())
    assert len(cylinder(wedge_datum())) == 9
    assert len(cmp.colimit.poset) == 7 and cmp.surjective


def test_cylinder_map_functorial(corpus):
    f, g = corpus.triples[0]
    Z = f.target
    assert cylinder_map(identity_datum_morphism(Z)) == identity_morphism(cylinder(Z))
    e = datum_morphisms_into(f.source, f.source)[-1]
    lhs = cylinder_map(compose_datum_morphisms(f, e))
    assert lhs == compose_morphisms(cylinder_map(f), cylinder_map(e))


def test_shape_collapse_gives_cocone_map():
    pt = pos_space(Poset.point())
    X = LaxDatum(Poset.chain("pq"), {"p": pt, "q": pt}, {("p", "q"): identity_morphism(pt)})
    phi = collapse_to_point(X, {"p": identity_morphism(pt), "q": identity_morphism(pt)}, pt)
    m = cylinder_map(phi)
    assert set(m.base.values) == {(STAR, STAR)}


def test_fiber_products_commute(corpus):
    for f, g in corpus.triples[:20]:
        assert check_fiber_product_commute(f, g)["iso"]


def test_ring_triple_gives_zero_ring_both_ways():
    f, g = ring_triple()
    r = check_fiber_product_commute(f, g)
    assert r["iso"] and r["points"] == 1
    XY, _ = fiberwise_product(f, g)
    assert cylinder(XY).stalk(("o", (STAR, STAR))).order == 1


def test_identity_legs_give_the_cylinder(corpus):
    f, _ = corpus.triples[1]
    i = identity_datum_morphism(f.target)
    r = check_fiber_product_commute(i, i)
    assert r["iso"] and r["points"] == len(cylinder(f.target))
