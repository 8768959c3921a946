import pytest

from laxcyl.cdata import (CDataMorphism, compose_morphisms, identity_morphism, inclusion_point, make_cdata,
                          sections_on)
from laxcyl.cylinder import LaxDatum, cylinder, identity_datum_morphism
from laxcyl.errors import NotAFlatImmersion, NotPseudoSchematic, ShapeMismatch
from laxcyl.finring import (is_epi, is_faithfully_flat, is_flat, pair_into_product, product_ring, ring_homs,
                            ring_preset)
from laxcyl.gallery import chart, circle, z4_chain, z6, z6_chain, z6_chain_projection, z6_cover, z6_subcover
from laxcyl.kernels import FINCRING
from laxcyl.poset import STAR, MonotoneMap, Poset
from laxcyl.schematic import (augmentation_datum_morphism, augmentation_morphism, check_cylinder_morphism_theorem,
                              check_cylinder_theorem, check_nerve_corollary, is_faithfully_flat_morphism,
                              is_flat_immersion, is_flat_morphism, is_pseudo_schematic, is_qc_iso, is_schematic,
                              is_schematic_morphism, jointly_surjective, nerve_datum, spec_space)


def point(name):
    return inclusion_point(FINCRING, ring_preset(name))


def nerve_z6():
    return nerve_datum(z6_cover())


def test_pseudo_schematic_examples():
    assert is_pseudo_schematic(point("Z/4"))["verdict"]
    assert is_pseudo_schematic(z6_chain())["verdict"]
    r = is_pseudo_schematic(z4_chain())
    assert not r["verdict"] and r["witness"]["reason"] == "not flat"


def test_non_ringed_input_refused():
    with pytest.raises(ShapeMismatch):
        is_pseudo_schematic(circle())


def test_schematic_examples():
    assert is_schematic(point("F4"))["verdict"]
    r = is_schematic(z6_chain())
    assert r["verdict"] and r["checks"] == 4
    C = cylinder(nerve_z6().datum)
    assert len(C) == 3 and is_schematic(C)["verdict"]


def test_nerve_of_z6_cover_has_zero_ring_on_top():
    N = nerve_z6()
    orders = sorted(N.datum.fibers[d].stalk(N.datum.fibers[d].points[0]).order
                    for d in N.datum.shape.elements if N.datum.fibers[d].points)
    assert orders == [1, 2, 3]


def test_redundant_cover_nerve():
    N = nerve_datum([chart("Z/2"), chart("Z/6")])
    sizes = {len(d): N.datum.fibers[d].stalk(N.datum.fibers[d].points[0]).order for d in N.datum.shape.elements
             if len(d) == 2}
    singles = sorted(N.datum.fibers[d].stalk(STAR).order for d in N.datum.shape.elements if len(d) == 1)
    assert singles == [2, 6] and sizes == {2: 2}


def test_trivial_cover():
    X = z6_chain()
    N = nerve_datum([identity_morphism(X)])
    assert len(N.datum.shape) == 1
    r = check_nerve_corollary([identity_morphism(X)])
    assert r["verdict"] and r["qc_iso"]


def test_schematic_morphism_examples():
    assert is_schematic_morphism(identity_morphism(z6_chain()))["verdict"]
    assert is_schematic_morphism(chart("Z/2"))["verdict"]
    N = nerve_z6()
    assert is_schematic_morphism(augmentation_morphism(N))["verdict"]


def test_spec_space_counts():
    S = spec_space(z6())
    assert len(S) == 2
    assert sorted(S.local[p].ring.order for p in S.points) == [2, 3]
    assert len(spec_space(z6_chain())) == 2
    assert len(spec_space(point("zero"))) == 0
    with pytest.raises(NotPseudoSchematic):
        spec_space(z4_chain())


def test_qc_iso_examples():
    assert is_qc_iso(identity_morphism(z6()))["verdict"]
    assert is_qc_iso(z6_chain_projection())["verdict"]
    r = is_qc_iso(chart("Z/2"))
    assert not r["verdict"] and r["points"] == [1, 2]


def test_flat_immersions():
    i = identity_morphism(z6_chain())
    assert is_flat_immersion(i)["verdict"] and is_faithfully_flat_morphism(i)["verdict"]
    c = chart("Z/2")
    assert is_flat_immersion(c)["verdict"] and not is_faithfully_flat_morphism(c)["verdict"]
    Z2, Z4 = point("Z/2"), point("Z/4")
    bad = CDataMorphism(Z2, Z4, MonotoneMap.identity(Z2.base), {STAR: ring_homs(Z4.stalk(STAR), Z2.stalk(STAR))[0]})
    assert not is_flat_morphism(bad)["verdict"]
    assert not is_flat_immersion(bad)["verdict"]
    with pytest.raises(NotAFlatImmersion):
        nerve_datum([bad])


def test_cylinder_theorem_examples():
    r = check_cylinder_theorem(nerve_z6().datum)
    assert r["hypothesis"] and r["conclusion"] and r["verdict"]
    single = check_cylinder_theorem(LaxDatum(Poset.point("o"), {"o": z6_chain()}))
    assert single["hypothesis"] and single["conclusion"]


def test_non_flat_transition_fails_hypothesis():
    Z2, Z4 = point("Z/2"), point("Z/4")
    t = CDataMorphism(Z2, Z4, MonotoneMap.identity(Z2.base), {STAR: ring_homs(Z4.stalk(STAR), Z2.stalk(STAR))[0]})
    X = LaxDatum(Poset.chain("pq"), {"p": Z4, "q": Z2}, {("p", "q"): t})
    r = check_cylinder_theorem(X)
    assert not r["hypothesis"] and r["verdict"]
    assert r["hypothesis_witness"]["reason"] == "transition not a flat immersion"


def test_morphism_theorem_examples():
    r = check_cylinder_morphism_theorem(identity_datum_morphism(nerve_z6().datum))
    assert r["verdict"]
    aug = check_cylinder_morphism_theorem(augmentation_datum_morphism(nerve_z6()))
    assert aug["hypothesis"] and aug["conclusion"]


def test_nerve_corollary_full_and_partial():
    full = check_nerve_corollary(z6_cover())
    assert full["verdict"] and full["qc_iso"] and full["cylinder_schematic"]
    part = check_nerve_corollary(z6_subcover())
    assert part["verdict"] and part["augmentation_flat_immersion"] and not part["qc_iso"]
    assert part["missed_primes"] == [{"point": STAR, "prime": [0, 3]}]


def test_corpus_schematic_restrictions_are_flat_epis(corpus):
    """Schematic spaces have flat epimorphic restrictions."""
    for X in corpus.ringed:
        if is_schematic(X)["verdict"]:
            assert all(is_flat(X.restriction(x, y)) and is_epi(X.restriction(x, y))
                       for x, y in X.base.related_pairs())


def test_flat_immersion_comorphisms_are_flat_epis(corpus):
    for legs in corpus.covers:
        for leg in legs:
            if is_flat_immersion(leg)["verdict"]:
                assert all(is_flat(s) and is_epi(s) for s in leg.sharp.values())


def test_sections_into_stalks_faithfully_flat(corpus):
    """Schematic spaces whose Spec is a single chart's: O(X) -> prod O_x is faithfully flat."""
    seen = 0
    for X in corpus.ringed:
        if not is_schematic(X)["verdict"] or X.base.minimum() is None:
            continue
        L = sections_on(X)
        P, pr = product_ring([X.stalk(x) for x in X.points])
        h = pair_into_product(P, pr, [L.projections[x] for x in X.points])
        assert is_faithfully_flat(h)
        seen += 1
    assert seen > 0


def test_spec_cardinality_tracks_joint_surjectivity(corpus):
    for legs in corpus.covers:
        N = nerve_datum(legs)
        joint, _ = jointly_surjective(legs)
        same = len(spec_space(cylinder(N.datum))) == len(spec_space(N.space))
        assert same == joint


def test_qc_isos_compose(corpus):
    """X -> (b < t, O_m = O_m) -> (⋆, O_m) for X with minimum m: both legs and the composite."""
    found = 0
    for X in corpus.ringed:
        m = X.base.minimum()
        if m is None or len(X) < 2:
            continue
        R = X.stalk(m)
        C = make_cdata(FINCRING, Poset.chain("bt"), {"b": R, "t": R}, {("b", "t"): FINCRING.identity(R)})
        f = CDataMorphism(X, C, MonotoneMap(X.base, C.base, ["b" if x == m else "t" for x in X.points]),
                          {x: X.restriction(m, x) for x in X.points})
        pt = inclusion_point(FINCRING, R)
        g = CDataMorphism(C, pt, MonotoneMap.constant(C.base, pt.base, STAR),
                          {"b": FINCRING.identity(R), "t": FINCRING.identity(R)})
        assert is_qc_iso(f)["verdict"] and is_qc_iso(g)["verdict"]
        assert is_qc_iso(compose_morphisms(g, f))["verdict"]
        found += 1
    f, g = z6_chain_projection(), identity_morphism(z6())
    assert is_qc_iso(compose_morphisms(g, f))["verdict"]
    assert found > 0
