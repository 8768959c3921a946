import pytest

from laxcyl.cdata import identity_morphism, inclusion_point
from laxcyl.descent import (QcohFamily, builtin_spec_pts, chart_count_datum, check_external_descent,
                            check_geometric, check_internal_descent, is_quasi_coherent, restrict_family,
                            structure_family, zero_family)
from laxcyl.errors import ValidationError
from laxcyl.finring import FinModule, ring_homs, ring_preset
from laxcyl.gallery import chart, z6, z6_chain, z6_chain_projection, z6_cover
from laxcyl.kernels import FINCRING
from laxcyl.cylinder import cylinder
from laxcyl.schematic import check_nerve_corollary, is_pseudo_schematic, nerve_datum

import oracles

SPEC = builtin_spec_pts()


def test_spec_points_values():
    assert len(SPEC(z6())) == 2
    assert len(SPEC(inclusion_point(FINCRING, ring_preset("zero")))) == 0
    assert len(SPEC(z6_chain())) == 2


def test_spec_points_geometric_on_samples():
    r = check_geometric(SPEC, [z6_chain_projection(), identity_morphism(z6())])
    assert r["verdict"] and r["checked"] == 2


def test_chart_count_is_not_geometric():
    r = check_geometric(chart_count_datum(), [z6_chain_projection()])
    assert not r["verdict"] and r["witness"]["sizes"] == [2, 1]


def test_internal_descent_examples():
    assert check_internal_descent(SPEC, z6())["verdict"]
    r = check_internal_descent(SPEC, z6_chain())
    assert r["verdict"] and r["colimit_size"] == 2 == r["target_size"]
    C = cylinder(nerve_datum(z6_cover()).datum)
    r = check_internal_descent(SPEC, C)
    assert r["verdict"] and r["colimit_size"] == 2


def test_external_descent_on_z6_cover():
    """{pt} ⊔ {pt} ⊔ ∅ over the nerve: two classes."""
    r = check_external_descent(SPEC, z6_cover())
    colim = oracles.set_colimit_size({"0": ["p"], "1": ["q"], "01": []}, {})
    assert r["iso"] and r["preconditions_hold"] and r["colimit_size"] == colim == 2


def test_external_descent_trivial_and_redundant():
    r = check_external_descent(SPEC, [identity_morphism(z6_chain())])
    assert r["iso"] and r["nerve_size"] == 1
    r = check_external_descent(SPEC, [chart("Z/2"), chart("Z/6")])
    assert r["iso"] and r["colimit_size"] == 2


def test_subcover_misses_a_point():
    r = check_external_descent(SPEC, [chart("Z/2")])
    assert not r["preconditions_hold"] and not r["preconditions"]["covering"]
    assert r["colimit_size"] == 1 and r["target_size"] == 2
    assert check_nerve_corollary([chart("Z/2")])["verdict"]


def test_corpus_descent(corpus):
    """External descent holds wherever its preconditions do; internal descent on every space."""
    held = 0
    for legs in corpus.covers:
        r = check_external_descent(SPEC, legs)
        if r["preconditions_hold"]:
            held += 1
            assert r["iso"]
    assert held > 0
    for X in corpus.ringed:
        if is_pseudo_schematic(X)["verdict"]:
            assert check_internal_descent(SPEC, X)["verdict"]


def test_corollary_implies_descent_on_coverings(corpus):
    for legs in corpus.covers:
        c = check_nerve_corollary(legs)
        if c["verdict"] and c["jointly_surjective"]:
            assert check_external_descent(SPEC, legs)["iso"]


def test_structure_and_zero_families_are_quasi_coherent(corpus):
    for X in [z6_chain()] + corpus.ringed[:10]:
        assert is_quasi_coherent(structure_family(X))["verdict"]
        assert is_quasi_coherent(zero_family(X))["verdict"]


def test_non_quasi_coherent_family():
    """Z/3 ⊗ Z/2 = 0 cannot be Z/2."""
    X = z6_chain()
    M3 = FinModule.along(ring_homs(ring_preset("Z/6"), ring_preset("Z/3"))[0])
    M2 = FinModule.of_ring(X.stalk("y"))
    fam = QcohFamily(X, {"x": M3, "y": M2}, {("x", "y"): [0] * M3.order})
    r = is_quasi_coherent(fam)
    assert not r["verdict"] and r["witness"]["tensor_order"] == 1 and r["witness"]["target_order"] == 2


def test_non_linear_comparison_rejected():
    X = z6_chain()
    M = FinModule.of_ring(X.stalk("x"))
    with pytest.raises(ValidationError):
        QcohFamily(X, {"x": M, "y": FinModule.of_ring(X.stalk("y"))}, {("x", "y"): [1] * 6})


def test_quasi_coherence_survives_restriction(corpus):
    for X in corpus.ringed[:15]:
        fam = structure_family(X)
        for x in X.points:
            U = X.base.above(x)
            assert is_quasi_coherent(restrict_family(fam, U))["verdict"]
