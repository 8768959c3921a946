import itertools
from math import gcd

import pytest
from hypothesis import given, strategies as st

from laxcyl.config import use_caps
from laxcyl.errors import RingAxiomError, SizeCapExceeded, UnknownPreset
from laxcyl.finring import (AbPresentation, FinModule, FinRing, RingHom, ab_normal_form, compose_homs,
                            find_ring_iso, flat_witness, ideal_flat_witness, ideals_of, is_epi,
                            is_faithfully_flat, is_flat, local_factors, missed_primes, prime_ideals,
                            product_ring, quotient_ring, ring_homs, ring_preset, spec_contraction,
                            tensor_ring, zero_ring)
from laxcyl.finring.oracles import is_faithful_module_functor, residue_field
from laxcyl.finring.tensor import TensorProduct

import oracles

CORPUS = ["zero", "Z/2", "Z/3", "Z/4", "Z/6", "F4", "Z/2 x Z/2", "Z/2[x]/(x^2)", "Z/8", "Z/12", "Z/9"]
SUB_CORPUS = ["Z/2", "Z/4", "Z/6", "F4", "Z/2 x Z/2"]


def R(name):
    return ring_preset(name)


def proj(a, b):
    """The unique map Z/a -> Z/b for b | a."""
    return ring_homs(R(f"Z/{a}"), R(f"Z/{b}"))[0]


def all_maps(names=CORPUS):
    for a, b in itertools.product(names, names):
        yield from ring_homs(R(a), R(b))


maps = st.sampled_from(list(all_maps()))


def test_presets():
    assert R("Z/6").order == 6
    Z = R("zero")
    assert Z.order == 1 and Z.one == Z.zero
    assert len(prime_ideals(R("Z/4"))) == 1
    with pytest.raises(UnknownPreset):
        R("Q")


def test_bad_tables_rejected():
    with pytest.raises(RingAxiomError):
        FinRing([[0, 1], [1, 0]], [[0, 0], [0, 0]])


@pytest.mark.parametrize("n", [1, 2, 4, 6, 8, 9, 12])
def test_ideals_of_cyclic_rings(n):
    """One ideal per divisor; primes are the prime divisors."""
    Zn = R(f"Z/{n}") if n > 1 else R("zero")
    assert len(ideals_of(Zn)) == oracles.zn_ideal_count(n)
    assert len(prime_ideals(Zn)) == oracles.zn_prime_count(n)


def test_z6_ideals_listed():
    members = sorted(sorted(I.members) for I in ideals_of(R("Z/6")))
    assert members == [[0], [0, 1, 2, 3, 4, 5], [0, 2, 4], [0, 3]]
    assert sorted(sorted(P.members) for P in prime_ideals(R("Z/6"))) == [[0, 2, 4], [0, 3]]


def test_field_and_zero_ideals():
    assert len(ideals_of(R("F4"))) == 2
    assert len(ideals_of(zero_ring())) == 1
    assert len(prime_ideals(zero_ring())) == 0


def test_products():
    P, _ = product_ring([R("Z/2"), R("Z/3")])
    assert P.order == 6 and find_ring_iso(P, R("Z/6")) is not None
    Q, _ = product_ring([R("Z/4"), zero_ring()])
    assert find_ring_iso(Q, R("Z/4")) is not None
    E, _ = product_ring([])
    assert E.order == 1


def test_quotient():
    Z6 = R("Z/6")
    three = next(I for I in ideals_of(Z6) if sorted(I.members) == [0, 3])
    Q, p = quotient_ring(Z6, three)
    assert Q.order == 3 and p.is_surjective()


@pytest.mark.parametrize("n,a,b", [(6, 2, 3), (4, 2, 2), (12, 4, 6), (6, 6, 2), (12, 3, 4)])
def test_tensor_of_cyclic_rings(n, a, b):
    T, _, _ = tensor_ring(proj(n, a), proj(n, b))
    assert T.order == oracles.zn_tensor_order(a, b)


def test_tensor_unit_law():
    for name in SUB_CORPUS:
        A = R(name)
        one = ring_homs(R("Z/2") if A.characteristic() == 2 else A, A)[0]
        T, _, _ = tensor_ring(one, RingHom.identity(one.source))
        assert find_ring_iso(T, A) is not None


def test_extension_of_fields_is_not_epi():
    f = ring_homs(R("Z/2"), R("F4"))[0]
    assert not is_epi(f)
    assert TensorProduct(FinModule.along(f), FinModule.along(f)).order == 16


@pytest.mark.parametrize("n,m", [(6, 2), (6, 3), (4, 2), (8, 4), (8, 2), (12, 4), (12, 6), (12, 3), (9, 3)])
def test_flatness_of_cyclic_quotients(n, m):
    """Ideal criterion for Z/n -> Z/m against the divisor count."""
    bad = oracles.zn_flat_failures(n, m)
    w = flat_witness(proj(n, m))
    assert (w is None) == (not bad)
    if bad:
        assert gcd(min(x for x in w.members if x), n) in bad


def test_ring_ground_truths():
    f62, f42 = proj(6, 2), proj(4, 2)
    assert is_flat(f62) and is_epi(f62)
    assert not is_flat(f42) and sorted(flat_witness(f42).members) == [0, 2]
    P, _ = product_ring([R("Z/2"), R("Z/3")])
    crt = find_ring_iso(R("Z/6"), P)
    assert is_faithfully_flat(crt)
    assert not is_faithfully_flat(f62) and [sorted(p.members) for p in missed_primes(f62)] == [[0, 3]]
    Z = zero_ring()
    assert is_faithfully_flat(RingHom.identity(Z))


def test_contraction_examples():
    c = spec_contraction(proj(6, 2))
    assert [(sorted(q.members), sorted(p.members)) for q, p in c.items()] == [([0], [0, 2, 4])]
    Z6 = R("Z/6")
    ident = spec_contraction(RingHom.identity(Z6))
    assert all(q == p for q, p in ident.items())
    assert spec_contraction(ring_homs(Z6, zero_ring())[0]) == {}


def test_local_factors():
    assert [lf.ring.order for lf in local_factors(R("Z/6"))] == [2, 3]
    assert [lf.ring.order for lf in local_factors(R("Z/4"))] == [4]
    assert local_factors(zero_ring()) == []


def test_isomorphism_search():
    assert find_ring_iso(R("Z/4"), R("Z/2 x Z/2")) is None
    A = R("F4")
    assert find_ring_iso(A, A) is not None


def test_normal_forms():
    assert ab_normal_form(AbPresentation(2, ((2, 0), (0, 3)))) == [6]
    assert ab_normal_form(AbPresentation(1)) == [0]
    assert ab_normal_form(AbPresentation(2, ((1, 0), (0, 1)))) == []


def test_tensor_cap():
    with use_caps(max_tensor_order=2):
        with pytest.raises(SizeCapExceeded):
            tensor_ring(proj(4, 4), proj(4, 4))


@given(maps)
def test_local_freeness_agrees_with_ideal_criterion(f):
    assert is_flat(f) == (ideal_flat_witness(f) is None)


@given(maps, maps)
def test_flat_maps_compose(f, g):
    if f.target == g.source and is_flat(f) and is_flat(g):
        assert is_flat(compose_homs(g, f))


@given(maps)
def test_epis_are_injective_on_spectra(f):
    if is_epi(f):
        c = spec_contraction(f)
        assert len(set(c.values())) == len(c)
        for q, p in c.items():
            kq, _ = residue_field(f.target, q)
            kp, _ = residue_field(f.source, p)
            assert find_ring_iso(kq, kp) is not None


@given(st.sampled_from(CORPUS))
def test_local_factors_multiply_back(name):
    A = R(name)
    P, _ = product_ring([lf.ring for lf in local_factors(A)])
    assert find_ring_iso(P, A) is not None


def _small_modules(A):
    cyc = [FinModule.cyclic(I) for I in ideals_of(A) if len(I) < A.order]
    sums = [M.direct_sum(N) for M, N in itertools.combinations_with_replacement(cyc, 2)
            if M.order * N.order <= 8]
    return cyc + sums


@pytest.mark.parametrize("a,b", list(itertools.product(SUB_CORPUS, SUB_CORPUS)))
def test_faithful_flatness_against_modules(a, b):
    """Flat and surjective on primes iff flat and no nonzero small module dies."""
    mods = _small_modules(R(a))
    for f in ring_homs(R(a), R(b)):
        if is_flat(f):
            assert is_faithfully_flat(f) == is_faithful_module_functor(f, mods)
