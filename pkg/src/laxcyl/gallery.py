"""Small named instances shared by the corpus, the tests and the CLI."""
from __future__ import annotations

from .cdata import CData, CDataMorphism, inclusion_point, make_cdata
from .cylinder import LaxDatum
from .finring import RingHom, ring_homs, ring_preset
from .kernels import FINCRING, FINPOS
from .poset import STAR, MonotoneMap, Poset


def z6() -> CData:
    return inclusion_point(FINCRING, ring_preset("Z/6"))


def chart(name: str) -> CDataMorphism:
    """(⋆, R) -> (⋆, Z/6) with comorphism the projection Z/6 -> R."""
    X = z6()
    R = ring_preset(name)
    U = inclusion_point(FINCRING, R)
    return CDataMorphism(U, X, MonotoneMap.identity(U.base), {STAR: ring_homs(X.stalk(STAR), R)[0]})


def z6_cover() -> list:
    return [chart("Z/2"), chart("Z/3")]


def z6_subcover() -> list:
    return [chart("Z/2")]


def z6_chain() -> CData:
    """x < y with O_x = Z/6 and O_y = Z/2."""
    Z6, Z2 = ring_preset("Z/6"), ring_preset("Z/2")
    return make_cdata(FINCRING, Poset.chain(["x", "y"]), {"x": Z6, "y": Z2},
                      {("x", "y"): ring_homs(Z6, Z2)[0]})


def z4_chain() -> CData:
    """x < y with the non-flat restriction Z/4 -> Z/2."""
    Z4, Z2 = ring_preset("Z/4"), ring_preset("Z/2")
    return make_cdata(FINCRING, Poset.chain(["x", "y"]), {"x": Z4, "y": Z2},
                      {("x", "y"): ring_homs(Z4, Z2)[0]})


def z6_chain_projection() -> CDataMorphism:
    Y, X = z6_chain(), z6()
    return CDataMorphism(Y, X, MonotoneMap.constant(Y.base, X.base, STAR),
                         {"x": RingHom.identity(Y.stalk("x")), "y": Y.restriction("x", "y")})


CROWN = Poset.from_covers(["a", "b", "c", "d"], [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])


def pos_space(P: Poset) -> CData:
    """P over FinPos with one-point stalks."""
    one = Poset.antichain([0])
    return make_cdata(FINPOS, P, {x: one for x in P.elements},
                      {c: FINPOS.identity(one) for c in P.covers()})


def circle() -> CData:
    return pos_space(CROWN)


def _point_into(F: CData, x) -> CDataMorphism:
    P = pos_space(Poset.point())
    return CDataMorphism(P, F, MonotoneMap(P.base, F.base, [x]), {STAR: FINPOS.identity(P.stalk(STAR))})


def circle_datum() -> LaxDatum:
    return LaxDatum(Poset.point("o"), {"o": circle()})


def wedge_datum() -> LaxDatum:
    """u <= w >= v: two circles joined at the image of a point."""
    shape = Poset.from_covers(["u", "v", "w"], [("u", "w"), ("v", "w")])
    C1, C2 = circle(), circle()
    return LaxDatum(shape, {"u": C1, "v": C2, "w": pos_space(Poset.point())},
                    {("u", "w"): _point_into(C1, "a"), ("v", "w"): _point_into(C2, "c")})


def cone_datum() -> LaxDatum:
    """A point fiber at the bottom of the shape, so the cylinder has a minimum."""
    shape = Poset.chain(["b", "t"])
    C = circle()
    P = pos_space(Poset.point())
    collapse = CDataMorphism(C, P, MonotoneMap.constant(C.base, P.base, STAR),
                             {x: FINPOS.identity(C.stalk(x)) for x in C.points})
    return LaxDatum(shape, {"b": P, "t": C}, {("b", "t"): collapse})


def named_examples() -> dict:
    """name -> (kind, object)."""
    return {
        "z6": ("space", z6()),
        "z6-chain": ("space", z6_chain()),
        "z4-chain": ("space", z4_chain()),
        "z6-cover": ("cover", z6_cover()),
        "z6-subcover": ("cover", z6_subcover()),
        "circle": ("datum", circle_datum()),
        "wedge": ("datum", wedge_datum()),
        "cone": ("datum", cone_datum()),
    }


__all__ = ["z6", "chart", "z6_cover", "z6_subcover", "z6_chain", "z4_chain", "z6_chain_projection",
           "CROWN", "pos_space", "circle", "circle_datum", "wedge_datum", "cone_datum", "named_examples"]
