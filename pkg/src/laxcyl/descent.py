"""Geometric data on ringed posets, internal and external descent, quasi-coherent families.

A geometric datum here is FinSet-valued: it sends a ringed poset to a finite
set and a morphism to a function.  Colimits are computed exactly as
quotients of disjoint unions.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from .cdata import (CData, CDataMorphism, identity_morphism, inclusion_of, inclusion_point,
                    restrict_to)
from .errors import NoColimitsProvider, ShapeMismatch, ValidationError
from .finring import TensorProduct
from .finring.tensor import FinModule, table_times
from .ids import label
from .kernels import FINCRING, set_colimit
from .poset import STAR, MonotoneMap, Poset
from .schematic import (augmentation_morphism, is_qc_iso, is_schematic, jointly_surjective, nerve_datum,
                        spec_map, spec_space)


@dataclass(frozen=True)
class GeometricDatum:
    """A functor from ringed posets to finite sets: objects to point sets, morphisms to functions."""

    name: str
    evaluate: Callable[[CData], Poset]
    act: Callable[[CDataMorphism], dict]
    target_kernel: str = "set"

    def __call__(self, X: CData) -> Poset:
        return self.evaluate(X)


def _spec_points(X: CData) -> Poset:
    return Poset.antichain(spec_space(X).points)


def _spec_action(f: CDataMorphism) -> dict:
    point_map, _, _, _ = spec_map(f)
    return point_map


def builtin_spec_pts() -> GeometricDatum:
    """The point set of Spec, with induced maps of points."""
    return GeometricDatum("specpts", _spec_points, _spec_action)


def chart_count_datum() -> GeometricDatum:
    """The underlying point set of the poset; not invariant under qc-isomorphisms."""
    return GeometricDatum("charts", lambda X: Poset.antichain(X.points),
                          lambda f: {x: f.base(x) for x in f.source.points})


DATA = {"specpts": builtin_spec_pts, "charts": chart_count_datum}


def _is_bijection(fn: Mapping, source: Poset, target: Poset) -> bool:
    values = [fn[s] for s in source.elements]
    return len(set(values)) == len(values) == len(target) and set(values) <= set(target.elements)


def check_geometric(dat: GeometricDatum, arrows) -> dict:
    """Each sample qc-isomorphism must go to a bijection."""
    checked = 0
    for k, f in enumerate(arrows):
        qc = is_qc_iso(f)
        if not qc["verdict"]:
            continue
        checked += 1
        fn = dat.act(f)
        A, B = dat(f.source), dat(f.target)
        if not _is_bijection(fn, A, B):
            return {"condition": "geometric", "verdict": False, "checked": checked,
                    "witness": {"arrow": k, "sizes": [len(A), len(B)]}}
    return {"condition": "geometric", "verdict": True, "checked": checked, "witness": None}


def _require_set_target(dat: GeometricDatum):
    if dat.target_kernel != "set":
        raise NoColimitsProvider(f"no colimits provider for {dat.target_kernel}-valued data")


def _compare(objects: dict, arrows: dict, cocone: dict, target: Poset) -> dict:
    """Colimit of the diagram ``objects``/``arrows`` against a cocone into ``target``."""
    reps, classes = set_colimit(objects, {k: m.__getitem__ for k, m in arrows.items()})
    induced = {}
    for i, obj in objects.items():
        for s in obj.elements:
            c = classes[i][s]
            img = cocone[i][s]
            if induced.setdefault(c, img) != img:
                return {"iso": False, "colimit_size": len(reps), "target_size": len(target),
                        "witness": {"reason": "cocone does not factor", "class": label(c)}}
    values = [induced[c] for c in reps]
    ok = len(set(values)) == len(values) == len(target)
    return {"iso": ok, "colimit_size": len(reps), "target_size": len(target),
            "witness": None if ok else {"reason": "comparison not bijective"}}


def _star_map(X: CData, x, y) -> CDataMorphism:
    """(⋆, O_y) -> (⋆, O_x) with comorphism the restriction O_x -> O_y."""
    A, B = inclusion_point(FINCRING, X.stalk(y)), inclusion_point(FINCRING, X.stalk(x))
    return CDataMorphism(A, B, MonotoneMap.identity(A.base), {STAR: X.restriction(x, y)}, check=False)


def _collapse(X: CData, x):
    """(U_x -> (⋆, O_x), U_x -> X) for the open star U_x."""
    U = X.base.above(x)
    Ux = restrict_to(X, U)
    P = inclusion_point(FINCRING, X.stalk(x))
    left = CDataMorphism(Ux, P, MonotoneMap.constant(Ux.base, P.base, STAR),
                         {z: X.restriction(x, z) for z in Ux.points})
    return left, inclusion_of(X, U)


def check_internal_descent(dat: GeometricDatum, X: CData) -> dict:
    """colim_x dat(⋆, O_x) -> dat(X), through dat(⋆, O_x) <- dat(U_x) -> dat(X)."""
    _require_set_target(dat)
    objects, arrows, cocone = {}, {}, {}
    target = dat(X)
    for x in X.points:
        objects[x] = dat(inclusion_point(FINCRING, X.stalk(x)))
        left, right = _collapse(X, x)
        qc = is_qc_iso(left)
        if not qc["verdict"]:
            return {"condition": "internal descent", "verdict": False,
                    "witness": {"reason": "star collapse not a qc-iso", "point": label(x),
                                "detail": qc["witness"]}}
        lmap, rmap = dat.act(left), dat.act(right)
        inverse = {v: k for k, v in lmap.items()}
        if len(inverse) != len(lmap) or len(inverse) != len(objects[x]):
            return {"condition": "internal descent", "verdict": False,
                    "witness": {"reason": "datum does not invert the collapse", "point": label(x)}}
        cocone[x] = {s: rmap[inverse[s]] for s in objects[x].elements}
    for x, y in X.base.related_pairs():
        arrows[(y, x)] = dat.act(_star_map(X, x, y))
    cmp = _compare(objects, arrows, cocone, target)
    return {"condition": "internal descent", "verdict": cmp["iso"], **cmp}


def check_external_descent(dat: GeometricDatum, cover) -> dict:
    """colim over the nerve of dat(U(Δ)) -> dat(X).

    The comparison is only asserted when X is schematic, the legs form a
    covering and the datum is geometric with internal descent on X and on
    every U(Δ); ``preconditions`` records each of these.
    """
    _require_set_target(dat)
    nerve = nerve_datum(cover)
    X = nerve.space
    shape = nerve.datum.shape
    joint, _ = jointly_surjective(cover)
    aug = augmentation_morphism(nerve)
    pre = {"schematic": is_schematic(X)["verdict"], "covering": joint,
           "geometric": check_geometric(dat, [identity_morphism(X), aug])["verdict"],
           "internal": check_internal_descent(dat, X)["verdict"]
           and all(check_internal_descent(dat, nerve.datum.fibers[d])["verdict"] for d in shape.elements)}
    objects = {d: dat(nerve.datum.fibers[d]) for d in shape.elements}
    arrows = {(big, small): dat.act(nerve.datum.transitions[(small, big)])
              for small, big in shape.related_pairs()}
    cocone = {d: dat.act(nerve.augmentation[d]) for d in shape.elements}
    cmp = _compare(objects, arrows, cocone, dat(X))
    return {"condition": "external descent", "verdict": cmp["iso"], "preconditions": pre,
            "preconditions_hold": all(pre.values()), "nerve_size": len(shape), **cmp}


# quasi-coherence ------------------------------------------------------------------

def module_zero(M: FinModule) -> int:
    return next(z for z in range(M.order) if M.add[z][z] == z)


@dataclass
class QcohFamily:
    """Modules M_x over O_x and additive comparison maps M_x -> M_y (lists of values)."""

    space: CData
    modules: dict
    maps: dict

    def __post_init__(self):
        self.verify()

    def verify(self):
        X = self.space
        for x in X.points:
            if self.modules[x].ring != X.stalk(x):
                raise ShapeMismatch(f"module at {label(x)} is over the wrong ring")
        for x, y in X.base.related_pairs():
            m = self.maps[(x, y)]
            Mx, My, r = self.modules[x], self.modules[y], X.restriction(x, y)
            if len(m) != Mx.order:
                raise ShapeMismatch(f"comparison {label(x)}<{label(y)} has the wrong length")
            for u in range(Mx.order):
                for v in range(Mx.order):
                    if m[Mx.add[u][v]] != My.add[m[u]][m[v]]:
                        raise ValidationError("comparison is not additive", witness=(x, y))
                for a in range(X.stalk(x).order):
                    if m[Mx.act[a][u]] != My.act[r.values[a]][m[u]]:
                        raise ValidationError("comparison is not linear over the restriction",
                                              witness=(x, y))


def structure_family(X: CData) -> QcohFamily:
    return QcohFamily(X, {x: FinModule.of_ring(X.stalk(x)) for x in X.points},
                      {(x, y): list(X.restriction(x, y).values) for x, y in X.base.related_pairs()})


def zero_family(X: CData) -> QcohFamily:
    mods = {x: FinModule(X.stalk(x), [[0]], [[0] for _ in range(X.stalk(x).order)]) for x in X.points}
    return QcohFamily(X, mods, {(x, y): [0] for x, y in X.base.related_pairs()})


def is_quasi_coherent(fam: QcohFamily) -> dict:
    """M_x ⊗_{O_x} O_y -> M_y bijective for every x < y."""
    X = fam.space
    for x, y in X.base.related_pairs():
        Mx, My, m = fam.modules[x], fam.modules[y], fam.maps[(x, y)]
        T = TensorProduct(Mx, FinModule.along(X.restriction(x, y)))
        zero = module_zero(My)
        vals = T.induced(lambda u, b: My.act[b][m[u]], lambda a, c: My.add[a][c], zero,
                         table_times(My.add, zero))
        if len(set(vals)) != T.order or T.order != My.order:
            return {"condition": "quasi-coherent", "verdict": False,
                    "witness": {"pair": [label(x), label(y)], "tensor_order": T.order,
                                "target_order": My.order}}
    return {"condition": "quasi-coherent", "verdict": True, "witness": None}


def restrict_family(fam: QcohFamily, U) -> QcohFamily:
    D = restrict_to(fam.space, U)
    Us = set(U)
    return QcohFamily(D, {x: fam.modules[x] for x in D.points},
                      {k: v for k, v in fam.maps.items() if k[0] in Us and k[1] in Us})


__all__ = ["GeometricDatum", "QcohFamily", "DATA", "builtin_spec_pts", "chart_count_datum",
           "check_geometric", "check_internal_descent", "check_external_descent", "is_quasi_coherent",
           "structure_family", "zero_family", "restrict_family", "module_zero"]
