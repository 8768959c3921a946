"""Lax data indexed by posets, the cylinder construction and its universal property.

Transitions point down the shape: for p <= q, ``X_pq: X(q) -> X(p)``.
The cylinder has points ``(p, x)`` with ``(p, x) <= (q, y)`` iff p <= q and
``x <= X_pq(y)`` in X(p).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .cdata import (CData, CDataMorphism, check_functorial, compose_morphisms, enumerate_morphisms,
                    fibered_product, hom_poset, identity_morphism, inclusion_point, two_cell_leq)
from .config import CAPS
from .errors import NonFunctorialTransitions, ShapeMismatch, SizeCapExceeded, ValidationError
from .ids import label
from .poset import STAR, MonotoneMap, Poset, complete_contravariant, poset_colimit

CONVENTION = "transitions X_pq: X(q) -> X(p) for p <= q; 2-cells f#_x = g#_x . G_f(x)g(x)"


class LaxDatum:
    __slots__ = ("shape", "fibers", "transitions", "kernel")

    def __init__(self, shape: Poset, fibers: Mapping, transitions: Mapping = None, check=True, kernel=None):
        self.shape = shape
        self.fibers = dict(fibers)
        kernels = {F.kernel.name for F in self.fibers.values()} | ({kernel.name} if kernel else set())
        if len(kernels) > 1:
            raise ValidationError("fibers use different kernels")
        if set(self.fibers) != set(shape.elements):
            raise ValidationError("fibers must be given for every shape point")
        if kernel is None and not self.fibers:
            raise ValidationError("a datum over the empty shape needs an explicit kernel")
        self.kernel = kernel or next(iter(self.fibers.values())).kernel
        given = dict(transitions or {})
        for (p, q), t in given.items():
            if not shape.leq(p, q):
                raise NonFunctorialTransitions(f"transition for unrelated {label(p)}, {label(q)}",
                                               witness=(p, q))
            if t.source != self.fibers[q] or t.target != self.fibers[p]:
                raise NonFunctorialTransitions(f"transition {label(p)}<{label(q)} has the wrong type",
                                               witness=(p, q))
        self.transitions = complete_contravariant(shape, self.fibers, given, compose_morphisms,
                                                  identity_morphism)
        if check:
            self.verify()

    def verify(self):
        for p in self.shape.elements:
            if self.transitions[(p, p)] != identity_morphism(self.fibers[p]):
                raise NonFunctorialTransitions(f"X_pp is not the identity at {label(p)}",
                                               witness=(p, p, p))
        for p, q in self.shape.related_pairs():
            for r in self.shape.above(q):
                if r != q and compose_morphisms(self.transitions[(p, q)],
                                                self.transitions[(q, r)]) != self.transitions[(p, r)]:
                    raise NonFunctorialTransitions("X_pr != X_pq . X_qr", witness=(p, q, r))

    def transition(self, p, q) -> CDataMorphism:
        return self.transitions[(p, q)]

    def __eq__(self, other):
        if not isinstance(other, LaxDatum):
            return NotImplemented
        return (self.shape == other.shape and self.fibers == other.fibers
                and self.transitions == other.transitions)

    def __hash__(self):
        return hash(self.shape)


def cylinder(X: LaxDatum) -> CData:
    K = X.kernel
    shape = X.shape
    pts = [(p, x) for p in shape.elements for x in X.fibers[p].points]

    def leq(a, b):
        (p, x), (q, y) = a, b
        return shape.leq(p, q) and X.fibers[p].base.leq(x, X.transitions[(p, q)].base(y))

    base = Poset.from_relation(pts, leq)
    stalks = {(p, x): X.fibers[p].stalk(x) for p, x in pts}
    restr = {}
    for a in base.elements:
        p, x = a
        for b in base.above(a):
            q, y = b
            t = X.transitions[(p, q)]
            restr[(a, b)] = K.compose(t.sharp[y], X.fibers[p].restriction(x, t.base(y)))
    check_functorial(K, base, restr)
    return CData(K, base, stalks, restr)


def fiber_inclusion(X: LaxDatum, p, C: CData = None) -> CDataMorphism:
    """X(p) -> Cyl(X), x -> (p, x), identity comorphisms."""
    C = cylinder(X) if C is None else C
    F = X.fibers[p]
    return CDataMorphism(F, C, MonotoneMap(F.base, C.base, [(p, x) for x in F.points], check=False),
                         {x: X.kernel.identity(F.stalk(x)) for x in F.points}, check=False)


def relabel(F: CData, rename) -> CData:
    """The same datum with points renamed by the injective function ``rename``."""
    new = [rename(x) for x in F.points]
    mapping = dict(zip(F.points, new))
    inverse = {v: k for k, v in mapping.items()}
    base = Poset.from_relation(new, lambda a, b: F.base.leq(inverse[a], inverse[b]))
    return CData(F.kernel, base, {mapping[x]: F.stalk(x) for x in F.points},
                 {(mapping[x], mapping[y]): m for (x, y), m in F.restrictions.items()})


def point_indexing(F: CData) -> LaxDatum:
    """The datum F viewed over the one-point shape."""
    return LaxDatum(Poset.point(), {STAR: F})


def points_datum(F: CData) -> LaxDatum:
    """Shape |F|, fiber (⋆, F(x)) at x, transitions carrying F_xy as comorphism."""
    fibers = {x: inclusion_point(F.kernel, F.stalk(x)) for x in F.points}
    trans = {}
    for x, y in F.base.related_pairs():
        star = Poset.point()
        trans[(x, y)] = CDataMorphism(fibers[y], fibers[x], MonotoneMap.identity(star),
                                      {STAR: F.restriction(x, y)})
    return LaxDatum(F.base, fibers, trans, kernel=F.kernel)


def identity_law_report(F: CData) -> dict:
    """Cyl of the point-indexed and of the points datum both give back F."""
    a = relabel(cylinder(point_indexing(F)), lambda t: t[1])
    b = relabel(cylinder(points_datum(F)), lambda t: t[0])
    return {"point_indexing": a == F, "points_datum": b == F}


class LaxDatumMorphism:
    """Shape map φ with components X(p) -> Y(φ(p)) commuting strictly with transitions."""

    def __init__(self, source: LaxDatum, target: LaxDatum, shape_map: MonotoneMap,
                 components: Mapping, check=True):
        self.source = source
        self.target = target
        self.shape_map = shape_map
        self.components = dict(components)
        if check:
            self.verify()

    def verify(self):
        X, Y, phi = self.source, self.target, self.shape_map
        if phi.source != X.shape or phi.target != Y.shape:
            raise ShapeMismatch("shape map does not match the data")
        for p in X.shape.elements:
            c = self.components[p]
            if c.source != X.fibers[p] or c.target != Y.fibers[phi(p)]:
                raise ValidationError(f"component at {label(p)} has the wrong type", witness=p)
        for p, q in X.shape.related_pairs():
            lhs = compose_morphisms(self.components[p], X.transitions[(p, q)])
            rhs = compose_morphisms(Y.transitions[(phi(p), phi(q))], self.components[q])
            if lhs != rhs:
                raise ValidationError(f"components do not commute on {label(p)}<{label(q)}",
                                      witness=(p, q))


def identity_datum_morphism(X: LaxDatum) -> LaxDatumMorphism:
    return LaxDatumMorphism(X, X, MonotoneMap.identity(X.shape),
                            {p: identity_morphism(X.fibers[p]) for p in X.shape.elements}, check=False)


def compose_datum_morphisms(g: LaxDatumMorphism, f: LaxDatumMorphism) -> LaxDatumMorphism:
    from .poset import compose_maps
    comps = {p: compose_morphisms(g.components[f.shape_map(p)], f.components[p])
             for p in f.source.shape.elements}
    return LaxDatumMorphism(f.source, g.target, compose_maps(g.shape_map, f.shape_map), comps,
                            check=False)


def cylinder_map(phi: LaxDatumMorphism, source: CData = None, target: CData = None) -> CDataMorphism:
    C = cylinder(phi.source) if source is None else source
    D = cylinder(phi.target) if target is None else target
    values, sharp = [], {}
    for p, x in C.points:
        comp = phi.components[p]
        values.append((phi.shape_map(p), comp.base(x)))
        sharp[(p, x)] = comp.sharp[x]
    return CDataMorphism(C, D, MonotoneMap(C.base, D.base, values), sharp)


def collapse_to_point(X: LaxDatum, cocone: Mapping, Y: CData) -> LaxDatumMorphism:
    """Shape collapse P -> ⋆ given a strict cocone f_p: X(p) -> Y."""
    target = point_indexing(Y)
    phi = MonotoneMap.constant(X.shape, target.shape, STAR)
    return LaxDatumMorphism(X, target, phi, cocone)


# universal property ----------------------------------------------------------

@dataclass
class LaxTransformations:
    families: list  # each a tuple of components ordered by shape elements
    poset: Poset


def lax_transformations(X: LaxDatum, Y: CData) -> LaxTransformations:
    order = X.shape.linear_extension()
    homs = {p: enumerate_morphisms(X.fibers[p], Y) for p in order}
    chosen = {}
    out = []
    # composites f_p . X_pq, cached per (p, q, index)
    composite = {}

    def comp(p, q, i):
        key = (p, q, i)
        if key not in composite:
            composite[key] = compose_morphisms(homs[p][i], X.transitions[(p, q)])
        return composite[key]

    def rec(k):
        if k == len(order):
            out.append(tuple(homs[p][chosen[p]] for p in X.shape.elements))
            if len(out) > CAPS.max_homs:
                raise SizeCapExceeded("too many lax transformations")
            return
        q = order[k]
        for j, fq in enumerate(homs[q]):
            ok = True
            for p in order[:k]:
                if X.shape.leq(p, q) and not two_cell_leq(comp(p, q, chosen[p]), fq):
                    ok = False
                    break
                if X.shape.leq(q, p) and not two_cell_leq(
                        compose_morphisms(fq, X.transitions[(q, p)]), homs[p][chosen[p]]):
                    ok = False
                    break
            if ok:
                chosen[q] = j
                rec(k + 1)
        chosen.pop(q, None)

    rec(0)
    n = len(out)
    rel = [[all(two_cell_leq(a, b) for a, b in zip(out[i], out[j])) for j in range(n)]
           for i in range(n)]
    return LaxTransformations(out, Poset.from_relation(range(n), lambda i, j: rel[i][j]))


def verify_lax_colimit(X: LaxDatum, Y: CData) -> dict:
    """Restriction along fiber inclusions: Hom(Cyl X, Y) -> Lax(X, Y), checked to be an iso."""
    C = cylinder(X)
    H = hom_poset(C, Y)
    L = lax_transformations(X, Y)
    inclusions = {p: fiber_inclusion(X, p, C) for p in X.shape.elements}
    index = {fam: i for i, fam in enumerate(L.families)}
    image = []
    report = {"convention": CONVENTION, "homs": len(H), "lax": len(L.families)}
    for h_idx, h in enumerate(H.morphisms):
        fam = tuple(compose_morphisms(h, inclusions[p]) for p in X.shape.elements)
        j = index.get(fam)
        if j is None:
            report.update(iso=False, witness={"reason": "restriction is not a lax transformation",
                                              "morphism": h_idx})
            return report
        image.append(j)
    if len(set(image)) != len(image):
        report.update(iso=False, witness={"reason": "not injective"})
        return report
    if len(image) != len(L.families):
        missing = next(j for j in range(len(L.families)) if j not in set(image))
        report.update(iso=False, witness={"reason": "not surjective", "lax": missing})
        return report
    for a in range(len(image)):
        for b in range(len(image)):
            if H.poset.leq(a, b) != L.poset.leq(image[a], image[b]):
                report.update(iso=False, witness={"reason": "order not preserved", "pair": [a, b]})
                return report
    report.update(iso=True, witness=None)
    return report


# fibered products -------------------------------------------------------------

def fiberwise_product(f: LaxDatumMorphism, g: LaxDatumMorphism):
    """X ×_Z Y for data morphisms over the identity of a shared shape."""
    X, Y, Z = f.source, g.source, f.target
    if g.target is not Z and g.target != Z:
        raise ShapeMismatch("legs have different targets")
    if X.shape != Y.shape or X.shape != Z.shape:
        raise ShapeMismatch("fiberwise products need a shared shape")
    for phi in (f.shape_map, g.shape_map):
        if phi != MonotoneMap.identity(X.shape):
            raise ShapeMismatch("shape maps must be identities")
    fps = {p: fibered_product(f.components[p], g.components[p]) for p in X.shape.elements}
    trans = {}
    for p, q in X.shape.related_pairs():
        fq = fps[q]
        a = compose_morphisms(X.transitions[(p, q)], fq.left)
        b = compose_morphisms(Y.transitions[(p, q)], fq.right)
        trans[(p, q)] = fps[p].pair(a, b)
    return LaxDatum(X.shape, {p: fps[p].datum for p in X.shape.elements}, trans), fps


def check_fiber_product_commute(f: LaxDatumMorphism, g: LaxDatumMorphism) -> dict:
    XY, _ = fiberwise_product(f, g)
    lhs = cylinder(XY)
    fp = fibered_product(cylinder_map(f), cylinder_map(g))
    rhs = fp.datum
    # canonical bijection (p, (x, y)) <-> ((p, x), (p, y))
    moved = relabel(lhs, lambda t: ((t[0], t[1][0]), (t[0], t[1][1])))
    if moved.base != rhs.base:
        diff = sorted(set(moved.base.elements) ^ set(rhs.base.elements), key=str)
        return {"iso": False, "witness": {"reason": "underlying posets differ",
                                          "points": [str(d) for d in diff[:3]]}}
    for x in rhs.points:
        if moved.stalk(x) != rhs.stalk(x):
            return {"iso": False, "witness": {"reason": "stalks differ", "point": str(x)}}
    for key, m in rhs.restrictions.items():
        if moved.restrictions[key] != m:
            return {"iso": False, "witness": {"reason": "restrictions differ", "pair": str(key)}}
    return {"iso": True, "witness": None, "points": len(rhs.points)}


# comparison with the ordinary colimit ----------------------------------------

@dataclass
class ColimitComparison:
    colimit: object
    map: MonotoneMap
    surjective: bool
    cocone_ok: bool


def comparison_to_colimit(X: LaxDatum) -> ColimitComparison:
    """Cyl(X) -> colimit of the underlying posets, (p, x) -> class of (p, x)."""
    C = cylinder(X)
    fibers = {p: X.fibers[p].base for p in X.shape.elements}
    trans = {pq: t.base for pq, t in X.transitions.items() if pq[0] != pq[1]}
    colim = poset_colimit(X.shape, fibers, trans)
    values = [colim.cocone[p](x) for p, x in C.points]
    m = MonotoneMap(C.base, colim.poset, values)
    cocone_ok = all(m((p, x)) == colim.cocone[p](x) for p, x in C.points)
    return ColimitComparison(colim, m, set(values) == set(colim.poset.elements), cocone_ok)
