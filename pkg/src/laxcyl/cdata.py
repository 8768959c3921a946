"""Posets with a structure functor into a kernel category, and their morphisms.

A datum assigns a kernel object to each point and a morphism
``F_xy: F(x) -> F(y)`` to each pair ``x <= y``.  A morphism ``F -> G`` is a
monotone base map ``f`` with comorphisms ``f#_x: G(f(x)) -> F(x)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .config import CAPS
from .errors import (NonFunctorial, NotUpClosed, ShapeMismatch, SizeCapExceeded, UnknownElement,
                     ValidationError)
from .ids import label, sort_ids
from .kernels import Kernel, Limit
from .poset import STAR, MonotoneMap, Poset, compose_maps, enumerate_monotone, map_leq


class CData:
    __slots__ = ("kernel", "base", "stalks", "restrictions", "_hash")

    def __init__(self, kernel: Kernel, base: Poset, stalks: Mapping, restrictions: Mapping):
        # Internal: ``restrictions`` complete (every x <= y, identities included).
        self.kernel = kernel
        self.base = base
        self.stalks = dict(stalks)
        self.restrictions = dict(restrictions)
        self._hash = None

    def stalk(self, x):
        return self.stalks[x]

    def restriction(self, x, y):
        try:
            return self.restrictions[(x, y)]
        except KeyError:
            raise ValidationError(f"{label(x)} is not below {label(y)}") from None

    @property
    def points(self):
        return self.base.elements

    def __len__(self):
        return len(self.base)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, CData):
            return NotImplemented
        return (self.kernel.name == other.kernel.name and self.base == other.base
                and self.stalks == other.stalks and self.restrictions == other.restrictions)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.kernel.name, self.base))
        return self._hash

    def __repr__(self):
        return f"CData({self.kernel.name}, {self.base!r})"


def make_cdata(kernel: Kernel, base: Poset, stalks: Mapping, restrictions: Mapping = None) -> CData:
    """Validated datum.  Restrictions may be given on covers only; the rest are composed."""
    restrictions = dict(restrictions or {})
    for x in base.elements:
        if x not in stalks:
            raise UnknownElement(f"no stalk at {label(x)}")
        if not kernel.is_object(stalks[x]):
            raise ValidationError(f"stalk at {label(x)} is not a {kernel.name} object", witness=x)
    for (x, y), m in restrictions.items():
        if x not in base or y not in base:
            raise UnknownElement(f"restriction {label(x)}<{label(y)} mentions unknown point")
        if not base.leq(x, y):
            raise ValidationError(f"restriction given for unrelated pair {label(x)}, {label(y)}",
                                  witness=(x, y))
        if m.source != stalks[x] or m.target != stalks[y]:
            raise ValidationError(f"restriction {label(x)}<{label(y)} has the wrong type",
                                  witness=(x, y))
    full = complete_covariant(kernel, base, stalks, restrictions)
    check_functorial(kernel, base, full)
    return CData(kernel, base, stalks, full)


def complete_covariant(kernel, base: Poset, stalks, given):
    full = dict(given)
    for x in base.elements:
        full.setdefault((x, x), kernel.identity(stalks[x]))

    def interval(pair):
        x, y = pair
        return sum(1 for m in base.above(x) if base.leq(m, y))

    for x, y in sorted(base.related_pairs(), key=interval):
        if (x, y) in full:
            continue
        for m in sort_ids(m for m in base.above(x) if m not in (x, y) and base.leq(m, y)):
            if (x, m) in full and (m, y) in full:
                full[(x, y)] = kernel.compose(full[(m, y)], full[(x, m)])
                break
        else:
            raise NonFunctorial(f"no restriction for cover {label(x)}<{label(y)}", witness=(x, y))
    return full


def check_functorial(kernel, base: Poset, full):
    for x in base.elements:
        if full[(x, x)] != kernel.identity(full[(x, x)].source):
            raise NonFunctorial(f"F_xx is not the identity at {label(x)}", witness=(x, x, x))
    for x, y in base.related_pairs():
        for z in base.above(y):
            if z != y and kernel.compose(full[(y, z)], full[(x, y)]) != full[(x, z)]:
                raise NonFunctorial(
                    f"F_{label(y)}{label(z)} . F_{label(x)}{label(y)} != F_{label(x)}{label(z)}",
                    witness=(x, y, z))


def inclusion_point(kernel: Kernel, obj) -> CData:
    """The datum (⋆, obj)."""
    return make_cdata(kernel, Poset.point(), {STAR: obj})


class CDataMorphism:
    __slots__ = ("source", "target", "base", "sharp", "_hash")

    def __init__(self, source: CData, target: CData, base: MonotoneMap, sharp: Mapping, check=True):
        self.source = source
        self.target = target
        self.base = base
        self.sharp = dict(sharp)
        self._hash = None
        if check:
            self.verify()

    def verify(self):
        F, G, f = self.source, self.target, self.base
        if f.source != F.base or f.target != G.base:
            raise ShapeMismatch("base map does not match the data")
        K = F.kernel
        for x in F.points:
            if x not in self.sharp:
                raise UnknownElement(f"no comorphism at {label(x)}")
            s = self.sharp[x]
            if s.source != G.stalk(f(x)) or s.target != F.stalk(x):
                raise ValidationError(f"comorphism at {label(x)} has the wrong type", witness=x)
        for x, y in F.base.related_pairs():
            lhs = K.compose(F.restriction(x, y), self.sharp[x])
            rhs = K.compose(self.sharp[y], G.restriction(f(x), f(y)))
            if lhs != rhs:
                raise ValidationError(f"comorphisms not natural on {label(x)}<{label(y)}",
                                      witness=(x, y))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, CDataMorphism):
            return NotImplemented
        return self.base == other.base and self.sharp == other.sharp

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.base)
        return self._hash

    def __repr__(self):
        return f"CDataMorphism({self.base!r})"


def identity_morphism(F: CData) -> CDataMorphism:
    return CDataMorphism(F, F, MonotoneMap.identity(F.base),
                         {x: F.kernel.identity(F.stalk(x)) for x in F.points}, check=False)


def compose_morphisms(g: CDataMorphism, f: CDataMorphism) -> CDataMorphism:
    """``g ∘ f`` with ``(g∘f)#_x = f#_x ∘ g#_{f(x)}``."""
    if f.target != g.source:
        raise ShapeMismatch("morphisms are not composable")
    K = f.source.kernel
    sharp = {x: K.compose(f.sharp[x], g.sharp[f.base(x)]) for x in f.source.points}
    return CDataMorphism(f.source, g.target, compose_maps(g.base, f.base), sharp, check=False)


def two_cell_leq(f: CDataMorphism, g: CDataMorphism, enriched: bool = False) -> bool:
    """f <= g: |f| <= |g| and f#_x = g#_x ∘ G_{f(x)g(x)} at every x.

    With ``enriched`` the equation is relaxed to the kernel order
    (only meaningful for kernels with an order, e.g. FinPos).
    """
    if f.source != g.source or f.target != g.target:
        raise ShapeMismatch("morphisms are not parallel")
    if not map_leq(f.base, g.base):
        return False
    G = f.target
    K = G.kernel
    for x in f.source.points:
        via = K.compose(g.sharp[x], G.restriction(f.base(x), g.base(x)))
        if enriched:
            if not K.leq(f.sharp[x], via):
                return False
        elif f.sharp[x] != via:
            return False
    return True


def enumerate_morphisms(F: CData, G: CData) -> list:
    """All morphisms F -> G: base maps in lexicographic order, then comorphisms."""
    K = F.kernel
    out = []
    order = F.base.linear_extension()
    hom_cache = {}

    def homs(a, b):
        key = (id(a), id(b))
        if key not in hom_cache:
            hom_cache[key] = K.homs(a, b)
        return hom_cache[key]

    for f in enumerate_monotone(F.base, G.base):
        sharp = {}

        def rec(k):
            if k == len(order):
                out.append(CDataMorphism(F, G, f, sharp, check=False))
                if len(out) > CAPS.max_homs:
                    raise SizeCapExceeded("too many morphisms to enumerate")
                return
            x = order[k]
            fx = f(x)
            earlier = [w for w in order[:k] if F.base.leq(w, x)]
            for s in homs(G.stalk(fx), F.stalk(x)):
                ok = True
                for w in earlier:
                    lhs = K.compose(F.restriction(w, x), sharp[w])
                    rhs = K.compose(s, G.restriction(f(w), fx))
                    if lhs != rhs:
                        ok = False
                        break
                if ok:
                    sharp[x] = s
                    rec(k + 1)
                    del sharp[x]

        rec(0)
    return out


@dataclass
class HomPoset:
    morphisms: list
    poset: Poset  # elements are indices into ``morphisms``

    def __len__(self):
        return len(self.morphisms)


def hom_poset(F: CData, G: CData, enriched: bool = False) -> HomPoset:
    morphisms = enumerate_morphisms(F, G)
    n = len(morphisms)
    rel = [[two_cell_leq(morphisms[i], morphisms[j], enriched) for j in range(n)] for i in range(n)]
    P = Poset.from_relation(range(n), lambda i, j: rel[i][j])
    return HomPoset(morphisms, P)


def sections_on(F: CData, U=None) -> Limit:
    """Limit of F restricted to the up-closed subset U (all of F by default)."""
    U = F.points if U is None else list(U)
    for x in U:
        if x not in F.base:
            raise UnknownElement(f"unknown point {label(x)}")
    if not F.base.is_up_closed(U):
        raise NotUpClosed("sections need an up-closed subset")
    Uset = set(U)
    objects = {x: F.stalk(x) for x in U}
    arrows = {(x, y): m for (x, y), m in F.restrictions.items()
              if x in Uset and y in Uset and x != y}
    return F.kernel.limit(objects, arrows)


def sections_restriction(F: CData, V, U):
    """For U ⊆ V up-closed, the kernel map sections(V) -> sections(U)."""
    LV, LU = sections_on(F, V), sections_on(F, U)
    if not set(U) <= set(V):
        raise ShapeMismatch("U is not contained in V")
    K = F.kernel
    if K.name == "ring":
        from .finring import RingHom
        values = [LU.obj.element_of(tuple(LV.families[e][x] for x in sort_ids(U)))
                  for e in range(LV.obj.order)]
        return RingHom(LV.obj, LU.obj, values, check=False), LV, LU
    values = [tuple(LV.families[k][x] for x in sort_ids(U)) for k in range(len(LV.obj))]
    return MonotoneMap(LV.obj, LU.obj, values), LV, LU


@dataclass
class FiberedProduct:
    datum: CData
    left: CDataMorphism  # projection to F
    right: CDataMorphism  # projection to G
    pushouts: dict  # (x, y) -> kernel Pushout
    f: CDataMorphism
    g: CDataMorphism

    def pair(self, a: CDataMorphism, b: CDataMorphism, check=True) -> CDataMorphism:
        """The induced map K -> F ×_H G from a: K -> F and b: K -> G."""
        K = a.source
        if b.source != K:
            raise ShapeMismatch("pairing legs have different sources")
        kern = K.kernel
        values, sharp = [], {}
        for k in K.points:
            x, y = a.base(k), b.base(k)
            if self.f.base(x) != self.g.base(y):
                raise ValidationError("legs do not agree over the base", witness=k)
            values.append((x, y))
            sharp[k] = kern.copair(self.pushouts[(x, y)], a.sharp[k], b.sharp[k])
        base = MonotoneMap(K.base, self.datum.base, values)
        return CDataMorphism(K, self.datum, base, sharp, check=check)


def fibered_product(f: CDataMorphism, g: CDataMorphism) -> FiberedProduct:
    """F ×_H G for f: F -> H, g: G -> H; stalks are kernel pushouts."""
    if f.target != g.target:
        raise ShapeMismatch("fibered product legs have different targets")
    F, G = f.source, g.source
    K = F.kernel
    pts = [(x, y) for x in F.points for y in G.points if f.base(x) == g.base(y)]
    base = Poset.from_relation(pts, lambda a, b: F.base.leq(a[0], b[0]) and G.base.leq(a[1], b[1]))
    pushouts = {(x, y): K.pushout(f.sharp[x], g.sharp[y]) for x, y in pts}
    stalks = {p: pushouts[p].obj for p in pts}
    restr = {}
    for (x, y), (x2, y2) in base.related_pairs():
        po, po2 = pushouts[(x, y)], pushouts[(x2, y2)]
        restr[((x, y), (x2, y2))] = K.copair(
            po, K.compose(po2.left, F.restriction(x, x2)), K.compose(po2.right, G.restriction(y, y2)))
    for p in pts:
        restr[(p, p)] = K.identity(stalks[p])
    D = CData(K, base, stalks, restr)
    check_functorial(K, base, restr)
    left = CDataMorphism(D, F, MonotoneMap(base, F.base, [p[0] for p in base.elements], check=False),
                         {p: pushouts[p].left for p in base.elements})
    right = CDataMorphism(D, G, MonotoneMap(base, G.base, [p[1] for p in base.elements], check=False),
                          {p: pushouts[p].right for p in base.elements})
    return FiberedProduct(D, left, right, pushouts, f, g)


def points_of(F: CData, x) -> CData:
    """The datum (⋆, F(x))."""
    return inclusion_point(F.kernel, F.stalk(x))


def restrict_to(F: CData, U) -> CData:
    """The datum on an up-closed subset U with the induced structure."""
    if not F.base.is_up_closed(U):
        raise NotUpClosed("restriction needs an up-closed subset")
    base = F.base.induced(U)
    Uset = set(U)
    return CData(F.kernel, base, {x: F.stalk(x) for x in base.elements},
                 {(x, y): m for (x, y), m in F.restrictions.items() if x in Uset and y in Uset})


def inclusion_of(F: CData, U) -> CDataMorphism:
    """Open inclusion F|_U -> F with identity comorphisms."""
    D = restrict_to(F, U)
    return CDataMorphism(D, F, MonotoneMap(D.base, F.base, D.base.elements, check=False),
                         {x: F.kernel.identity(F.stalk(x)) for x in D.points}, check=False)
