"""Pluggable finite category kernels: FinSet, FinPos and FinCRing.

A kernel supplies composition, identities, hom enumeration and (optionally)
finite limits, pushouts and an order on parallel morphisms.  Morphisms of
every kernel expose ``source`` and ``target`` and compare extensionally.

FinSet objects are discrete posets, so sets and posets share one map type.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import NoColimitsProvider, NoLimitsProvider, ShapeMismatch, ValidationError
from .finring import (FinRing, RingHom, TensorRing, compose_homs, ring_homs)
from .ids import id_key, sort_ids
from .poset import MonotoneMap, Poset, compose_maps, enumerate_monotone, map_leq, poset_colimit


@dataclass
class Pushout:
    """Pushout square ``left -> obj <- right`` under a common apex."""

    obj: object
    left: object
    right: object
    data: object = None


@dataclass
class Limit:
    obj: object
    projections: dict  # index -> morphism obj -> objects[index]
    families: list = None  # element -> {index: component}


class Kernel:
    name = "abstract"
    has_limits = False
    has_colimits = False
    has_order = False

    def identity(self, obj):
        raise NotImplementedError

    def compose(self, g, f):
        """``g ∘ f``."""
        raise NotImplementedError

    def homs(self, a, b) -> list:
        raise NotImplementedError

    def leq(self, m, n) -> bool:
        return m == n

    def is_object(self, obj) -> bool:
        raise NotImplementedError

    def limit(self, objects: dict, arrows: dict) -> Limit:
        raise NoLimitsProvider(f"kernel {self.name} has no limits provider")

    def pushout(self, f, g) -> Pushout:
        raise NoColimitsProvider(f"kernel {self.name} has no colimits provider")

    def copair(self, po: Pushout, u, v):
        raise NoColimitsProvider(f"kernel {self.name} has no colimits provider")

    def __repr__(self):
        return f"<kernel {self.name}>"


def _compatible_families(objects: dict, arrows: dict, elements_of, apply):
    """All families (s_i) with apply(m, s_i) == s_j for each arrow m: i -> j."""
    order = sort_ids(objects)
    pos = {i: k for k, i in enumerate(order)}
    constraints = {i: [] for i in order}
    for (i, j), m in arrows.items():
        later = i if pos[i] > pos[j] else j
        constraints[later].append((i, j, m))
    out = []
    current = {}

    def rec(k):
        if k == len(order):
            out.append(dict(current))
            return
        i = order[k]
        for s in elements_of(objects[i]):
            current[i] = s
            if all(apply(m, current[a]) == current[b] for a, b, m in constraints[i]):
                rec(k + 1)
        del current[i]

    rec(0)
    return order, out


class PosetKernel(Kernel):
    """FinPos: finite posets and monotone maps, ordered pointwise."""

    name = "poset"
    has_limits = True
    has_colimits = True
    has_order = True

    def identity(self, obj):
        return MonotoneMap.identity(obj)

    def compose(self, g, f):
        return compose_maps(g, f)

    def homs(self, a, b):
        return enumerate_monotone(a, b)

    def leq(self, m, n):
        return map_leq(m, n)

    def is_object(self, obj):
        return isinstance(obj, Poset)

    def _wrap(self, elements, leq):
        return Poset.from_relation(elements, leq)

    def limit(self, objects, arrows):
        order, fams = _compatible_families(objects, arrows, lambda P: P.elements,
                                           lambda m, s: m(s))
        elems = [tuple(f[i] for i in order) for f in fams]
        L = self._wrap(elems, lambda a, b: all(objects[i].leq(x, y)
                                                for i, x, y in zip(order, a, b)))
        projections = {i: MonotoneMap(L, objects[i], [e[k] for e in L.elements], check=False)
                       for k, i in enumerate(order)}
        return Limit(L, projections, [dict(zip(order, e)) for e in L.elements])

    def pushout(self, f, g):
        if f.source != g.source:
            raise ShapeMismatch("pushout legs have different sources")
        shape = Poset.from_covers([0, 1, 2], [(0, 2), (1, 2)])
        colim = poset_colimit(shape, {0: f.target, 1: g.target, 2: f.source},
                              {(0, 2): f, (1, 2): g})
        obj = colim.poset
        if not self.is_discrete_ok(obj):
            raise ValidationError("pushout of sets is not discrete")
        return Pushout(obj, colim.cocone[0], colim.cocone[1], colim)

    def is_discrete_ok(self, obj):
        return True

    def copair(self, po, u, v):
        C = u.target
        if v.target != C:
            raise ShapeMismatch("copair legs have different targets")
        values = []
        for e in po.obj.elements:
            imgs = set()
            for p, x in po.data.classes[e]:
                if p == 0:
                    imgs.add(u(x))
                elif p == 1:
                    imgs.add(v(x))
            if len(imgs) != 1:
                raise ValidationError("copair legs disagree on the apex", witness=e)
            values.append(imgs.pop())
        return MonotoneMap(po.obj, C, values)


class SetKernel(PosetKernel):
    """FinSet: discrete posets; the order on maps is equality."""

    name = "set"
    has_order = False

    def leq(self, m, n):
        return m == n

    def is_object(self, obj):
        return isinstance(obj, Poset) and not obj.related_pairs()

    def _wrap(self, elements, leq):
        return Poset.antichain(elements)

    def is_discrete_ok(self, obj):
        return not obj.related_pairs()


def finite_set(elements) -> Poset:
    return Poset.antichain(elements)


class RingKernel(Kernel):
    """FinCRing: finite commutative rings and ring maps (no order)."""

    name = "ring"
    has_limits = True
    has_colimits = True

    def identity(self, obj):
        return RingHom.identity(obj)

    def compose(self, g, f):
        return compose_homs(g, f)

    def homs(self, a, b):
        return ring_homs(a, b)

    def is_object(self, obj):
        return isinstance(obj, FinRing)

    def limit(self, objects, arrows):
        order, fams = _compatible_families(objects, arrows, lambda R: range(R.order),
                                           lambda m, s: m.values[s])
        elems = [tuple(f[i] for i in order) for f in fams]
        rings = [objects[i] for i in order]
        zero = tuple(0 for _ in rings)
        one = tuple(R.one for R in rings)
        L = FinRing.from_operations(
            elems,
            lambda a, b: tuple(R.add[x][y] for R, x, y in zip(rings, a, b)),
            lambda a, b: tuple(R.mul[x][y] for R, x, y in zip(rings, a, b)),
            zero, one, check=False)
        projections = {i: RingHom(L, objects[i], [L.labels[e][k] for e in range(L.order)], check=False)
                       for k, i in enumerate(order)}
        return Limit(L, projections, [dict(zip(order, L.labels[e])) for e in range(L.order)])

    def pushout(self, f, g):
        t = TensorRing(f, g)
        return Pushout(t.ring, t.left_map, t.right_map, t)

    def copair(self, po, u, v):
        return po.data.copair(u, v)


FINSET = SetKernel()
FINPOS = PosetKernel()
FINCRING = RingKernel()
KERNELS = {k.name: k for k in (FINSET, FINPOS, FINCRING)}


def set_colimit(objects: dict, arrows: dict):
    """Colimit of a FinSet diagram: disjoint union modulo s ~ m(s).

    Returns ``(classes, cocone)`` where classes is a sorted list of
    representatives ``(i, s)`` and cocone[i][s] is the class of (i, s).
    """
    parent = {}
    for i, S in objects.items():
        for s in S.elements:
            parent[(i, s)] = (i, s)

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for (i, j), m in arrows.items():
        for s in objects[i].elements:
            a, b = find((i, s)), find((j, m(s)))
            if a != b:
                if id_key(a) < id_key(b):
                    parent[b] = a
                else:
                    parent[a] = b
    reps = sort_ids({find(v) for v in parent})
    cocone = {i: {s: find((i, s)) for s in S.elements} for i, S in objects.items()}
    return reps, cocone


def product_objects(kernel, objs):
    """Helper for tests: the kernel limit of a discrete diagram."""
    return kernel.limit(dict(enumerate(objs)), {})
