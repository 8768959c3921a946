"""Finite posets, monotone maps and the poset colimit oracle.

Posets are immutable.  The order is stored as its full reflexive-transitive
closure in a bitset matrix: ``_up[i]`` has bit ``j`` set iff
``elements[i] <= elements[j]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Mapping

from .config import CAPS
from .errors import (CycleError, DuplicateId, EmptyIndex, NonFunctorialTransitions,
                     ShapeMismatch, SizeCapExceeded, UnknownElement, ValidationError)
from .ids import id_key, label, sort_ids

STAR = "*"


class Poset:
    __slots__ = ("elements", "_index", "_up", "_hash")

    def __init__(self, elements: Iterable[Hashable], up: Iterable[int]):
        # Internal constructor: ``elements`` canonically sorted, ``up`` closed.
        self.elements = tuple(elements)
        self._index = {x: i for i, x in enumerate(self.elements)}
        self._up = tuple(up)
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def from_covers(cls, elements, covers=()) -> "Poset":
        elements = list(elements)
        seen = set()
        for x in elements:
            if x in seen:
                raise DuplicateId(f"duplicate element {label(x)}", witness=x)
            seen.add(x)
        elems = sort_ids(elements)
        index = {x: i for i, x in enumerate(elems)}
        up = [1 << i for i in range(len(elems))]
        for a, b in covers:
            if a not in index or b not in index:
                missing = a if a not in index else b
                raise UnknownElement(f"cover mentions unknown element {label(missing)}")
            up[index[a]] |= 1 << index[b]
        n = len(elems)
        for k in range(n):
            bit = 1 << k
            uk = up[k]
            for i in range(n):
                if up[i] & bit:
                    up[i] |= uk
        for i in range(n):
            for j in range(i + 1, n):
                if (up[i] >> j) & 1 and (up[j] >> i) & 1:
                    raise CycleError(
                        f"{label(elems[i])} <= {label(elems[j])} <= {label(elems[i])}",
                        witness=(elems[i], elems[j]))
        return cls(elems, up)

    @classmethod
    def from_relation(cls, elements, leq: Callable[[Hashable, Hashable], bool]) -> "Poset":
        """Build from an arbitrary relation, checking it is a partial order."""
        elems = sort_ids(elements)
        if len(set(elems)) != len(elems):
            raise DuplicateId("duplicate element")
        n = len(elems)
        up = [0] * n
        for i, x in enumerate(elems):
            m = 0
            for j, y in enumerate(elems):
                if i == j or leq(x, y):
                    m |= 1 << j
            up[i] = m
        for i in range(n):
            if not leq(elems[i], elems[i]):
                raise ValidationError(f"relation not reflexive at {label(elems[i])}")
            for j in range(n):
                if i != j and (up[i] >> j) & 1:
                    if (up[j] >> i) & 1:
                        raise CycleError("relation not antisymmetric", witness=(elems[i], elems[j]))
                    if up[j] & ~up[i]:
                        raise ValidationError("relation not transitive", witness=(elems[i], elems[j]))
        return cls(elems, up)

    @classmethod
    def point(cls, name: Hashable = STAR) -> "Poset":
        return cls((name,), (1,))

    @classmethod
    def chain(cls, elements) -> "Poset":
        elements = list(elements)
        return cls.from_covers(elements, list(zip(elements, elements[1:])))

    @classmethod
    def antichain(cls, elements) -> "Poset":
        return cls.from_covers(list(elements))

    # queries --------------------------------------------------------------
    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self._index

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and self._up == other._up

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.elements, self._up))
        return self._hash

    def __repr__(self):
        return f"Poset({[label(x) for x in self.elements]}, covers={[(label(a), label(b)) for a, b in self.covers()]})"

    def index(self, x) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise UnknownElement(f"{label(x)} is not an element") from None

    def leq(self, x, y) -> bool:
        return bool((self._up[self.index(x)] >> self.index(y)) & 1)

    def lt(self, x, y) -> bool:
        return x != y and self.leq(x, y)

    def up_mask(self, x) -> int:
        return self._up[self.index(x)]

    def above(self, x) -> list:
        m = self._up[self.index(x)]
        return [y for j, y in enumerate(self.elements) if (m >> j) & 1]

    def below(self, x) -> list:
        j = self.index(x)
        return [y for i, y in enumerate(self.elements) if (self._up[i] >> j) & 1]

    def related_pairs(self, strict: bool = True) -> list:
        out = []
        for i, x in enumerate(self.elements):
            m = self._up[i]
            for j, y in enumerate(self.elements):
                if (m >> j) & 1 and (not strict or i != j):
                    out.append((x, y))
        return out

    def covers(self) -> list:
        """Hasse diagram edges x < y with nothing strictly between."""
        out = []
        n = len(self.elements)
        for i in range(n):
            strict = self._up[i] & ~(1 << i)
            for j in range(n):
                if (strict >> j) & 1 and not any(
                        k != j and (strict >> k) & 1 and (self._up[k] >> j) & 1
                        for k in range(n)):
                    out.append((self.elements[i], self.elements[j]))
        return out

    def minimal(self) -> list:
        return [x for x in self.elements if len(self.below(x)) == 1]

    def maximal(self) -> list:
        return [x for x in self.elements if len(self.above(x)) == 1]

    def minimum(self):
        mins = self.minimal()
        return mins[0] if len(mins) == 1 and len(self.above(mins[0])) == len(self) else None

    def maximum(self):
        maxs = self.maximal()
        return maxs[0] if len(maxs) == 1 and len(self.below(maxs[0])) == len(self) else None

    def linear_extension(self) -> list:
        return sorted(self.elements, key=lambda x: (len(self.below(x)), id_key(x)))

    def is_up_closed(self, subset) -> bool:
        subset = set(subset)
        return all(y in subset for x in subset for y in self.above(x))

    def induced(self, subset) -> "Poset":
        subset = set(subset)
        for x in subset:
            self.index(x)
        elems = sort_ids(subset)
        idx = [self._index[x] for x in elems]
        up = []
        for i in idx:
            m = 0
            for k, j in enumerate(idx):
                if (self._up[i] >> j) & 1:
                    m |= 1 << k
            up.append(m)
        return Poset(elems, up)

    def is_connected(self) -> bool:
        if not self.elements:
            return True
        seen = {self.elements[0]}
        stack = [self.elements[0]]
        while stack:
            x = stack.pop()
            for y in self.above(x) + self.below(x):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(self.elements)


def make_poset(elements, cover_pairs=()) -> Poset:
    return Poset.from_covers(elements, cover_pairs)


def up_set(P: Poset, x) -> Poset:
    """Minimal open neighbourhood of ``x``: the induced poset on {x' >= x}."""
    return P.induced(P.above(x))


class MonotoneMap:
    __slots__ = ("source", "target", "values", "_hash")

    def __init__(self, source: Poset, target: Poset, values, check: bool = True):
        self.source = source
        self.target = target
        self.values = tuple(values)
        self._hash = None
        if check:
            if len(self.values) != len(source):
                raise ShapeMismatch("assignment length differs from source size")
            for v in self.values:
                target.index(v)
            for x, y in source.related_pairs():
                if not target.leq(self(x), self(y)):
                    raise ValidationError(
                        f"not monotone: {label(x)} <= {label(y)} but images are not",
                        witness=(x, y))

    @classmethod
    def from_dict(cls, source: Poset, target: Poset, mapping: Mapping) -> "MonotoneMap":
        try:
            return cls(source, target, [mapping[x] for x in source.elements])
        except KeyError as e:
            raise UnknownElement(f"no image given for {label(e.args[0])}") from None

    @classmethod
    def identity(cls, P: Poset) -> "MonotoneMap":
        return cls(P, P, P.elements, check=False)

    @classmethod
    def constant(cls, P: Poset, Q: Poset, y) -> "MonotoneMap":
        return cls(P, Q, [y] * len(P))

    def __call__(self, x):
        return self.values[self.source.index(x)]

    def as_dict(self) -> dict:
        return dict(zip(self.source.elements, self.values))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, MonotoneMap):
            return NotImplemented
        return (self.values == other.values and self.source == other.source
                and self.target == other.target)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.values, len(self.source), len(self.target)))
        return self._hash

    def __repr__(self):
        return "MonotoneMap(" + ", ".join(f"{label(x)}->{label(y)}" for x, y in
                                         zip(self.source.elements, self.values)) + ")"


def compose_maps(g: MonotoneMap, f: MonotoneMap) -> MonotoneMap:
    """``g ∘ f``."""
    if f.target != g.source:
        raise ShapeMismatch("maps are not composable")
    return MonotoneMap(f.source, g.target, [g(v) for v in f.values], check=False)


def enumerate_monotone(P: Poset, Q: Poset) -> list:
    """All monotone maps P -> Q in lexicographic order of their assignments."""
    if len(Q) ** len(P) > CAPS.max_map_bound:
        raise SizeCapExceeded(f"|Q|^|P| = {len(Q)}^{len(P)} exceeds {CAPS.max_map_bound}")
    n, m = len(P), len(Q)
    below = [[j for j in range(i) if P.leq(P.elements[j], P.elements[i])] for i in range(n)]
    above = [[j for j in range(i) if P.leq(P.elements[i], P.elements[j])] for i in range(n)]
    qup = [Q.up_mask(y) for y in Q.elements]
    out = []
    assign = [0] * n

    def rec(i):
        if i == n:
            out.append(MonotoneMap(P, Q, [Q.elements[k] for k in assign], check=False))
            return
        for k in range(m):
            if all((qup[assign[j]] >> k) & 1 for j in below[i]) and \
               all((qup[k] >> assign[j]) & 1 for j in above[i]):
                assign[i] = k
                rec(i + 1)

    rec(0)
    return out


def map_leq(f: MonotoneMap, g: MonotoneMap) -> bool:
    """Pointwise order f <= g."""
    if f.source != g.source or f.target != g.target:
        raise ShapeMismatch("maps are not parallel")
    return all(f.target.leq(a, b) for a, b in zip(f.values, g.values))


def non_empty_subsets_poset(index_set) -> Poset:
    items = sort_ids(set(index_set))
    if not items:
        raise EmptyIndex("index set must be non-empty")
    subsets = []
    n = len(items)
    for mask in range(1, 1 << n):
        subsets.append(frozenset(items[i] for i in range(n) if (mask >> i) & 1))
    return Poset.from_relation(subsets, lambda a, b: a <= b)


@dataclass
class PosetColimit:
    poset: Poset
    cocone: dict  # shape point -> MonotoneMap fiber -> colimit
    classes: dict  # colimit element -> list of (p, x) members


def complete_contravariant(shape: Poset, fibers: Mapping, arrows: Mapping, compose, identity):
    """Fill in arrows X_pq: X(q) -> X(p) for every p <= q from the given ones.

    Missing arrows are composed along Hasse covers.  Returns the full dict;
    functoriality is not checked here.
    """
    full = dict(arrows)
    for p in shape.elements:
        full.setdefault((p, p), identity(fibers[p]))
    def interval(pq):
        p, q = pq
        return sum(1 for m in shape.above(p) if shape.leq(m, q))

    pairs = sorted(shape.related_pairs(), key=interval)
    for p, q in pairs:
        if (p, q) in full:
            continue
        mids = [m for m in shape.above(p) if m not in (p, q) and shape.leq(m, q)]
        done = False
        for m in sorted(mids, key=id_key):
            if (p, m) in full and (m, q) in full:
                full[(p, q)] = compose(full[(p, m)], full[(m, q)])
                done = True
                break
        if not done:
            raise NonFunctorialTransitions(
                f"no arrow given for {label(p)} <= {label(q)} and it cannot be composed",
                witness=(p, q))
    return full


def poset_colimit(shape: Poset, fibers: Mapping, transitions: Mapping) -> PosetColimit:
    """Colimit of a diagram of posets indexed by ``shape`` with arrows pointing down.

    ``transitions[(p, q)]`` for p <= q is a monotone map fibers[q] -> fibers[p]
    (the cylinder convention).  Computed as the disjoint union, the preorder
    generated by fiber orders and identifications y ~ X_pq(y), then the
    poset reflection.
    """
    full = complete_contravariant(shape, fibers, transitions, compose_maps, MonotoneMap.identity)
    for p in shape.elements:
        if full[(p, p)] != MonotoneMap.identity(fibers[p]):
            raise NonFunctorialTransitions(f"X_pp is not the identity at {label(p)}", witness=(p, p))
    for p, q in shape.related_pairs():
        f = full[(p, q)]
        if f.source != fibers[q] or f.target != fibers[p]:
            raise NonFunctorialTransitions(f"transition {label(p)}<{label(q)} has wrong type", witness=(p, q))
        for r in shape.above(q):
            if r != q and compose_maps(f, full[(q, r)]) != full[(p, r)]:
                raise NonFunctorialTransitions("X_pr != X_pq . X_qr", witness=(p, q, r))
    nodes = [(p, x) for p in shape.elements for x in fibers[p].elements]
    idx = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    reach = [1 << i for i in range(n)]
    for p in shape.elements:
        F = fibers[p]
        for x, y in F.related_pairs():
            reach[idx[(p, x)]] |= 1 << idx[(p, y)]
    for (p, q), f in full.items():
        if p == q:
            continue
        for y in fibers[q].elements:
            a, b = idx[(q, y)], idx[(p, f(y))]
            reach[a] |= 1 << b
            reach[b] |= 1 << a
    for k in range(n):
        bit = 1 << k
        rk = reach[k]
        for i in range(n):
            if reach[i] & bit:
                reach[i] |= rk
    rep = {}
    classes = {}
    for i, v in enumerate(nodes):
        members = [nodes[j] for j in range(n) if (reach[i] >> j) & 1 and (reach[j] >> i) & 1]
        r = min(members, key=id_key)
        rep[v] = r
        classes.setdefault(r, members)
    reps = list(classes)
    colim = Poset.from_relation(reps, lambda a, b: bool((reach[idx[a]] >> idx[b]) & 1))
    cocone = {p: MonotoneMap(fibers[p], colim, [rep[(p, x)] for x in fibers[p].elements])
              for p in shape.elements}
    return PosetColimit(colim, cocone, classes)
