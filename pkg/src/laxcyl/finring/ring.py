"""Finite commutative unital rings as explicit tables.

Elements are the integers ``0..order-1`` with ``0`` the zero and ``1`` the
unit (except in the zero ring, where both are ``0``).  Remaining elements
follow construction order.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Sequence

from ..config import CAPS
from ..errors import NotAHomomorphism, RingAxiomError, ShapeMismatch, SizeCapExceeded, UnknownPreset


class FinRing:
    __slots__ = ("order", "add", "mul", "zero", "one", "name", "labels",
                 "_neg", "_hash", "_cache", "_lookup")

    def __init__(self, add, mul, name=None, labels=None, check=True):
        self.add = tuple(tuple(r) for r in add)
        self.mul = tuple(tuple(r) for r in mul)
        self.order = len(self.add)
        self.zero = 0
        self.one = 0 if self.order == 1 else 1
        self.name = name
        self.labels = tuple(labels) if labels is not None else None
        self._hash = None
        self._cache = {}
        self._lookup = None
        if self.order == 0:
            raise RingAxiomError("a ring has at least one element")
        if check:
            verify_ring_axioms(self)
        neg = [None] * self.order
        for a in range(self.order):
            for b in range(self.order):
                if self.add[a][b] == 0:
                    neg[a] = b
                    break
        self._neg = tuple(neg)

    @classmethod
    def from_tables(cls, add, mul, zero, one, name=None, labels=None, check=True) -> "FinRing":
        """Relabel arbitrary tables into canonical order (zero, one, rest)."""
        n = len(add)
        if not (0 <= zero < n and 0 <= one < n):
            raise RingAxiomError("zero/one out of range")
        if any(len(r) != n for r in add) or len(mul) != n or any(len(r) != n for r in mul):
            raise RingAxiomError("tables must be square of size order")
        order = [zero] + ([one] if one != zero else []) + [x for x in range(n) if x not in (zero, one)]
        if one == zero and n > 1:
            raise RingAxiomError("one equals zero in a ring with more than one element")
        pos = {old: new for new, old in enumerate(order)}
        try:
            A = [[pos[add[order[i]][order[j]]] for j in range(n)] for i in range(n)]
            M = [[pos[mul[order[i]][order[j]]] for j in range(n)] for i in range(n)]
        except KeyError as e:
            raise RingAxiomError(f"table entry {e.args[0]} out of range") from None
        lab = [labels[o] for o in order] if labels is not None else None
        return cls(A, M, name=name, labels=lab, check=check)

    @classmethod
    def from_operations(cls, elements, add, mul, zero, one, name=None, check=False) -> "FinRing":
        """Tables from Python values and operations; values become labels."""
        elements = list(elements)
        first = [zero] + ([one] if one != zero else [])
        rest = [e for e in elements if e not in first]
        elems = first + rest
        idx = {e: i for i, e in enumerate(elems)}
        A = [[idx[add(a, b)] for b in elems] for a in elems]
        M = [[idx[mul(a, b)] for b in elems] for a in elems]
        return cls(A, M, name=name, labels=elems, check=check)

    # protocol ---------------------------------------------------------------
    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(range(self.order))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinRing):
            return NotImplemented
        return self.add == other.add and self.mul == other.mul

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.add, self.mul))
        return self._hash

    def __repr__(self):
        return f"FinRing({self.name or '?'}, order={self.order})"

    @property
    def is_zero(self) -> bool:
        return self.order == 1

    # arithmetic -------------------------------------------------------------
    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add[a][self._neg[b]]

    def times(self, k: int, a: int) -> int:
        """Integer multiple k * a."""
        if k < 0:
            k, a = -k, self._neg[a]
        acc, base = 0, a
        while k:
            if k & 1:
                acc = self.add[acc][base]
            base = self.add[base][base]
            k >>= 1
        return acc

    def power(self, a: int, k: int) -> int:
        acc = self.one
        for _ in range(k):
            acc = self.mul[acc][a]
        return acc

    def additive_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.add[x][a]
            k += 1
        return k

    def characteristic(self) -> int:
        return self.additive_order(self.one) if self.order > 1 else 1

    def is_unit(self, a: int) -> bool:
        return any(self.mul[a][b] == self.one for b in range(self.order))

    def units(self) -> list:
        return [a for a in range(self.order) if self.is_unit(a)]

    def is_nilpotent(self, a: int) -> bool:
        x = a
        for _ in range(self.order + 1):
            if x == 0:
                return True
            x = self.mul[x][a]
        return False

    def nilpotents(self) -> list:
        return [a for a in range(self.order) if self.is_nilpotent(a)]

    def idempotents(self) -> list:
        return [a for a in range(self.order) if self.mul[a][a] == a]

    def label_of(self, a: int):
        return self.labels[a] if self.labels is not None else a

    def element_of(self, lab) -> int:
        if self._lookup is None:
            self._lookup = {l: i for i, l in enumerate(self.labels or range(self.order))}
        return self._lookup[lab]

    def cached(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    def invariants(self) -> tuple:
        """Isomorphism invariants used to prefilter iso searches."""
        from .abelian import additive_basis

        def compute():
            basis = additive_basis(self.order, self.add)
            return (self.order, tuple(sorted(basis.orders)), len(self.units()),
                    len(self.nilpotents()), len(self.idempotents()))
        return self.cached("invariants", compute)


def verify_ring_axioms(R: FinRing) -> None:
    n = R.order
    A, M = R.add, R.mul
    for a in range(n):
        if A[0][a] != a:
            raise RingAxiomError("0 is not an additive identity", witness=(a,))
        if M[R.one][a] != a:
            raise RingAxiomError("1 is not a multiplicative identity", witness=(a,))
        if 0 not in A[a]:
            raise RingAxiomError("element without additive inverse", witness=(a,))
        for b in range(n):
            if A[a][b] != A[b][a] or M[a][b] != M[b][a]:
                raise RingAxiomError("operation not commutative", witness=(a, b))
            if not (0 <= A[a][b] < n and 0 <= M[a][b] < n):
                raise RingAxiomError("table entry out of range", witness=(a, b))
    for a in range(n):
        Aa, Ma = A[a], M[a]
        for b in range(n):
            Aab, Mab, Mb = Aa[b], Ma[b], M[b]
            for c in range(n):
                if A[Aab][c] != Aa[A[b][c]]:
                    raise RingAxiomError("addition not associative", witness=(a, b, c))
                if M[Mab][c] != Ma[Mb[c]]:
                    raise RingAxiomError("multiplication not associative", witness=(a, b, c))
                if Ma[A[b][c]] != A[Mab][Ma[c]]:
                    raise RingAxiomError("not distributive", witness=(a, b, c))


class RingHom:
    __slots__ = ("source", "target", "values", "_hash")

    def __init__(self, source: FinRing, target: FinRing, values: Sequence[int], check=True):
        self.source = source
        self.target = target
        self.values = tuple(values)
        self._hash = None
        if check:
            self.verify()

    def verify(self):
        S, T, f = self.source, self.target, self.values
        if len(f) != S.order or any(not 0 <= v < T.order for v in f):
            raise NotAHomomorphism("assignment has wrong shape")
        if f[S.zero] != T.zero or f[S.one] != T.one:
            raise NotAHomomorphism("does not preserve 0 and 1", witness=())
        for a in range(S.order):
            for b in range(S.order):
                if f[S.add[a][b]] != T.add[f[a]][f[b]]:
                    raise NotAHomomorphism("does not preserve +", witness=(a, b))
                if f[S.mul[a][b]] != T.mul[f[a]][f[b]]:
                    raise NotAHomomorphism("does not preserve *", witness=(a, b))

    @classmethod
    def identity(cls, R: FinRing) -> "RingHom":
        return cls(R, R, range(R.order), check=False)

    def __call__(self, a: int) -> int:
        return self.values[a]

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, RingHom):
            return NotImplemented
        return self.values == other.values and self.source == other.source and self.target == other.target

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.values, self.source.order, self.target.order))
        return self._hash

    def __repr__(self):
        return f"RingHom({self.source.name or '?'} -> {self.target.name or '?'}, {list(self.values)})"

    def is_injective(self) -> bool:
        return len(set(self.values)) == self.source.order

    def is_surjective(self) -> bool:
        return len(set(self.values)) == self.target.order

    def kernel(self) -> "Ideal":
        return Ideal(self.source, frozenset(a for a, v in enumerate(self.values) if v == 0))


def compose_homs(g: RingHom, f: RingHom) -> RingHom:
    """``g ∘ f``."""
    if f.target != g.source:
        raise ShapeMismatch("ring maps are not composable")
    return RingHom(f.source, g.target, [g.values[v] for v in f.values], check=False)


@dataclass(frozen=True)
class Ideal:
    ring: FinRing
    members: frozenset

    def __contains__(self, a):
        return a in self.members

    def __len__(self):
        return len(self.members)

    def sorted_members(self) -> tuple:
        return tuple(sorted(self.members))

    @property
    def is_proper(self) -> bool:
        return len(self.members) < self.ring.order

    def is_ideal(self) -> bool:
        R = self.ring
        if 0 not in self.members:
            return False
        return all(R.add[a][b] in self.members for a in self.members for b in self.members) and \
            all(R.neg(a) in self.members for a in self.members) and \
            all(R.mul[r][a] in self.members for r in range(R.order) for a in self.members)

    def is_prime(self) -> bool:
        R = self.ring
        if len(self.members) == R.order:
            return False
        return all(a in self.members or b in self.members
                   for a in range(R.order) for b in range(R.order)
                   if R.mul[a][b] in self.members)

    def key(self) -> tuple:
        return (len(self.members), self.sorted_members())

    def __repr__(self):
        return f"Ideal({list(self.sorted_members())})"


def principal_ideal(R: FinRing, a: int) -> Ideal:
    return Ideal(R, frozenset(R.mul[r][a] for r in range(R.order)))


def ideal_sum(I: Ideal, J: Ideal) -> Ideal:
    R = I.ring
    return Ideal(R, frozenset(R.add[a][b] for a in I.members for b in J.members))


def generated_ideal(R: FinRing, gens) -> Ideal:
    out = Ideal(R, frozenset([0]))
    for g in gens:
        out = ideal_sum(out, principal_ideal(R, g))
    return out


def ideals_of(R: FinRing) -> list:
    """Every ideal of R in canonical order (size, then members)."""
    if R.order > CAPS.max_tensor_order:
        raise SizeCapExceeded(f"ring of order {R.order} exceeds ideal enumeration cap")

    def compute():
        principal = {principal_ideal(R, a) for a in range(R.order)}
        found = set(principal)
        frontier = list(principal)
        while frontier:
            new = []
            for I in frontier:
                for P in principal:
                    if P.members <= I.members:
                        continue
                    S = ideal_sum(I, P)
                    if S not in found:
                        found.add(S)
                        new.append(S)
            frontier = new
        return sorted(found, key=Ideal.key)
    return list(R.cached("ideals", compute))


@dataclass(frozen=True)
class SpecSet:
    primes: tuple

    def __len__(self):
        return len(self.primes)

    def __iter__(self):
        return iter(self.primes)

    def __contains__(self, P):
        return P in self.primes


def primitive_idempotents(R: FinRing) -> list:
    idem = [e for e in R.idempotents() if e != 0]
    return [e for e in idem
            if not any(f != e and R.mul[e][f] == f for f in idem)]


def prime_ideals(R: FinRing) -> SpecSet:
    """All primes.  R is Artinian, so P_e = {x : x e nilpotent} per primitive idempotent e."""
    def compute():
        primes = []
        for e in primitive_idempotents(R):
            primes.append(Ideal(R, frozenset(x for x in range(R.order)
                                             if R.is_nilpotent(R.mul[x][e]))))
        return SpecSet(tuple(sorted(primes, key=Ideal.sorted_members)))
    return R.cached("primes", compute)


def quotient_ring(R: FinRing, I: Ideal):
    """R/I with classes ordered by least representative, plus the projection."""
    if I.ring != R:
        raise ShapeMismatch("ideal belongs to another ring")
    members = sorted(I.members)
    cls_of = [None] * R.order
    reps = []
    for a in range(R.order):
        if cls_of[a] is None:
            k = len(reps)
            reps.append(a)
            for i in members:
                cls_of[R.add[a][i]] = k
    add = [[cls_of[R.add[a][b]] for b in reps] for a in reps]
    mul = [[cls_of[R.mul[a][b]] for b in reps] for a in reps]
    Q = FinRing(add, mul, labels=[R.label_of(a) for a in reps], check=False)
    return Q, RingHom(R, Q, cls_of, check=False)


def product_ring(rings: Sequence[FinRing]):
    """Product ring with projections; the empty product is the zero ring."""
    rings = list(rings)
    size = 1
    for S in rings:
        size *= S.order
    if size > CAPS.max_product_order:
        raise SizeCapExceeded(f"product ring of order {size} exceeds cap")
    if not rings:
        return zero_ring(), []
    tuples = list(itertools.product(*[range(S.order) for S in rings]))
    zero = tuple(S.zero for S in rings)
    one = tuple(S.one for S in rings)
    first = [zero] + ([one] if one != zero else [])
    elems = first + [t for t in tuples if t not in first]
    idx = {t: i for i, t in enumerate(elems)}
    add = [[idx[tuple(S.add[x][y] for S, x, y in zip(rings, a, b))] for b in elems] for a in elems]
    mul = [[idx[tuple(S.mul[x][y] for S, x, y in zip(rings, a, b))] for b in elems] for a in elems]
    names = [S.name for S in rings]
    name = " x ".join(f"({n})" if n and " x " in n else n for n in names) if all(names) else None
    P = FinRing(add, mul, name=name, labels=elems, check=False)
    projections = [RingHom(P, S, [t[i] for t in elems], check=False) for i, S in enumerate(rings)]
    return P, projections


def pair_into_product(P: FinRing, projections, homs) -> RingHom:
    """The map A -> P whose composites with the projections are ``homs``."""
    if not homs:
        raise ShapeMismatch("need at least one map to pair (use zero ring target)")
    A = homs[0].source
    values = [P.element_of(tuple(h.values[a] for h in homs)) for a in range(A.order)]
    return RingHom(A, P, values, check=False)


def to_zero_ring(A: FinRing) -> RingHom:
    return RingHom(A, zero_ring(), [0] * A.order, check=False)


# presets ------------------------------------------------------------------

def zero_ring() -> FinRing:
    return FinRing([[0]], [[0]], name="zero", labels=[0], check=False)


def integers_mod(n: int) -> FinRing:
    if n < 1:
        raise UnknownPreset(f"Z/{n}")
    if n == 1:
        return zero_ring()
    add = [[(a + b) % n for b in range(n)] for a in range(n)]
    mul = [[(a * b) % n for b in range(n)] for a in range(n)]
    return FinRing(add, mul, name=f"Z/{n}", labels=list(range(n)))


def dual_numbers(n: int) -> FinRing:
    """Z/n[x]/(x^2): pairs a + b x."""
    elems = [(a, b) for a in range(n) for b in range(n)]
    return FinRing.from_operations(
        elems,
        lambda u, v: ((u[0] + v[0]) % n, (u[1] + v[1]) % n),
        lambda u, v: ((u[0] * v[0]) % n, (u[0] * v[1] + u[1] * v[0]) % n),
        (0, 0), (1 % n, 0), name=f"Z/{n}[x]/(x^2)", check=True)


def field_f4() -> FinRing:
    # pairs (a, b) = a + b w over F2 with w^2 = w + 1
    elems = [(0, 0), (1, 0), (0, 1), (1, 1)]

    def mul(u, v):
        a, b = u
        c, d = v
        # (a + b w)(c + d w) = ac + (ad + bc) w + bd (w + 1)
        return ((a * c + b * d) % 2, (a * d + b * c + b * d) % 2)
    return FinRing.from_operations(elems, lambda u, v: ((u[0] + v[0]) % 2, (u[1] + v[1]) % 2),
                                   mul, (0, 0), (1, 0), name="F4", check=True)


_PRESET_RE = [
    (re.compile(r"^Z/(\d+)$"), lambda m: integers_mod(int(m.group(1)))),
    (re.compile(r"^Z/(\d+)\[x\]/\(x\^2\)$"), lambda m: dual_numbers(int(m.group(1)))),
]


def ring_preset(name: str) -> FinRing:
    """Named rings: ``zero``, ``Z/n``, ``F2``/``F3``/``F5``/``F7``, ``F4``,
    ``Z/n[x]/(x^2)`` and products written ``A x B``."""
    name = name.strip()
    if " x " in name:
        parts = [p.strip() for p in name.split(" x ")]
        P, _ = product_ring([ring_preset(p.strip("()")) for p in parts])
        P.name = name
        return P
    if name == "zero":
        return zero_ring()
    if name == "F4":
        return field_f4()
    m = re.match(r"^F(\d+)$", name)
    if m and int(m.group(1)) in (2, 3, 5, 7, 11, 13):
        return integers_mod(int(m.group(1)))
    for pattern, build in _PRESET_RE:
        m = pattern.match(name)
        if m:
            R = build(m)
            if R.order > CAPS.max_ring_order:
                raise SizeCapExceeded(f"preset {name} has order {R.order}")
            return R
    raise UnknownPreset(f"unknown ring preset {name!r}")
