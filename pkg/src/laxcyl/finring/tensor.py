"""Finite modules and tensor products computed from integer presentations.

``M ⊗_R N`` is presented on generators ``e_i ⊗ f_j`` over additive bases of
M and N, with torsion rows and balancing rows ``r e_i ⊗ f_j - e_i ⊗ r f_j``
for r running over an additive basis of R.  Smith normal form turns the
presentation into invariant factors; elements are coordinate tuples.
"""
from __future__ import annotations

import itertools
from math import gcd

from ..config import CAPS
from ..errors import NotAHomomorphism, ShapeMismatch, SizeCapExceeded
from .abelian import additive_basis, smith_normal_form, unimodular_inverse
from .ring import FinRing, Ideal, RingHom


class FinModule:
    """Finite R-module: additive table plus action table ``act[r][m]``."""

    __slots__ = ("ring", "order", "add", "act", "labels", "_basis")

    def __init__(self, ring: FinRing, add, act, labels=None, check=False):
        self.ring = ring
        self.add = tuple(tuple(r) for r in add)
        self.act = tuple(tuple(r) for r in act)
        self.order = len(self.add)
        self.labels = labels
        self._basis = None
        if check:
            self.verify()

    def verify(self):
        R, n = self.ring, self.order
        for r in range(R.order):
            for s in range(R.order):
                for m in range(n):
                    if self.act[R.mul[r][s]][m] != self.act[r][self.act[s][m]]:
                        raise NotAHomomorphism("(rs)m != r(sm)", witness=(r, s, m))
                    if self.act[R.add[r][s]][m] != self.add[self.act[r][m]][self.act[s][m]]:
                        raise NotAHomomorphism("(r+s)m != rm+sm", witness=(r, s, m))
            for m in range(n):
                for k in range(n):
                    if self.act[r][self.add[m][k]] != self.add[self.act[r][m]][self.act[r][k]]:
                        raise NotAHomomorphism("r(m+k) != rm+rk", witness=(r, m, k))
        if any(self.act[R.one][m] != m for m in range(n)):
            raise NotAHomomorphism("1 does not act trivially")

    @property
    def basis(self):
        if self._basis is None:
            self._basis = additive_basis(self.order, self.add)
        return self._basis

    def is_zero(self) -> bool:
        return self.order == 1

    @classmethod
    def of_ring(cls, R: FinRing) -> "FinModule":
        return cls(R, R.add, R.mul)

    @classmethod
    def along(cls, f: RingHom) -> "FinModule":
        """The target of f as a module over the source."""
        S = f.target
        return cls(f.source, S.add, [S.mul[f.values[r]] for r in range(f.source.order)])

    @classmethod
    def of_ideal(cls, I: Ideal) -> "FinModule":
        R = I.ring
        members = I.sorted_members()
        pos = {a: k for k, a in enumerate(members)}
        add = [[pos[R.add[a][b]] for b in members] for a in members]
        act = [[pos[R.mul[r][a]] for a in members] for r in range(R.order)]
        return cls(R, add, act, labels=members)

    @classmethod
    def cyclic(cls, I: Ideal) -> "FinModule":
        """R/I as an R-module."""
        from .ring import quotient_ring
        Q, proj = quotient_ring(I.ring, I)
        return cls(I.ring, Q.add, [Q.mul[proj.values[r]] for r in range(I.ring.order)])

    def direct_sum(self, other: "FinModule") -> "FinModule":
        if other.ring != self.ring:
            raise ShapeMismatch("modules over different rings")
        pairs = list(itertools.product(range(self.order), range(other.order)))
        pos = {p: k for k, p in enumerate(pairs)}
        add = [[pos[(self.add[a][c], other.add[b][d])] for c, d in pairs] for a, b in pairs]
        act = [[pos[(self.act[r][a], other.act[r][b])] for a, b in pairs]
               for r in range(self.ring.order)]
        return FinModule(self.ring, add, act, labels=pairs)


def _radix(orders):
    strides = []
    s = 1
    for o in reversed(orders):
        strides.append(s)
        s *= o
    return list(reversed(strides)), s


class TensorProduct:
    """``M ⊗_R N`` with elements indexed ``0..order-1`` (mixed radix)."""

    def __init__(self, M: FinModule, N: FinModule):
        if M.ring != N.ring:
            raise ShapeMismatch("tensor factors are modules over different rings")
        R = M.ring
        self.left, self.right, self.ring = M, N, R
        bM, bN = M.basis, N.basis
        nm, nn = len(bM.basis), len(bN.basis)
        k = nm * nn
        if k > CAPS.max_tensor_generators:
            raise SizeCapExceeded(f"tensor presentation needs {k} generators")
        self.gen_count = k
        rows = []
        for i in range(nm):
            for j in range(nn):
                row = [0] * k
                row[i * nn + j] = gcd(bM.orders[i], bN.orders[j])
                rows.append(row)
        scalars = additive_basis(R.order, R.add).basis
        for r in scalars:
            for i in range(nm):
                ci = bM.coords[M.act[r][bM.basis[i]]]
                for j in range(nn):
                    cj = bN.coords[N.act[r][bN.basis[j]]]
                    row = [0] * k
                    for a in range(nm):
                        row[a * nn + j] += ci[a]
                    for b in range(nn):
                        row[i * nn + b] -= cj[b]
                    if any(row):
                        rows.append(row)
        if k:
            diag, _, right = smith_normal_form(rows)
            keep = [t for t, d in enumerate(diag) if d != 1]
            self.orders = [diag[t] for t in keep]
            self._right = [[right[g][t] for t in keep] for g in range(k)]
            inv = unimodular_inverse(right)
            self._lifts = [[(g // nn, g % nn, inv[t][g]) for g in range(k) if inv[t][g]]
                           for t in keep]
        else:
            self.orders, self._right, self._lifts = [], [], []
        self._strides, self.order = _radix(self.orders)
        if self.order > CAPS.max_tensor_order:
            raise SizeCapExceeded(f"tensor product of order {self.order} exceeds cap")
        self._pure = {}

    # coordinates ------------------------------------------------------------
    def tuple_of(self, idx: int) -> tuple:
        return tuple((idx // s) % o for s, o in zip(self._strides, self.orders))

    def index_of(self, coords) -> int:
        return sum((c % o) * s for c, o, s in zip(coords, self.orders, self._strides))

    def elements(self):
        return range(self.order)

    def add(self, u: int, v: int) -> int:
        return self.index_of([a + b for a, b in zip(self.tuple_of(u), self.tuple_of(v))])

    def pure(self, x: int, y: int) -> int:
        """Index of x ⊗ y."""
        key = (x, y)
        if key not in self._pure:
            cx = self.left.basis.coords[x]
            cy = self.right.basis.coords[y]
            nn = len(cy)
            vec = [0] * len(self.orders)
            for i, a in enumerate(cx):
                if not a:
                    continue
                for j, b in enumerate(cy):
                    if b:
                        row = self._right[i * nn + j]
                        for t in range(len(vec)):
                            vec[t] += a * b * row[t]
            self._pure[key] = self.index_of(vec)
        return self._pure[key]

    def induced(self, bilinear, add, zero, times):
        """Values on every element of the additive map ``x ⊗ y -> bilinear(x, y)``.

        ``add``/``times`` describe the target abelian group.
        """
        bM, bN = self.left.basis, self.right.basis
        images = []
        for lift in self._lifts:
            acc = zero
            for i, j, c in lift:
                acc = add(acc, times(c, bilinear(bM.basis[i], bN.basis[j])))
            images.append(acc)
        out = []
        for idx in range(self.order):
            acc = zero
            for c, img in zip(self.tuple_of(idx), images):
                if c:
                    acc = add(acc, times(c, img))
            out.append(acc)
        return out


def table_times(add, zero=0):
    """Integer multiples in an abelian group given by its addition table."""
    def times(k, a):
        m, x = 1, a
        while x != zero:
            x = add[x][a]
            m += 1
        acc = zero
        for _ in range(k % m):
            acc = add[acc][a]
        return acc
    return times


def tensor_to_ring_map(T: TensorProduct, S: FinRing, bilinear):
    """Values of the additive map T -> S induced by a bilinear map into S."""
    return T.induced(bilinear, lambda a, b: S.add[a][b], 0, lambda k, a: S.times(k, a))


def tensor_comparison_injective(T: TensorProduct, S: FinRing, bilinear):
    """Whether the induced map T -> S is injective; returns (ok, kernel element)."""
    vals = tensor_to_ring_map(T, S, bilinear)
    for idx in range(1, T.order):
        if vals[idx] == 0:
            return False, idx
    return True, None


class TensorRing:
    """``A ⊗_R B`` as a FinRing with the canonical maps from A and B."""

    def __init__(self, f: RingHom, g: RingHom):
        if f.source != g.source:
            raise ShapeMismatch("tensor legs have different sources")
        A, B = f.target, g.target
        self.base, self.f, self.g = f.source, f, g
        T = TensorProduct(FinModule.along(f), FinModule.along(g))
        self.module = T
        n = T.order
        one_raw = T.pure(A.one, B.one)
        perm = [0] + ([one_raw] if one_raw != 0 else []) + [r for r in range(1, n) if r != one_raw]
        pos = {r: k for k, r in enumerate(perm)}
        self._raw_to_ring = [pos[r] for r in range(n)]
        self._ring_to_raw = perm
        # Multiplication on tensor basis elements via lifts, then bilinear extension.
        bA, bB = T.left.basis, T.right.basis
        lifts = T._lifts
        m = len(lifts)
        basis_prod = [[0] * m for _ in range(m)]
        for s in range(m):
            for t in range(s, m):
                acc = [0] * len(T.orders)
                for i, j, c in lifts[s]:
                    for i2, j2, c2 in lifts[t]:
                        p = T.pure(A.mul[bA.basis[i]][bA.basis[i2]], B.mul[bB.basis[j]][bB.basis[j2]])
                        for q, v in enumerate(T.tuple_of(p)):
                            acc[q] += c * c2 * v
                basis_prod[s][t] = basis_prod[t][s] = tuple(acc)
        add_raw = [[T.add(u, v) for v in range(n)] for u in range(n)]
        mul_raw = [[0] * n for _ in range(n)]
        tuples = [T.tuple_of(u) for u in range(n)]
        for u in range(n):
            tu = tuples[u]
            for v in range(u, n):
                tv = tuples[v]
                acc = [0] * len(T.orders)
                for s, a in enumerate(tu):
                    if not a:
                        continue
                    for t, b in enumerate(tv):
                        if b:
                            for q, w in enumerate(basis_prod[s][t]):
                                acc[q] += a * b * w
                mul_raw[u][v] = mul_raw[v][u] = T.index_of(acc)
        # Well-definedness: the induced product agrees on all pure tensors.
        for a in range(A.order):
            for b in range(B.order):
                x = T.pure(a, b)
                for a2 in range(A.order):
                    for b2 in range(B.order):
                        if mul_raw[x][T.pure(a2, b2)] != T.pure(A.mul[a][a2], B.mul[b][b2]):
                            raise AssertionError("tensor multiplication is not well defined")
        add = [[pos[add_raw[perm[i]][perm[j]]] for j in range(n)] for i in range(n)]
        mul = [[pos[mul_raw[perm[i]][perm[j]]] for j in range(n)] for i in range(n)]
        name = None
        if A.name and B.name and self.base.name:
            name = f"{A.name} (x)_{self.base.name} {B.name}"
        self.ring = FinRing(add, mul, name=name, check=False)
        self.left_map = RingHom(A, self.ring, [pos[T.pure(a, B.one)] for a in range(A.order)], check=False)
        self.right_map = RingHom(B, self.ring, [pos[T.pure(A.one, b)] for b in range(B.order)], check=False)

    def pure(self, a: int, b: int) -> int:
        return self._raw_to_ring[self.module.pure(a, b)]

    def copair(self, u: RingHom, v: RingHom, check=True) -> RingHom:
        """The map A ⊗_R B -> C induced by u: A -> C and v: B -> C."""
        C = u.target
        if v.target != C:
            raise ShapeMismatch("copair legs have different targets")
        raw = tensor_to_ring_map(self.module, C, lambda a, b: C.mul[u.values[a]][v.values[b]])
        values = [raw[self._ring_to_raw[k]] for k in range(self.ring.order)]
        return RingHom(self.ring, C, values, check=check)


def tensor_ring(f: RingHom, g: RingHom):
    """``(A ⊗_R B, A -> A⊗B, B -> A⊗B)`` for f: R -> A, g: R -> B."""
    t = TensorRing(f, g)
    return t.ring, t.left_map, t.right_map


def module_tensor(M: FinModule, N: FinModule) -> TensorProduct:
    return TensorProduct(M, N)
