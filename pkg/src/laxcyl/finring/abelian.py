"""Integer Smith normal form and finite abelian groups given by tables."""
from __future__ import annotations

from dataclasses import dataclass, field


def smith_normal_form(matrix):
    """Diagonalize an integer matrix.

    Returns ``(diag, left, right)`` with ``left @ matrix @ right`` diagonal,
    ``left``/``right`` unimodular and ``diag`` the nonzero diagonal entries,
    each dividing the next.
    """
    a = [list(map(int, row)) for row in matrix]
    m = len(a)
    n = len(a[0]) if m else 0
    left = [[int(i == j) for j in range(m)] for i in range(m)]
    right = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        left[i], left[j] = left[j], left[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in right:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        # row dst += k * row src
        ra, rs = a[dst], a[src]
        for c in range(n):
            ra[c] += k * rs[c]
        la, ls = left[dst], left[src]
        for c in range(m):
            la[c] += k * ls[c]

    def add_col(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        for row in right:
            row[dst] += k * row[src]

    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            dirty = False
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, m):
                    if a[i][t] and (best is None or abs(a[i][t]) < abs(a[best[0]][best[1]])):
                        best = (i, t)
                for j in range(t, n):
                    if a[t][j] and (best is None or abs(a[t][j]) < abs(a[best[0]][best[1]])):
                        best = (t, j)
                swap_rows(t, best[0])
                swap_cols(t, best[1])
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-v for v in a[t]]
            left[t] = [-v for v in left[t]]
        diag.append(a[t][t])
        t += 1
    return diag, left, right


@dataclass(frozen=True)
class AbPresentation:
    """Abelian group Z^generators / (row span of relations)."""

    generators: int
    relations: tuple = ()

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.relations)
        for r in rows:
            if len(r) != self.generators:
                raise ValueError("relation row length differs from generator count")
        object.__setattr__(self, "relations", rows)

    @property
    def is_finite(self) -> bool:
        return 0 not in ab_normal_form(self)


def ab_normal_form(pres: AbPresentation) -> list:
    """Invariant factors as a divisor chain; each 0 is a free Z summand."""
    if not pres.relations:
        return [0] * pres.generators
    diag, _, _ = smith_normal_form(pres.relations)
    return [d for d in diag if d != 1] + [0] * (pres.generators - len(diag))


@dataclass
class AdditiveBasis:
    """Direct-sum decomposition of a finite abelian group given by a table.

    ``basis[i]`` has order ``orders[i]`` (all > 1) and every element ``x`` is
    ``sum coords[x][i] * basis[i]`` with ``0 <= coords[x][i] < orders[i]``.
    """

    basis: list
    orders: list
    coords: list
    lookup: dict = field(default_factory=dict)

    def element(self, c) -> int:
        return self.lookup[tuple(v % d for v, d in zip(c, self.orders))]


def additive_basis(n: int, add, zero: int = 0) -> AdditiveBasis:
    # Greedy generators with a triangular presentation, then normal form.
    gens = []
    rels = []
    coords = {zero: ()}
    for x in range(n):
        if x in coords:
            continue
        m, y = 1, x
        while y not in coords:
            y = add[y][x]
            m += 1
        k = len(gens)
        row = [-c for c in coords[y]] + [m]
        rels.append(row)
        gens.append(x)
        old = list(coords.items())
        coords = {h: c + (0,) for h, c in old}
        for h, c in old:
            z = h
            for j in range(1, m):
                z = add[z][x]
                coords[z] = c + (j,)
        for r in rels:
            r.extend([0] * (k + 1 - len(r)))
    k = len(gens)
    if k == 0:
        return AdditiveBasis([], [], [()] * n, {(): zero})
    diag, _, right = smith_normal_form(rels)
    keep = [i for i, d in enumerate(diag) if d != 1]
    orders = [diag[i] for i in keep]
    new = []
    for x in range(n):
        c = coords[x]
        new.append(tuple(sum(c[r] * right[r][i] for r in range(k)) % diag[i] for i in keep))
    lookup = {c: x for x, c in enumerate(new)}
    if len(lookup) != n:
        raise AssertionError("additive decomposition is not bijective")
    basis = []
    for pos in range(len(keep)):
        unit = tuple(int(j == pos) for j in range(len(keep)))
        basis.append(lookup[unit])
    return AdditiveBasis(basis, orders, new, lookup)


def unimodular_inverse(matrix):
    """Exact inverse of a square integer matrix with determinant +-1."""
    from fractions import Fraction

    n = len(matrix)
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(matrix)]
    for c in range(n):
        piv = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [v * inv for v in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                k = a[r][c]
                a[r] = [x - k * y for x, y in zip(a[r], a[c])]
    out = []
    for row in a:
        vals = row[n:]
        if any(v.denominator != 1 for v in vals):
            raise ValueError("matrix is not unimodular")
        out.append([int(v) for v in vals])
    return out
