"""Independent brute-force oracles.

These read the package's data objects (posets, stalks, tables) but none of
its algorithms.  Everything is enumerated straight from the definitions with
itertools, plain integers and sympy's Smith normal form.
"""
from __future__ import annotations

import itertools
from math import gcd

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form


# ---- finite sets and posets -------------------------------------------------------


def functions(src, tgt):
    """All dicts src -> tgt."""
    src, tgt = list(src), list(tgt)
    for vals in itertools.product(tgt, repeat=len(src)):
        yield dict(zip(src, vals))


def monotone(P, Q):
    for f in functions(P.elements, Q.elements):
        if all(Q.leq(f[a], f[b]) for a in P.elements for b in P.elements if P.leq(a, b)):
            yield f


def stalk_maps(A, B, ordered: bool):
    """Kernel maps between stalks: monotone for posets, arbitrary for sets."""
    return list(monotone(A, B)) if ordered else list(functions(A.elements, B.elements))


def as_fn(m):
    """Package kernel map (MonotoneMap) as a dict."""
    return {a: m(a) for a in m.source.elements}


# ---- C-data over Set / Pos --------------------------------------------------------


def restriction_fn(F, x, y):
    return as_fn(F.restriction(x, y))


def brute_homs(F, G, ordered: bool):
    """All (base, sharp) pairs F -> G, checked by naturality on every related pair."""
    out = []
    pairs = [(x, y) for x in F.base.elements for y in F.base.elements if F.base.leq(x, y)]
    for f in monotone(F.base, G.base):
        choices = [stalk_maps(G.stalk(f[x]), F.stalk(x), ordered) for x in F.base.elements]
        for combo in itertools.product(*choices):
            sharp = dict(zip(F.base.elements, combo))
            ok = True
            for x, y in pairs:
                rF, rG = restriction_fn(F, x, y), restriction_fn(G, f[x], f[y])
                for s in G.stalk(f[x]).elements:
                    if rF[sharp[x][s]] != sharp[y][rG[s]]:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.append((f, sharp))
    return out


def brute_two_cell(F, G, a, b) -> bool:
    """a <= b: base pointwise below and a#_x = b#_x after G's restriction."""
    fa, sa = a
    fb, sb = b
    for x in F.base.elements:
        if not G.base.leq(fa[x], fb[x]):
            return False
        r = restriction_fn(G, fa[x], fb[x])
        for s in G.stalk(fa[x]).elements:
            if sa[x][s] != sb[x][r[s]]:
                return False
    return True


def hom_shape(F, G, ordered: bool):
    """(number of morphisms, number of strictly related pairs) of the hom poset."""
    hs = brute_homs(F, G, ordered)
    rel = sum(1 for a, b in itertools.permutations(hs, 2) if brute_two_cell(F, G, a, b))
    return len(hs), rel


def brute_cylinder_order(X):
    """Points (p, x) with (p, x) <= (q, y) iff p <= q and x <= X_pq(y)."""
    pts = [(p, x) for p in X.shape.elements for x in X.fibers[p].base.elements]
    rel = set()
    for (p, x), (q, y) in itertools.product(pts, pts):
        if X.shape.leq(p, q):
            t = X.transitions[(p, q)].base
            if X.fibers[p].base.leq(x, t(y)):
                rel.add(((p, x), (q, y)))
    return pts, rel


def compose_brute(g, f, F, G):
    """(g ∘ f) for brute morphisms F -> G -> H."""
    fb, fs = f
    gb, gs = g
    base = {x: gb[fb[x]] for x in F.base.elements}
    sharp = {x: {s: fs[x][gs[fb[x]][s]] for s in gs[fb[x]]} for x in F.base.elements}
    return base, sharp


def as_brute(m):
    """Package CDataMorphism as (base dict, sharp dict of dicts)."""
    return ({x: m.base(x) for x in m.source.base.elements},
            {x: as_fn(m.sharp[x]) for x in m.source.base.elements})


def lax_shape(X, Y, ordered: bool):
    """(number of lax transformations X => Y, number of strictly related pairs).

    A lax transformation is a family f_p: X(p) -> Y with f_p ∘ X_pq <= f_q for p <= q;
    families are ordered fiberwise.
    """
    shape = X.shape
    homs = {p: brute_homs(X.fibers[p], Y, ordered) for p in shape.elements}
    trans = {(p, q): as_brute(X.transitions[(p, q)])
             for p in shape.elements for q in shape.elements if shape.leq(p, q)}
    fams = []
    for combo in itertools.product(*(homs[p] for p in shape.elements)):
        fam = dict(zip(shape.elements, combo))
        ok = all(brute_two_cell(X.fibers[q], Y, compose_brute(fam[p], trans[(p, q)], X.fibers[q], X.fibers[p]),
                                fam[q])
                 for (p, q) in trans if p != q)
        if ok:
            fams.append(fam)
    rel = sum(1 for a, b in itertools.permutations(fams, 2)
              if all(brute_two_cell(X.fibers[p], Y, a[p], b[p]) for p in shape.elements))
    return len(fams), rel


# ---- Z/n arithmetic -------------------------------------------------------------------


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def zn_ideal_count(n):
    return len(divisors(n))


def zn_prime_count(n):
    return sum(1 for p in divisors(n) if p > 1 and all(p % q for q in range(2, p)))


def zn_flat_failures(n, m):
    """For Z/n -> Z/m (m | n): divisors d with (d) ⊗ Z/m -> Z/m not injective.

    (d) is cyclic of order n/d, so (d) ⊗ Z/m is cyclic of order gcd(n/d, m),
    while its image d·Z/m has m/gcd(d, m) elements.
    """
    return [d for d in divisors(n) if d < n and gcd(n // d, m) != m // gcd(d, m)]


def zn_tensor_order(a, b):
    """Z/a ⊗ Z/b over any Z/n they both receive: Z/gcd(a, b)."""
    return gcd(a, b)


# ---- groups -----------------------------------------------------------------------------


def perm_mul(a, b):
    return tuple(a[b[i]] for i in range(len(b)))


def commuting_pairs(k):
    perms = list(itertools.permutations(range(k)))
    return sum(1 for a, b in itertools.product(perms, perms) if perm_mul(a, b) == perm_mul(b, a))


def cyclic_homs_from_free(rank, order):
    return order ** rank


# ---- order complexes and homology ------------------------------------------------------


def chains(P, length):
    """Strictly increasing chains with ``length`` elements."""
    out = []
    for combo in itertools.permutations(P.elements, length):
        if all(P.leq(combo[i], combo[i + 1]) and combo[i] != combo[i + 1] for i in range(length - 1)):
            out.append(combo)
    return out


def boundary(simplices_hi, simplices_lo):
    index = {frozenset(s): i for i, s in enumerate(simplices_lo)}
    M = [[0] * len(simplices_hi) for _ in simplices_lo]
    for j, s in enumerate(simplices_hi):
        for k in range(len(s)):
            face = frozenset(s[:k] + s[k + 1:])
            M[index[face]][j] += (-1) ** k
    return M


def _rank_and_torsion(M):
    if not M or not M[0]:
        return 0, []
    S = smith_normal_form(Matrix(M), domain=ZZ)
    diag = [abs(S[i, i]) for i in range(min(S.shape)) if S[i, i] != 0]
    return len(diag), [d for d in diag if d > 1]


def h1(P):
    """Invariant factors of H1 of the order complex: torsion then one 0 per free rank."""
    V, E, T = chains(P, 1), chains(P, 2), chains(P, 3)
    r1, _ = _rank_and_torsion(boundary(E, V)) if E else (0, [])
    r2, torsion = _rank_and_torsion(boundary(T, E)) if T else (0, [])
    free = len(E) - r1 - r2
    return sorted(torsion) + [0] * free


def f_vector(P, top=3):
    return [len(chains(P, k)) for k in range(1, top + 1) if chains(P, k)]


# ---- finite set colimits -------------------------------------------------------------------


def set_colimit_size(objects: dict, arrows: dict) -> int:
    """Quotient of the disjoint union by a ~ arrow(a); arrows map (i, j) with objects[j] -> objects[i]."""
    parent = {}

    def find(a):
        while parent.setdefault(a, a) != a:
            a = parent[a]
        return a

    for i, elems in objects.items():
        for e in elems:
            find((i, e))
    for (i, j), fn in arrows.items():
        for e in objects[j]:
            ra, rb = find((j, e)), find((i, fn[e]))
            if ra != rb:
                parent[ra] = rb
    return len({find(a) for a in parent})
