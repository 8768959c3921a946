"""Finite models: order complexes, edge-path presentations, H1 and a Van Kampen comparison.

Group isomorphism is not decided.  Two presentations are compared through
H1 and the number of homomorphisms into each group of a small panel; a
mismatch is a genuine difference, agreement is only evidence.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .config import CAPS
from .cylinder import LaxDatum, cylinder
from .errors import DisconnectedFiber, NotConnected, SizeCapExceeded, UnknownPreset
from .finring.abelian import AbPresentation, ab_normal_form, smith_normal_form
from .ids import id_key, label, sort_ids
from .poset import Poset

# simplicial complexes -------------------------------------------------------------


@dataclass
class SimplicialComplex:
    """Vertices plus every simplex as a tuple of vertices listed in increasing order."""

    vertices: list
    simplices: dict  # dimension -> sorted list of tuples

    def of_dim(self, k: int) -> list:
        return self.simplices.get(k, [])

    @property
    def dimension(self) -> int:
        return max((k for k, s in self.simplices.items() if s), default=-1)

    def f_vector(self) -> list:
        return [len(self.of_dim(k)) for k in range(self.dimension + 1)]

    def is_closed_under_faces(self) -> bool:
        present = {k: set(v) for k, v in self.simplices.items()}
        for k, simplices in self.simplices.items():
            if k == 0:
                continue
            for s in simplices:
                for i in range(len(s)):
                    if s[:i] + s[i + 1:] not in present[k - 1]:
                        return False
        return True


def order_complex(P: Poset, max_dim: int = None) -> SimplicialComplex:
    """Chains of P; ``max_dim`` truncates to the given skeleton."""
    order = P.linear_extension()
    pos = {x: i for i, x in enumerate(order)}
    simplices = {0: [(x,) for x in sort_ids(P.elements)]}
    current = simplices[0]
    k = 0
    while current and (max_dim is None or k < max_dim):
        nxt = []
        for s in current:
            top = s[-1]
            for y in P.above(top):
                if y != top:
                    nxt.append(s + (y,))
        k += 1
        if nxt:
            simplices[k] = sorted(nxt, key=lambda s: [id_key(v) for v in s])
        current = nxt
    for s in itertools.chain.from_iterable(simplices.values()):
        assert all(pos[a] < pos[b] for a, b in zip(s, s[1:]))
    return SimplicialComplex(sort_ids(P.elements), simplices)


# presentations ---------------------------------------------------------------------


def free_reduce(word) -> tuple:
    out = []
    for g, e in word:
        if out and out[-1][0] == g and out[-1][1] == -e:
            out.pop()
        else:
            out.append((g, e))
    return tuple(out)


def cyclic_reduce(word) -> tuple:
    w = list(free_reduce(word))
    while len(w) >= 2 and w[0][0] == w[-1][0] and w[0][1] == -w[-1][1]:
        w = w[1:-1]
    return tuple(w)


def invert(word) -> tuple:
    return tuple((g, -e) for g, e in reversed(word))


@dataclass
class GroupPresentation:
    generators: list
    relators: list = field(default_factory=list)

    def __post_init__(self):
        gens = set(self.generators)
        for r in self.relators:
            for g, e in r:
                if g not in gens or e not in (1, -1):
                    raise ValueError(f"relator letter {g!r}^{e} is not over the generators")

    def abelianization(self) -> AbPresentation:
        idx = {g: i for i, g in enumerate(self.generators)}
        rows = []
        for r in self.relators:
            row = [0] * len(self.generators)
            for g, e in r:
                row[idx[g]] += e
            if any(row):
                rows.append(row)
        return AbPresentation(len(self.generators), tuple(rows))

    def h1(self) -> list:
        return ab_normal_form(self.abelianization())

    def as_dict(self) -> dict:
        return {"generators": [label(g) for g in self.generators],
                "relators": [[[label(g), e] for g, e in r] for r in self.relators]}


def _bfs_tree(vertices, edges, root):
    """Parent pointers of the BFS tree (neighbours visited in id order)."""
    nbrs = {v: [] for v in vertices}
    for a, b in edges:
        nbrs[a].append(b)
        nbrs[b].append(a)
    for v in nbrs:
        nbrs[v] = sort_ids(set(nbrs[v]))
    parent = {root: None}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in nbrs[v]:
            if w not in parent:
                parent[w] = v
                queue.append(w)
    return parent


class EdgePathGroup:
    """Edge-path group of a complex with respect to a BFS spanning tree."""

    def __init__(self, K: SimplicialComplex, basepoint=None):
        if not K.vertices:
            raise NotConnected("the empty complex has no basepoint")
        self.K = K
        self.base = K.vertices[0] if basepoint is None else basepoint
        edges = K.of_dim(1)
        self.parent = _bfs_tree(K.vertices, edges, self.base)
        if len(self.parent) != len(K.vertices):
            missing = sort_ids(set(K.vertices) - set(self.parent))
            raise NotConnected(f"complex is not connected: {label(missing[0])} unreachable")
        tree = {(self.parent[v], v) for v in self.parent if self.parent[v] is not None}
        self.tree = {e if e in set(edges) else (e[1], e[0]) for e in tree}
        self.generators = [e for e in edges if e not in self.tree]
        self._edge_set = set(edges)
        gens = set(self.generators)
        relators = []
        for a, b, c in K.of_dim(2):
            word = [(e, 1) for e in ((a, b), (b, c)) if e in gens]
            if (a, c) in gens:
                word.append(((a, c), -1))
            relators.append(tuple(word))
        self.presentation = GroupPresentation(list(self.generators), relators)

    def letter(self, u, v) -> tuple:
        """The word for the oriented edge u -> v (empty on tree edges)."""
        if u == v:
            return ()
        if (u, v) in self._edge_set:
            return (((u, v), 1),) if (u, v) not in self.tree else ()
        if (v, u) in self._edge_set:
            return (((v, u), -1),) if (v, u) not in self.tree else ()
        raise ValueError(f"{label(u)} and {label(v)} are not adjacent")

    def word(self, path) -> tuple:
        """tree(base -> path[0]) . path . tree(path[-1] -> base) as a word."""
        out = []
        for u, v in zip(path, path[1:]):
            out.extend(self.letter(u, v))
        return free_reduce(out)

    def tree_path(self, u, v) -> list:
        """Vertex path from u to v inside the spanning tree."""
        def to_root(w):
            out = [w]
            while self.parent[out[-1]] is not None:
                out.append(self.parent[out[-1]])
            return out
        a, b = to_root(u), to_root(v)
        common = set(a) & set(b)
        i = next(k for k, w in enumerate(a) if w in common)
        j = b.index(a[i])
        return a[:i + 1] + list(reversed(b[:j]))

    def loop_of(self, gen) -> list:
        a, b = gen
        return self.tree_path(self.base, a) + self.tree_path(b, self.base)


def pi1_presentation(K: SimplicialComplex, basepoint=None) -> GroupPresentation:
    return EdgePathGroup(K, basepoint).presentation


def simplify(pres: GroupPresentation, max_length: int = 10000) -> GroupPresentation:
    """Tietze moves: reduce relators and eliminate generators occurring once in a relator."""
    gens = list(pres.generators)
    rels = [cyclic_reduce(r) for r in pres.relators]
    while True:
        rels = _dedupe([r for r in rels if r])
        best = None
        for k, r in enumerate(rels):
            counts = {}
            for g, _ in r:
                counts[g] = counts.get(g, 0) + 1
            for g in sort_ids(counts):
                if counts[g] == 1 and (best is None or len(r) < best[0]):
                    best = (len(r), k, g)
        if best is None:
            break
        _, k, g = best
        r = rels[k]
        i = next(i for i, (h, _) in enumerate(r) if h == g)
        rotated = r[i:] + r[:i]
        e, rest = rotated[0][1], rotated[1:]
        value = invert(rest) if e == 1 else rest
        new = []
        for j, s in enumerate(rels):
            if j == k:
                continue
            out = []
            for h, f in s:
                if h == g:
                    out.extend(value if f == 1 else invert(value))
                else:
                    out.append((h, f))
            new.append(cyclic_reduce(out))
        if sum(len(s) for s in new) > max_length:
            break
        rels = new
        gens.remove(g)
    return GroupPresentation(gens, rels)


def _dedupe(rels):
    seen, out = set(), []
    for r in rels:
        rots = [r[i:] + r[:i] for i in range(len(r))]
        inv = invert(r)
        rots += [inv[i:] + inv[:i] for i in range(len(inv))]
        key = min(tuple((id_key(g), e) for g, e in w) for w in rots)
        if key not in seen:
            seen.add(key)
            out.append(r)
    return out


def h1_invariants(K: SimplicialComplex) -> list:
    """H1 from the boundary maps: torsion of coker d2, free rank dim ker d1 - rank d2."""
    verts = {v: i for i, v in enumerate(K.vertices)}
    edges = K.of_dim(1)
    eidx = {e: i for i, e in enumerate(edges)}
    if not edges:
        return []
    d1 = [[0] * len(edges) for _ in verts]
    for j, (a, b) in enumerate(edges):
        d1[verts[b]][j] += 1
        d1[verts[a]][j] -= 1
    rank1 = sum(1 for d in smith_normal_form(d1)[0] if d)
    tris = K.of_dim(2)
    if tris:
        d2 = [[0] * len(tris) for _ in edges]
        for j, (a, b, c) in enumerate(tris):
            d2[eidx[(b, c)]][j] += 1
            d2[eidx[(a, c)]][j] -= 1
            d2[eidx[(a, b)]][j] += 1
        diag = smith_normal_form(d2)[0]
    else:
        diag = []
    rank2 = sum(1 for d in diag if d)
    torsion = sorted(d for d in diag if d > 1)
    return torsion + [0] * (len(edges) - rank1 - rank2)


# finite groups -----------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteGroup:
    name: str
    mul: tuple  # mul[a][b] = a*b, identity is 0

    @property
    def order(self) -> int:
        return len(self.mul)

    def inverse(self, a: int) -> int:
        return next(b for b in range(self.order) if self.mul[a][b] == 0)

    def verify(self) -> None:
        n = self.order
        for a in range(n):
            if self.mul[0][a] != a or self.mul[a][0] != a:
                raise ValueError("0 is not the identity")
            for b in range(n):
                for c in range(n):
                    if self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]]:
                        raise ValueError("multiplication is not associative")
        for a in range(n):
            self.inverse(a)


def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup(f"Z/{n}", tuple(tuple((a + b) % n for b in range(n)) for a in range(n)))


def symmetric_group(k: int) -> FiniteGroup:
    perms = list(itertools.permutations(range(k)))
    idx = {p: i for i, p in enumerate(perms)}
    # (p*q)(i) = p(q(i))
    mul = tuple(tuple(idx[tuple(p[q[i]] for i in range(k))] for q in perms) for p in perms)
    return FiniteGroup(f"S{k}", mul)


def group_preset(name: str) -> FiniteGroup:
    if name.startswith("Z/") and name[2:].isdigit() and int(name[2:]) > 0:
        G = cyclic_group(int(name[2:]))
    elif name in ("S3", "S4"):
        G = symmetric_group(int(name[1]))
    else:
        raise UnknownPreset(f"unknown group preset {name!r}")
    if G.order > CAPS.max_group_order:
        raise SizeCapExceeded(f"group {name} exceeds the order cap")
    return G


PANEL = ("Z/2", "Z/3", "S3", "Z/4")


def panel_groups(panel=PANEL) -> list:
    """Preset names or explicit groups."""
    return [G if isinstance(G, FiniteGroup) else group_preset(G) for G in panel]


def count_homs(pres: GroupPresentation, G: FiniteGroup, reduce: bool = True) -> int:
    """Number of homomorphisms from the presented group to G."""
    if reduce:
        pres = simplify(pres)
    gens = list(pres.generators)
    bound = G.order ** len(gens)
    if bound > CAPS.max_map_bound:
        raise SizeCapExceeded(f"hom search of size {bound} exceeds cap")
    pos = {g: i for i, g in enumerate(gens)}
    inv = [G.inverse(a) for a in range(G.order)]
    checks = [[] for _ in gens]
    for r in pres.relators:
        if r:
            checks[max(pos[g] for g, _ in r)].append(r)
    value = [0] * len(gens)

    def holds(r):
        acc = 0
        for g, e in r:
            v = value[pos[g]]
            acc = G.mul[acc][v if e == 1 else inv[v]]
        return acc == 0

    def rec(i):
        if i == len(gens):
            return 1
        total = 0
        for a in range(G.order):
            value[i] = a
            if all(holds(r) for r in checks[i]):
                total += rec(i + 1)
        return total

    return rec(0)


def panel_counts(pres: GroupPresentation, panel=PANEL) -> dict:
    simple = simplify(pres)
    return {G.name: count_homs(simple, G, reduce=False) for G in panel_groups(panel)}


# Van Kampen ---------------------------------------------------------------------------


def _fiber_poset(X: LaxDatum, p) -> Poset:
    return X.fibers[p].base


def amalgam_presentation(X: LaxDatum) -> GroupPresentation:
    """Presentation of pi1 of Cyl(X) assembled from the fibers along the shape.

    Fiber groups are based at their least point.  Each comparable pair p < q of
    the shape contributes a letter t_pq (trivial on a spanning tree of the shape),
    the conjugation relators t_pq g t_pq^-1 = X_pq(g) and, for every chain
    p < q < r, the cocycle relator t_pq t_qr t_pr^-1 = [X_pq(path q)].
    """
    shape = X.shape
    groups, bases = {}, {}
    for p in sort_ids(shape.elements):
        F = _fiber_poset(X, p)
        if not F.elements or not F.is_connected():
            raise DisconnectedFiber(f"fiber at {label(p)} is not connected")
        groups[p] = EdgePathGroup(order_complex(F, max_dim=2))
        bases[p] = groups[p].base
    pairs = shape.related_pairs()
    if not pairs and len(shape) > 1:
        raise NotConnected("the shape is not connected")
    root = sort_ids(shape.elements)[0]
    parent = _bfs_tree(shape.elements, pairs, root)
    if len(parent) != len(shape):
        raise NotConnected("the shape is not connected")
    tree = {frozenset((a, b)) for b, a in parent.items() if a is not None}

    def fiber_gen(p, g):
        return ("f", p, g)

    def lift(p, word):
        return tuple((fiber_gen(p, g), e) for g, e in word)

    gens, rels = [], []
    for p, eg in groups.items():
        gens += [fiber_gen(p, g) for g in eg.generators]
        rels += [lift(p, r) for r in eg.presentation.relators]
    t = {}
    for p, q in pairs:
        name = ("t", p, q)
        gens.append(name)
        t[(p, q)] = name
        if frozenset((p, q)) in tree:
            rels.append(((name, 1),))

    def push(p, q, path):
        trans = X.transitions[(p, q)]
        return [trans.base(v) for v in path]

    for p, q in pairs:
        eq, ep = groups[q], groups[p]
        tpq = ((t[(p, q)], 1),)
        for g in eq.generators:
            image = ep.word(push(p, q, eq.loop_of(g)))
            rel = tpq + lift(q, ((g, 1),)) + invert(tpq) + invert(lift(p, image))
            rels.append(free_reduce(rel))
    for p, q in pairs:
        for r in shape.above(q):
            if r == q:
                continue
            eq, ep = groups[q], groups[p]
            path = eq.tree_path(bases[q], X.transitions[(q, r)].base(bases[r]))
            z = ep.word(push(p, q, path))
            rel = ((t[(p, q)], 1), (t[(q, r)], 1), (t[(p, r)], -1)) + invert(lift(p, z))
            rels.append(free_reduce(rel))
    return GroupPresentation(gens, [r for r in rels if r])


def cylinder_presentation(X: LaxDatum) -> GroupPresentation:
    C = cylinder(X)
    return pi1_presentation(order_complex(C.base, max_dim=2))


def van_kampen_check(X: LaxDatum, panel=PANEL) -> dict:
    amalgam = amalgam_presentation(X)
    C = cylinder(X)
    K = order_complex(C.base, max_dim=2)
    direct = pi1_presentation(K)
    h_direct, h_amalgam = h1_invariants(K), amalgam.h1()
    c_direct, c_amalgam = panel_counts(direct, panel), panel_counts(amalgam, panel)
    names = [G.name for G in panel_groups(panel)]
    witness = None
    if h_direct != h_amalgam:
        witness = {"invariant": "H1"}
    else:
        for name in names:
            if c_direct[name] != c_amalgam[name]:
                witness = {"invariant": "homs", "group": name}
                break
    return {"condition": "van kampen", "verdict": witness is None,
            "comparison": "H1 and hom counts into the panel (evidence, not a proof of isomorphism)",
            "h1": {"cylinder": h_direct, "amalgam": h_amalgam},
            "homs": {name: {"cylinder": c_direct[name], "amalgam": c_amalgam[name]} for name in names},
            "cylinder_vertices": len(K.vertices), "witness": witness}
