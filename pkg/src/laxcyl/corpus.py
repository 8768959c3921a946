"""Deterministic randomized corpus.

Everything is drawn from ``random.Random(seed)``.  Set and poset data keep
shapes and fibers at three points or fewer.  Ringed instances draw stalks
from a fixed preset list and keep only restrictions that the oracles certify
as flat epimorphisms.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .cdata import (CData, CDataMorphism, compose_morphisms, enumerate_morphisms, identity_morphism,
                    inclusion_of, inclusion_point, make_cdata)
from .cylinder import LaxDatum, LaxDatumMorphism, identity_datum_morphism
from .errors import LabError
from .finring import is_epi, is_flat, ring_homs, ring_preset
from .gallery import named_examples, z6_cover
from .kernels import FINCRING, FINPOS, FINSET
from .poset import MonotoneMap, Poset, enumerate_monotone
from .schematic import is_pseudo_schematic, nerve_datum, restrict_datum
from .serialize import dump

RING_NAMES = ("Z/2", "Z/3", "Z/4", "Z/6", "F4", "Z/2 x Z/2", "Z/2 x Z/3", "Z/2[x]/(x^2)")
SMALL_RINGS = ("Z/2", "Z/3", "Z/4", "Z/6", "Z/2 x Z/2")
SHAPE_NAMES = "pqr"
POINT_NAMES = "abc"


@dataclass
class Corpus:
    seed: int
    lax: list = field(default_factory=list)  # (LaxDatum, CData target)
    triples: list = field(default_factory=list)  # (f, g) datum morphisms over a shared shape
    ringed: list = field(default_factory=list)  # ringed posets (pseudo-schematic)
    ringed_data: list = field(default_factory=list)  # lax data of ringed posets
    ringed_morphisms: list = field(default_factory=list)  # datum morphisms of ringed data
    covers: list = field(default_factory=list)  # lists of legs into a common space
    pos_data: list = field(default_factory=list)  # FinPos/FinSet data with connected fibers

    def spaces(self) -> list:
        """Every CData the corpus mentions (fibers, targets and ringed spaces)."""
        out = []
        for X, Y in self.lax:
            out += list(X.fibers.values()) + [Y]
        out += self.ringed
        for X in self.ringed_data:
            out += list(X.fibers.values())
        return out


# posets ---------------------------------------------------------------------------


def random_poset(rng: random.Random, n: int, names=POINT_NAMES, density: float = 0.5) -> Poset:
    elems = list(names[:n])
    order = elems[:]
    rng.shuffle(order)
    covers = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density]
    return Poset.from_covers(elems, covers)


def random_connected_poset(rng: random.Random, n: int, names=POINT_NAMES) -> Poset:
    for _ in range(50):
        P = random_poset(rng, n, names, density=0.7)
        if P.is_connected():
            return P
    return Poset.chain(list(names[:n]))


# set / poset data -------------------------------------------------------------------


def _random_object(rng, kernel, size):
    elems = list(range(size))
    if kernel is FINSET:
        return Poset.antichain(elems)
    if size == 2 and rng.random() < 0.6:
        return Poset.chain(elems)
    return Poset.antichain(elems)


def random_cdata(rng: random.Random, kernel, n: int, max_stalk: int = 2) -> CData:
    base = random_poset(rng, n)
    for _ in range(20):
        stalks = {x: _random_object(rng, kernel, rng.randint(1, max_stalk)) for x in base.elements}
        restr = {}
        ok = True
        for x, y in base.covers():
            maps = enumerate_monotone(stalks[x], stalks[y])
            if not maps:
                ok = False
                break
            restr[(x, y)] = rng.choice(maps)
        if ok:
            try:
                return make_cdata(kernel, base, stalks, restr)
            except LabError:
                continue
    one = _random_object(rng, kernel, 1)
    return make_cdata(kernel, base, {x: one for x in base.elements},
                      {c: kernel.identity(one) for c in base.covers()})


def random_datum(rng: random.Random, kernel, shape: Poset, fiber_sizes, max_stalk=2, tries=30):
    """A lax datum with transitions drawn from the enumerated morphisms."""
    for _ in range(tries):
        fibers = {p: random_cdata(rng, kernel, fiber_sizes[p], max_stalk) for p in shape.elements}
        trans = {}
        ok = True
        for p, q in shape.covers():
            homs = enumerate_morphisms(fibers[q], fibers[p])
            if not homs:
                ok = False
                break
            trans[(p, q)] = rng.choice(homs)
        if not ok:
            continue
        try:
            return LaxDatum(shape, fibers, trans)
        except LabError:
            continue
    return None


def lax_instances(rng: random.Random, count: int, max_cyl: int = 6) -> list:
    out = []
    while len(out) < count:
        kernel = rng.choice([FINSET, FINPOS])
        shape = random_poset(rng, rng.randint(1, 3), SHAPE_NAMES)
        sizes = {p: rng.randint(1, 3) for p in shape.elements}
        if sum(sizes.values()) > max_cyl:
            continue
        X = random_datum(rng, kernel, shape, sizes)
        if X is None:
            continue
        Y = random_cdata(rng, kernel, rng.randint(1, 2), max_stalk=2)
        out.append((X, Y))
    return out


def datum_morphisms_into(X: LaxDatum, Z: LaxDatum, limit: int = 200) -> list:
    """Datum morphisms X -> Z over the identity of the shared shape."""
    order = X.shape.linear_extension()
    homs = {p: enumerate_morphisms(X.fibers[p], Z.fibers[p]) for p in order}
    out, chosen = [], {}

    def rec(k):
        if len(out) >= limit:
            return
        if k == len(order):
            out.append(LaxDatumMorphism(X, Z, MonotoneMap.identity(X.shape), dict(chosen), check=False))
            return
        q = order[k]
        for h in homs[q]:
            good = True
            for p in order[:k]:
                if X.shape.lt(p, q):
                    if compose_morphisms(chosen[p], X.transitions[(p, q)]) != \
                            compose_morphisms(Z.transitions[(p, q)], h):
                        good = False
                        break
            if good:
                chosen[q] = h
                rec(k + 1)
                del chosen[q]

    rec(0)
    return out


def fiber_product_triples(rng: random.Random, count: int) -> list:
    out = []
    while len(out) < count:
        kernel = rng.choice([FINSET, FINPOS])
        shape = random_poset(rng, rng.randint(1, 2), SHAPE_NAMES)
        sizes = {p: rng.randint(1, 2) for p in shape.elements}
        Z = random_datum(rng, kernel, shape, sizes)
        X = random_datum(rng, kernel, shape, {p: rng.randint(1, 2) for p in shape.elements})
        Y = random_datum(rng, kernel, shape, {p: rng.randint(1, 2) for p in shape.elements})
        if None in (X, Y, Z):
            continue
        fs, gs = datum_morphisms_into(X, Z), datum_morphisms_into(Y, Z)
        if fs and gs:
            out.append((rng.choice(fs), rng.choice(gs)))
    return out


def ring_triple():
    """(⋆, Z/2) -> (⋆, Z/6) <- (⋆, Z/3) as point-shaped data morphisms."""
    shape = Poset.point("o")
    legs = z6_cover()
    target = LaxDatum(shape, {"o": legs[0].target})
    return tuple(LaxDatumMorphism(LaxDatum(shape, {"o": leg.source}), target, MonotoneMap.identity(shape),
                                  {"o": leg}) for leg in legs)


# ringed data -----------------------------------------------------------------------


@lru_cache(maxsize=None)
def _ring(name):
    return ring_preset(name)


@lru_cache(maxsize=None)
def flat_epis(a: str, b: str) -> tuple:
    """Ring maps a -> b that are flat epimorphisms."""
    return tuple(h for h in ring_homs(_ring(a), _ring(b)) if is_flat(h) and is_epi(h))


def random_ringed(rng: random.Random, n: int, tries: int = 40, rings=RING_NAMES):
    for _ in range(tries):
        base = random_poset(rng, n)
        names = {}
        for x in base.linear_extension():
            names[x] = rng.choice(rings)
        restr = {}
        ok = True
        for x, y in base.covers():
            cands = flat_epis(names[x], names[y])
            if not cands:
                ok = False
                break
            restr[(x, y)] = rng.choice(cands)
        if not ok:
            continue
        try:
            X = make_cdata(FINCRING, base, {x: _ring(names[x]) for x in base.elements}, restr)
        except LabError:
            continue
        if is_pseudo_schematic(X)["verdict"]:
            return X
    return inclusion_point(FINCRING, _ring(rng.choice(rings)))


def open_cover(rng: random.Random, X: CData, full: bool = True) -> list:
    """Open inclusions of stars U_x; ``full`` forces the minimal points to be included."""
    pts = list(X.points)
    chosen = set(X.base.minimal()) if full else set()
    for x in pts:
        if rng.random() < 0.4:
            chosen.add(x)
    if not chosen:
        chosen.add(rng.choice(pts))
    return [inclusion_of(X, X.base.above(x)) for x in sorted(chosen, key=pts.index)]


def idempotent_cover(rng: random.Random, R_name: str) -> list:
    """(⋆, R/(1-e)) -> (⋆, R) for some idempotents e of R."""
    from .finring import principal_ideal, quotient_ring
    R = _ring(R_name)
    X = inclusion_point(FINCRING, R)
    legs = []
    idem = [e for e in R.idempotents() if e not in (0,)]
    rng.shuffle(idem)
    for e in idem[:rng.randint(1, max(1, len(idem)))]:
        Q, proj = quotient_ring(R, principal_ideal(R, R.sub(R.one, e)))
        U = inclusion_point(FINCRING, Q)
        legs.append(CDataMorphism(U, X, MonotoneMap.identity(U.base), {"*": proj}))
    return legs


def random_ringed_datum(rng: random.Random):
    """Random shape with ringed fibers and enumerated ringed transitions."""
    shape = random_poset(rng, rng.randint(1, 3), SHAPE_NAMES)
    for _ in range(30):
        fibers = {p: random_ringed(rng, rng.randint(1, 2), rings=SMALL_RINGS) for p in shape.elements}
        trans = {}
        ok = True
        for p, q in shape.covers():
            homs = enumerate_morphisms(fibers[q], fibers[p])
            if not homs:
                ok = False
                break
            trans[(p, q)] = rng.choice(homs)
        if ok:
            try:
                return LaxDatum(shape, fibers, trans)
            except LabError:
                continue
    return None


def open_tower(rng: random.Random, X: CData):
    """Shape p < q (< r) with X(p) = X and X(q) an open subset, transitions the inclusions."""
    U = X.base.above(rng.choice(list(X.points)))
    fibers = {"p": X, "q": inclusion_of(X, U).source}
    trans = {("p", "q"): inclusion_of(X, U)}
    covers = [("p", "q")]
    sub = fibers["q"]
    if len(sub.points) > 1 and rng.random() < 0.5:
        V = sub.base.above(rng.choice(list(sub.points)))
        fibers["r"] = inclusion_of(sub, V).source
        trans[("q", "r")] = inclusion_of(sub, V)
        covers.append(("q", "r"))
    shape = Poset.from_covers(list(fibers), covers)
    return LaxDatum(shape, fibers, trans)


def ringed_theorem_instances(rng: random.Random, count: int) -> tuple:
    """(data, morphisms): a mix of random data, open towers and nerves."""
    data, morphisms = [], []
    while len(data) < count:
        kind = rng.random()
        X = None
        if kind < 0.4:
            X = random_ringed_datum(rng)
        elif kind < 0.7:
            X = open_tower(rng, random_ringed(rng, rng.randint(1, 3), rings=SMALL_RINGS))
        else:
            space = random_ringed(rng, rng.randint(1, 3), rings=SMALL_RINGS)
            try:
                X = nerve_datum(open_cover(rng, space, full=rng.random() < 0.7)).datum
            except LabError:
                X = None
        if X is None:
            continue
        data.append(X)
        r = rng.random()
        if r < 0.5:
            morphisms.append(identity_datum_morphism(X))
        elif len(X.shape) > 1:
            V = X.shape.above(rng.choice(X.shape.elements))
            sub = restrict_datum(X, V)
            comps = {p: identity_morphism(X.fibers[p]) for p in V}
            morphisms.append(LaxDatumMorphism(sub, X, MonotoneMap(sub.shape, X.shape, sub.shape.elements),
                                              comps))
    return data, morphisms


def descent_covers(rng: random.Random, count: int) -> list:
    out = []
    while len(out) < count:
        if rng.random() < 0.3:
            legs = idempotent_cover(rng, rng.choice(("Z/6", "Z/2 x Z/2", "Z/2 x Z/3")))
        else:
            X = random_ringed(rng, rng.randint(1, 3))
            legs = open_cover(rng, X, full=rng.random() < 0.75)
        out.append(legs)
    return out


def pos_data_instances(rng: random.Random, count: int) -> list:
    """Data over FinPos with connected fibers and a connected shape."""
    out = []
    while len(out) < count:
        shape = random_connected_poset(rng, rng.randint(1, 3), SHAPE_NAMES)
        fibers = {}
        for p in shape.elements:
            if rng.random() < 0.4:
                P = Poset.from_covers(list("abcd"), [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
            else:
                P = random_connected_poset(rng, rng.randint(1, 4), "abcd")
            one = Poset.antichain([0])
            fibers[p] = make_cdata(FINPOS, P, {x: one for x in P.elements},
                                   {c: FINPOS.identity(one) for c in P.covers()})
        trans = {}
        for p, q in shape.covers():
            homs = enumerate_morphisms(fibers[q], fibers[p])
            trans[(p, q)] = rng.choice(homs)
        try:
            out.append(LaxDatum(shape, fibers, trans))
        except LabError:
            continue
    return out


def generate_corpus(seed: int = 0, sizes: dict = None) -> Corpus:
    sizes = dict({"lax": 200, "triples": 50, "ringed": 40, "theorem": 100, "covers": 40, "pos": 30},
                 **(sizes or {}))
    rng = random.Random(seed)
    C = Corpus(seed)
    C.lax = lax_instances(rng, sizes["lax"])
    C.triples = fiber_product_triples(rng, sizes["triples"])
    C.ringed = [random_ringed(rng, rng.randint(1, 3)) for _ in range(sizes["ringed"])]
    C.ringed_data, C.ringed_morphisms = ringed_theorem_instances(rng, sizes["theorem"])
    C.covers = descent_covers(rng, sizes["covers"])
    C.pos_data = pos_data_instances(rng, sizes["pos"])
    return C


def corpus_documents(C: Corpus) -> list:
    """``(relative path, kind, object)`` for every corpus item, in a fixed order."""
    docs = [(f"examples/{name}.json", kind, obj) for name, (kind, obj) in named_examples().items()]
    docs += [(f"lax/{i:04d}.json", "lax-instance", inst) for i, inst in enumerate(C.lax)]
    docs += [(f"triples/{i:04d}.json", "pair", t) for i, t in enumerate(C.triples)]
    docs.append(("triples/ring.json", "pair", ring_triple()))
    docs += [(f"spaces/{i:04d}.json", "space", X) for i, X in enumerate(C.ringed)]
    docs += [(f"ringed/{i:04d}.json", "datum", X) for i, X in enumerate(C.ringed_data)]
    docs += [(f"morphisms/{i:04d}.json", "datum-morphism", f) for i, f in enumerate(C.ringed_morphisms)]
    docs += [(f"covers/{i:04d}.json", "cover", c) for i, c in enumerate(C.covers)]
    docs += [(f"pos/{i:04d}.json", "datum", X) for i, X in enumerate(C.pos_data)]
    return docs


def write_corpus(C: Corpus, out) -> list:
    """Write every corpus item as a JSON document under ``out``; returns the relative paths."""
    root = Path(out)
    paths = []
    for rel, kind, obj in corpus_documents(C):
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        dump(path, kind, obj, name=rel[:-5])
        paths.append(rel)
    return paths


__all__ = ["corpus_documents", "write_corpus", "Corpus", "generate_corpus", "ring_triple", "random_poset", "random_cdata", "random_datum",
           "random_ringed", "open_cover", "idempotent_cover", "open_tower", "datum_morphisms_into"]
