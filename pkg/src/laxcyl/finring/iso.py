"""Enumeration of ring homomorphisms and isomorphism search."""
from __future__ import annotations

from ..config import CAPS
from ..errors import NotAHomomorphism, SizeCapExceeded
from .ring import FinRing, RingHom


def subring_closure(R: FinRing, gens) -> set:
    closed = {0, R.one}
    frontier = list(closed | set(gens))
    closed |= set(gens)
    while frontier:
        x = frontier.pop()
        for y in list(closed):
            for z in (R.add[x][y], R.mul[x][y]):
                if z not in closed:
                    closed.add(z)
                    frontier.append(z)
    return closed


def ring_generators(R: FinRing) -> list:
    """Greedy generating set: scan elements in order, keep those not yet generated."""
    def compute():
        gens, closed = [], subring_closure(R, [])
        for a in range(R.order):
            if a not in closed:
                gens.append(a)
                closed = subring_closure(R, gens)
        return gens
    return list(R.cached("generators", compute))


def _extend(A: FinRing, B: FinRing, seed: dict):
    """Extend a partial assignment by closure; None on any conflict."""
    image = dict(seed)
    frontier = list(image)
    while frontier:
        x = frontier.pop()
        fx = image[x]
        for y, fy in list(image.items()):
            for z, fz in ((A.add[x][y], B.add[fx][fy]), (A.mul[x][y], B.mul[fx][fy])):
                known = image.get(z)
                if known is None:
                    image[z] = fz
                    frontier.append(z)
                elif known != fz:
                    return None
    return image


def _element_profile(R: FinRing, a: int) -> tuple:
    return (R.additive_order(a), R.is_unit(a), R.is_nilpotent(a), R.mul[a][a] == a)


def ring_homs(A: FinRing, B: FinRing, injective_only=False) -> list:
    """All ring maps A -> B in lexicographic order of the generator images."""
    if A.order * B.order > CAPS.max_homs:
        raise SizeCapExceeded(f"hom search {A.order}x{B.order} exceeds cap")
    if B.is_zero:
        return [RingHom(A, B, [0] * A.order, check=False)]
    if A.is_zero:
        return []
    gens = ring_generators(A)
    candidates = []
    for g in gens:
        og = A.additive_order(g)
        cand = [b for b in range(B.order) if og % B.additive_order(b) == 0]
        if A.mul[g][g] == g:
            cand = [b for b in cand if B.mul[b][b] == b]
        if A.is_unit(g):
            cand = [b for b in cand if B.is_unit(b)]
        if A.is_nilpotent(g):
            cand = [b for b in cand if B.is_nilpotent(b)]
        if injective_only:
            prof = _element_profile(A, g)
            cand = [b for b in cand if _element_profile(B, b) == prof]
        candidates.append(cand)
    out = []
    seed0 = {0: 0, A.one: B.one}

    def rec(i, seed):
        if i == len(gens):
            image = _extend(A, B, seed)
            if image is None or len(image) != A.order:
                return
            values = [image[a] for a in range(A.order)]
            if injective_only and len(set(values)) != A.order:
                return
            try:
                out.append(RingHom(A, B, values))
            except NotAHomomorphism:
                pass
            return
        for b in candidates[i]:
            nxt = dict(seed)
            if nxt.get(gens[i], b) != b:
                continue
            nxt[gens[i]] = b
            if _extend(A, B, nxt) is None:
                continue
            rec(i + 1, nxt)

    rec(0, seed0)
    return out


def first_ring_hom(A: FinRing, B: FinRing):
    homs = ring_homs(A, B)
    return homs[0] if homs else None


def unique_ring_hom(A: FinRing, B: FinRing):
    homs = ring_homs(A, B)
    return homs[0] if len(homs) == 1 else None


def find_ring_iso(A: FinRing, B: FinRing):
    """An isomorphism A -> B or None (invariants first, then backtracking)."""
    if A.order != B.order:
        return None
    if A.order > CAPS.max_ring_order:
        raise SizeCapExceeded(f"iso search on rings of order {A.order}")
    if A == B:
        return RingHom.identity(A)
    if A.invariants() != B.invariants():
        return None
    homs = ring_homs(A, B, injective_only=True)
    return homs[0] if homs else None
