"""Flatness, epimorphism and faithful-flatness oracles; local factors."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from ..errors import ShapeMismatch, SizeCapExceeded
from .ring import (FinRing, Ideal, RingHom, SpecSet, ideals_of, prime_ideals,
                   primitive_idempotents, principal_ideal, product_ring, quotient_ring)
from .tensor import FinModule, TensorProduct, tensor_comparison_injective


def _subgroup(S: FinRing, gens) -> set:
    """Additive subgroup of S generated by ``gens``."""
    H = {S.zero}
    for g in gens:
        if g in H:
            continue
        multiples, k = [], S.zero
        while True:
            multiples.append(k)
            k = S.add[k][g]
            if k == S.zero:
                break
        H = {S.add[h][m] for h in H for m in multiples}
    return H


@lru_cache(maxsize=4096)
def non_free_factor(f: RingHom):
    """Prime P of the source whose local factor sees a non-free piece of S, else None.

    R splits as a product of local rings e R.  The summand f(e) S is flat over
    e R exactly when it is free, and by Nakayama that happens exactly when
    |f(e) S| = |e R| ** r with |k| ** r = |f(e) S / m f(e) S|.
    """
    R, S = f.source, f.target
    for lf in local_factors(R):
        e = f.values[lf.idempotent]
        M = sorted({S.mul[e][s] for s in range(S.order)})
        A = lf.ring.order
        maximal = {R.mul[lf.idempotent][a] for a in lf.prime.members}
        mM = _subgroup(S, sorted({S.mul[f.values[a]][s] for a in maximal for s in M}))
        k = A // len(maximal)
        quot = len(M) // len(mM)
        r, acc = 0, 1
        while acc < quot:
            acc *= k
            r += 1
        if acc != quot or A ** r != len(M):
            return lf.prime
    return None


@lru_cache(maxsize=4096)
def ideal_flat_witness(f: RingHom):
    """First ideal I of the source with I ⊗ S -> S not injective, else None."""
    R, S = f.source, f.target
    along = FinModule.along(f)
    for I in ideals_of(R):
        if len(I) == 1:
            continue
        T = TensorProduct(FinModule.of_ideal(I), along)
        members = I.sorted_members()
        ok, _ = tensor_comparison_injective(T, S, lambda i, s: S.mul[f.values[members[i]]][s])
        if not ok:
            return I
    return None


def flat_witness(f: RingHom):
    """None when f is flat; otherwise an ideal I with I ⊗ S -> S not injective when one
    is found within the size caps, and else the prime of a non-free local factor."""
    P = non_free_factor(f)
    if P is None:
        return None
    try:
        I = ideal_flat_witness(f)
    except SizeCapExceeded:
        I = None
    return I if I is not None else P


def is_flat(f: RingHom) -> bool:
    return non_free_factor(f) is None


@lru_cache(maxsize=4096)
def is_epi(f: RingHom) -> bool:
    """Multiplication S ⊗_R S -> S is bijective (it is always onto)."""
    along = FinModule.along(f)
    T = TensorProduct(along, along)
    return T.order == f.target.order


def spec_contraction(f: RingHom) -> dict:
    """Prime q of the target -> its preimage, a prime of the source."""
    R = f.source
    source_primes = prime_ideals(R)
    out = {}
    for q in prime_ideals(f.target):
        p = Ideal(R, frozenset(a for a in range(R.order) if f.values[a] in q.members))
        if p not in source_primes:
            raise AssertionError("contraction of a prime is not prime")
        out[q] = p
    return out


def missed_primes(f: RingHom) -> list:
    hit = set(spec_contraction(f).values())
    return [p for p in prime_ideals(f.source) if p not in hit]


def is_spec_surjective(f: RingHom) -> bool:
    return not missed_primes(f)


def is_faithfully_flat(f: RingHom) -> bool:
    return is_flat(f) and is_spec_surjective(f)


def is_faithful_module_functor(f: RingHom, modules) -> bool:
    """Module-side check: N ⊗_R S = 0 forces N = 0 for each N in ``modules``."""
    along = FinModule.along(f)
    for N in modules:
        if N.ring != f.source:
            raise ShapeMismatch("module over the wrong ring")
        if N.order > 1 and TensorProduct(N, along).order == 1:
            return False
    return True


@dataclass(frozen=True)
class LocalFactor:
    prime: Ideal
    idempotent: int
    ring: FinRing
    projection: RingHom


def local_factors(R: FinRing) -> list:
    """One local factor per prime, in the order of ``prime_ideals(R)``."""
    def compute():
        by_prime = {}
        for e in primitive_idempotents(R):
            P = Ideal(R, frozenset(x for x in range(R.order) if R.is_nilpotent(R.mul[x][e])))
            Q, proj = quotient_ring(R, principal_ideal(R, R.sub(R.one, e)))
            by_prime[P] = LocalFactor(P, e, Q, proj)
        return [by_prime[P] for P in prime_ideals(R)]
    return list(R.cached("local_factors", compute))


def local_decomposition(R: FinRing):
    """``(product ring, R -> product)`` with the map checked bijective."""
    factors = local_factors(R)
    P, _ = product_ring([lf.ring for lf in factors])
    values = [P.element_of(tuple(lf.projection.values[a] for lf in factors)) if factors else 0
              for a in range(R.order)]
    h = RingHom(R, P, values, check=False)
    if sorted(values) != list(range(P.order)):
        raise AssertionError("local decomposition is not bijective")
    return P, h


def local_ring_at(R: FinRing, P: Ideal) -> LocalFactor:
    for lf in local_factors(R):
        if lf.prime == P:
            return lf
    raise KeyError("not a prime of this ring")


def residue_field(R: FinRing, P: Ideal):
    return quotient_ring(R, P)


def spec_set(R: FinRing) -> SpecSet:
    return prime_ideals(R)
