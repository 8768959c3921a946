"""Finite commutative rings, their modules and the flatness oracles."""
from .abelian import AbPresentation, AdditiveBasis, ab_normal_form, additive_basis, smith_normal_form
from .ring import (FinRing, Ideal, RingHom, SpecSet, compose_homs, generated_ideal, ideal_sum,
                   ideals_of, integers_mod, pair_into_product, prime_ideals, principal_ideal,
                   product_ring, quotient_ring, ring_preset, to_zero_ring, zero_ring)
from .iso import find_ring_iso, first_ring_hom, ring_generators, ring_homs, unique_ring_hom
from .oracles import (LocalFactor, flat_witness, ideal_flat_witness, non_free_factor, is_epi, is_faithfully_flat, is_flat,
                      is_spec_surjective, local_decomposition, local_factors, missed_primes,
                      residue_field, spec_contraction)
from .tensor import FinModule, TensorProduct, TensorRing, module_tensor, tensor_ring

__all__ = [
    "AbPresentation",
    "AdditiveBasis",
    "FinModule",
    "FinRing",
    "Ideal",
    "LocalFactor",
    "RingHom",
    "SpecSet",
    "TensorProduct",
    "TensorRing",
    "ab_normal_form",
    "additive_basis",
    "compose_homs",
    "find_ring_iso",
    "first_ring_hom",
    "flat_witness",
    "ideal_flat_witness",
    "non_free_factor",
    "generated_ideal",
    "ideal_sum",
    "ideals_of",
    "integers_mod",
    "is_epi",
    "is_faithfully_flat",
    "is_flat",
    "is_spec_surjective",
    "local_decomposition",
    "local_factors",
    "missed_primes",
    "module_tensor",
    "pair_into_product",
    "prime_ideals",
    "principal_ideal",
    "product_ring",
    "quotient_ring",
    "residue_field",
    "ring_generators",
    "ring_homs",
    "ring_preset",
    "smith_normal_form",
    "spec_contraction",
    "tensor_ring",
    "to_zero_ring",
    "unique_ring_hom",
    "zero_ring",
]
