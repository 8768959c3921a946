"""Element identifiers.

Points are interned strings in user input; constructions produce nested
tuples (disjoint unions, fibered products) and frozensets (nerve shapes).
``id_key`` gives the canonical lexicographic order used everywhere.
"""
from __future__ import annotations


def id_key(v):
    if isinstance(v, str):
        return (0, v)
    if isinstance(v, bool):
        return (1, int(v))
    if isinstance(v, int):
        return (1, v)
    if isinstance(v, tuple):
        return (2, tuple(id_key(a) for a in v))
    if isinstance(v, frozenset):
        return (3, tuple(sorted(id_key(a) for a in v)))
    raise TypeError(f"unsupported element id {v!r}")


def sort_ids(values):
    return sorted(values, key=id_key)


def label(v) -> str:
    """Flat string form of an id, used for JSON output."""
    if isinstance(v, str):
        return v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, tuple):
        return "(" + ",".join(label(a) for a in v) + ")"
    if isinstance(v, frozenset):
        return "{" + ",".join(label(a) for a in sort_ids(v)) + "}"
    raise TypeError(f"unsupported element id {v!r}")
