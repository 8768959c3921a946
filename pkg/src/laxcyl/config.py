"""Global size caps.

Every brute-force routine reads its limits from :data:`CAPS`.  The CLI
``--caps`` flag and :func:`use_caps` override them.
"""
from __future__ import annotations

import contextlib
import dataclasses
from dataclasses import dataclass


@dataclass
class Caps:
    # |Q|^|P| bound for monotone map enumeration (8 points into 8 points).
    max_map_bound: int = 8 ** 8
    max_ring_order: int = 16
    max_tensor_generators: int = 64
    max_tensor_order: int = 256
    max_product_order: int = 4096
    max_homs: int = 20000
    max_group_order: int = 64

    def update(self, **kwargs) -> None:
        names = {f.name for f in dataclasses.fields(self)}
        for key, value in kwargs.items():
            if key not in names:
                raise KeyError(f"unknown cap {key!r}")
            if not isinstance(value, int) or value <= 0:
                raise ValueError(f"cap {key} must be a positive integer")
            setattr(self, key, value)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)


CAPS = Caps()


@contextlib.contextmanager
def use_caps(**kwargs):
    saved = CAPS.as_dict()
    CAPS.update(**kwargs)
    try:
        yield CAPS
    finally:
        CAPS.update(**saved)
