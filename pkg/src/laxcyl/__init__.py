"""Verification lab for poset-indexed lax colimits of structured posets."""

__version__ = "0.1.0"
