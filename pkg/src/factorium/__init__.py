"""Invariants of von Neumann algebras of compact quantum groups built from
infinite products of q-deformed blocks."""

__version__ = "0.1.0"
