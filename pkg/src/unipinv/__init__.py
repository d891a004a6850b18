"""Exact constants of nilpotent linear derivations and invariants of unipotent matrices."""
