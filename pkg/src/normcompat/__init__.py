"""Exact verification of orbit, level-group and norm-relation computations
for p-adic matrix groups."""

__version__ = "0.1.0"
