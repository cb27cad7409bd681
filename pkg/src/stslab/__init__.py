"""Stabilizer codes on lattices: symmetry, dimension and thermal analysis."""

__version__ = "0.1.0"
