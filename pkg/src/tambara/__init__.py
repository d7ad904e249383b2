"""Equivariant algebra engine: finite G-sets, bispans, free Tambara functors."""

__version__ = "0.1.0"
