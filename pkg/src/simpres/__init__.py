"""Exact computation of (secondary) Hochschild homology and cohomology through simplicial resolutions."""

__version__ = "0.1.0"
