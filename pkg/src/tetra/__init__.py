"""Exact verification of tetrahedron-type identities for R-matrices and R-correspondences."""

__version__ = "0.1.0"
