"""Desk-scale computational toolkit for rank-2 logarithmic connections on
elliptic curves: Fuchsian systems with apparent singularities, the eigenspace
correspondence with S^n, parabolic-stability combinatorics, symplectic-form
identities and the apparent map, all backed by exact function-field and
truncated-series arithmetic."""

__version__ = "0.1.0"
