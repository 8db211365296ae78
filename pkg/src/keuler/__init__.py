"""Exact point-level computations of K-theoretic Euler classes of two-term
complexes with a closed form, and the Witten top Chern class they realize."""

__version__ = "0.1.0"
