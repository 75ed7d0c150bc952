"""Exact n-descent on elliptic curves with rational n-torsion."""

__version__ = "0.1.0"
