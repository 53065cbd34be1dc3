"""Exact tools for the TNS property of quasitoric manifolds."""

__version__ = "0.1.0"
