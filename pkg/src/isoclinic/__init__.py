"""Exact computer algebra for canonical forms of formal connections,
opers, toral K-types and the classical local Hitchin map."""

__version__ = "0.1.0"
