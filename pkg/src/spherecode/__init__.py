"""Optimal spherical codes: exact LP certificates, catalog constructions and
stability diagnostics for the E8 and Leech kissing configurations."""

__version__ = "0.1.0"
