"""Analysis and verification of bent functions and their secondary constructions."""

__version__ = "0.1.0"
