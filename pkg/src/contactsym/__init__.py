"""Exact contact-symmetry analysis of the two-particle Schrödinger equation."""

__version__ = "0.1.0"
