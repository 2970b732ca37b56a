"""Inclusion identification for convex bodies via projective positions and mixed volumes."""
__version__ = "0.1.0"
