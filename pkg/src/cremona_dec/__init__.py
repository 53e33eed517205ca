"""Factorization of plane birational maps preserving a rational curve."""
