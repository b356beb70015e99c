"""Exact Weil-algebra arithmetic, prolongation and synthetic differential forms."""
