"""Numerical core: field evaluation, Riccati cross-checks, verification, analysis and grids."""
