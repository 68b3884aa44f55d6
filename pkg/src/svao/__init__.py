"""Exact SUSY Lambda-bracket calculus: conformal and vertex superalgebras, operadic checks, low-degree cohomology."""
