"""Exact finite-field linear algebra and generation checks for GL_n(q)."""

__version__ = "0.1.0"
