"""lvlab - Numerical laboratory for large value problems of matrices."""

__version__ = "0.1.0"
