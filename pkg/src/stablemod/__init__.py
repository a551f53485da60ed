"""Stable module theory over graded-local rings F_p[x_1..x_m]/I."""

__version__ = "0.1.0"
