"""Alexander modules, Novikov-Betti numbers, rank-one twisted homology and
critical points of master functions, computed from finite data.

Exact algebra runs over Q[t, t^-1] with :class:`fractions.Fraction`
coefficients; only the critical-point solver uses floating point.
"""

__version__ = "0.1.0"
