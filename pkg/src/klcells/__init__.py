"""Exact Kazhdan-Lusztig cells of finite Coxeter groups, for weight
functions valued in arbitrary totally ordered abelian groups, together
with the rational hyperplane geometry of the parameter space."""

__version__ = "0.1.0"
