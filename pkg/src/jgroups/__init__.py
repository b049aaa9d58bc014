"""Exact tools for J-groups: finite groups with an element k and a map f
satisfying f(xk) = x f(x) for every x.

Modules: ``perm`` (permutation groups), ``structure`` (subgroups, series,
predicates), ``witness`` (witness search), ``construct`` (group families and
catalogs), ``collect`` (commutator collection and coefficient tables),
``numth`` (number theory helpers) and ``cli``.
"""
from __future__ import annotations

__version__ = "0.1.0"
