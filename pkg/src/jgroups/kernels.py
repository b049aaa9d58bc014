"""Kernel selection: the compiled extension when importable, numpy otherwise.

Set ``JGROUPS_PURE=1`` to force the numpy path.
"""
from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

BACKEND = "numpy"
_impl = _kernels_py
if os.environ.get("JGROUPS_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "cython"


def _prep(xs, kpow, exps):
    xs = np.ascontiguousarray(xs, dtype=np.int32)
    kpow = np.ascontiguousarray(kpow, dtype=np.int32)
    exps = np.ascontiguousarray(exps, dtype=np.int_)
    return xs, kpow, exps


def product_mask(xs, kpow, exps, x_first: bool = True, impl=None) -> np.ndarray:
    """Boolean mask of rows whose product ``prod_t (x, k^exps[t])`` is trivial."""
    impl = impl or _impl
    xs, kpow, exps = _prep(xs, kpow, exps)
    if xs.shape[0] == 0:
        return np.zeros(0, dtype=bool)
    return np.asarray(impl.product_mask(xs, kpow, exps, bool(x_first))).astype(bool)


def product_rows(xs, kpow, exps, x_first: bool = True, impl=None) -> np.ndarray:
    impl = impl or _impl
    xs, kpow, exps = _prep(xs, kpow, exps)
    if xs.shape[0] == 0:
        return np.zeros((0, xs.shape[1]), dtype=np.int32)
    return np.asarray(impl.product_rows(xs, kpow, exps, bool(x_first)))


def implementations() -> dict:
    """Every available backend by name (for benchmarks and parity tests)."""
    out = {"numpy": _kernels_py}
    try:
        from . import _kernels as compiled
    except ImportError:
        pass
    else:
        out["cython"] = compiled
    return out


def table_product_ids(table, xs, kids, exps, x_first: bool = True, impl=None) -> np.ndarray:
    """Product ids walked through a Cayley table (identity is id 0)."""
    impl = impl or _impl
    table = np.ascontiguousarray(table, dtype=np.int32)
    xs = np.ascontiguousarray(xs, dtype=np.int_)
    kids = np.ascontiguousarray(kids, dtype=np.int_)
    exps = np.ascontiguousarray(exps, dtype=np.int_)
    if xs.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    return np.asarray(impl.table_product_ids(table, xs, kids, exps, bool(x_first)))
