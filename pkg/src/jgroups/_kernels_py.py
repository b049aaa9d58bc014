"""Numpy versions of the compiled kernels, used when the extension is missing."""
from __future__ import annotations

import numpy as np


def product_rows(xs: np.ndarray, kpow: np.ndarray, exps: np.ndarray, x_first: bool) -> np.ndarray:
    m, deg = xs.shape
    pos = np.broadcast_to(np.arange(deg, dtype=xs.dtype), (m, deg)).copy()
    for e in exps:
        if x_first:
            pos = np.take_along_axis(xs, pos, axis=1)
            pos = kpow[e][pos]
        else:
            pos = kpow[e][pos]
            pos = np.take_along_axis(xs, pos, axis=1)
    return pos


def product_mask(xs: np.ndarray, kpow: np.ndarray, exps: np.ndarray, x_first: bool) -> np.ndarray:
    rows = product_rows(xs, kpow, exps, x_first)
    return np.all(rows == np.arange(xs.shape[1]), axis=1).astype(np.uint8)


def table_product_ids(table: np.ndarray, xs: np.ndarray, kids: np.ndarray, exps: np.ndarray, x_first: bool) -> np.ndarray:
    acc = np.zeros(len(xs), dtype=np.int64)
    for e in exps:
        k = kids[e]
        if x_first:
            acc = table[acc, xs]
            acc = table[acc, k]
        else:
            acc = table[acc, k]
            acc = table[acc, xs]
    return acc.astype(np.int64)
