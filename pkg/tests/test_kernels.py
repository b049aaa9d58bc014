from __future__ import annotations

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from jgroups import construct, kernels, witness

IMPLS = kernels.implementations()


def test_backend_is_known():
    assert kernels.BACKEND in IMPLS
    assert "numpy" in IMPLS


@pytest.mark.parametrize("x_first", [True, False])
@pytest.mark.parametrize("name", sorted(IMPLS))
def test_backends_agree(name, x_first):
    G = construct.direct_product(construct.metacyclic(3, 9, 4), construct.cyclic(3))
    for k in range(0, G.order, 7):
        n = int(G.orders[k])
        kp = witness._kpow_rows(G, k)
        exps = np.arange(n - 1, -1, -1)
        xs = G.perms
        ref = kernels.product_rows(xs, kp, exps, x_first, impl=IMPLS["numpy"])
        got = kernels.product_rows(xs, kp, exps, x_first, impl=IMPLS[name])
        assert np.array_equal(ref, got)
        mask = kernels.product_mask(xs, kp, exps, x_first, impl=IMPLS[name])
        assert np.array_equal(mask, np.all(ref == np.arange(G.degree), axis=1))
        ids = kernels.table_product_ids(G.table, np.arange(G.order), G.powers(k), exps, x_first, impl=IMPLS[name])
        assert np.array_equal(ids, G.lookup(ref))


def test_kernels_match_direct_product():
    G = construct.metacyclic(3, 7, 2)
    k, x = 1, 2
    n = int(G.orders[k])
    acc = 0
    for i in range(1, n + 1):
        acc = G.mul(G.mul(acc, x), G.pow(k, n - i))
    assert witness.witness_product(G, k, x) == acc


def test_empty_input():
    G = construct.cyclic(3)
    kp = witness._kpow_rows(G, 1)
    assert kernels.product_mask(np.zeros((0, 3), dtype=np.int32), kp, np.arange(3)).size == 0


def test_pure_override_selects_numpy():
    env = dict(os.environ, JGROUPS_PURE="1")
    out = subprocess.run([sys.executable, "-m", "jgroups", "witness", "heis:3"], env=env,
                         capture_output=True, text=True, check=True).stdout
    rep = json.loads(out)
    assert rep["stats"]["backend"] == "numpy" and rep["witness_count"] == 2
