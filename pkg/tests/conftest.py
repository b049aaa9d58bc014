from __future__ import annotations

import pytest

from jgroups import construct
from jgroups.perm import Permutation, compose


def perm_product(perms: list[Permutation]) -> Permutation:
    out = Permutation(tuple(range(perms[0].deg)))
    for p in perms:
        out = compose(out, p)
    return out


def brute_is_witness(G, k: int) -> bool:
    """Direct check of x k^(n-1) x k^(n-2) ... x k^0 = 1 for every x, on permutation objects."""
    kp = G.element(k)
    n = int(G.orders[k])
    kpows = [Permutation(tuple(range(kp.deg)))]
    for _ in range(n):
        kpows.append(compose(kpows[-1], kp))
    for xi in range(G.order):
        x = G.element(xi)
        seq = []
        for i in range(1, n + 1):
            seq += [x, kpows[n - i]]
        if not perm_product(seq).is_identity():
            return False
    return True


@pytest.fixture(scope="session")
def m372():
    return construct.metacyclic(3, 7, 2)


@pytest.fixture(scope="session")
def m394():
    return construct.metacyclic(3, 9, 4)


@pytest.fixture(scope="session")
def heis3():
    return construct.heisenberg(3)


@pytest.fixture(scope="session")
def heis5():
    return construct.heisenberg(5)


@pytest.fixture(scope="session")
def g39():
    return construct.paper_3_9_group()
