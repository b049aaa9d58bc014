from __future__ import annotations

from collections import Counter
from math import gcd

import numpy as np
import pytest

from jgroups import construct, structure, witness
from jgroups.perm import Permutation

# number of groups of each odd order below 64 (standard small-group counts)
GROUP_COUNTS = {9: 2, 21: 2, 25: 2, 27: 5, 39: 2, 45: 2, 49: 2, 55: 2, 57: 2, 63: 4}


def affine_element(r: int, s: int, alpha: int, i: int, j: int) -> Permutation:
    """a^i b^j built directly: x -> alpha^i x + j on Z_s, y -> y + i on Z_r."""
    m = pow(alpha, i, s)
    return Permutation(tuple((m * x + j) % s for x in range(s)) + tuple(s + (y + i) % r for y in range(r)))


def test_cyclic():
    assert construct.cyclic(1).order == 1
    C9 = construct.cyclic(9)
    assert structure.exponent(C9) == 9
    assert witness.witness_set(C9).witnesses.size == 6
    assert witness.witness_set(construct.cyclic(21)).witnesses.size == 12


def test_direct_products():
    P = construct.direct_product(construct.cyclic(3), construct.cyclic(3))
    assert P.order == 9 and witness.witness_set(P).witnesses.size == 8
    P = construct.direct_product(construct.metacyclic(3, 7, 2), construct.cyclic(3))
    rep = witness.witness_set(P)
    assert P.order == 63 and rep.witnesses.size == 12
    P = construct.direct_product(construct.cyclic(9), construct.cyclic(9))
    assert witness.witness_set(P).witnesses.size > 36


def test_direct_product_projections():
    G, H = construct.cyclic(3), construct.metacyclic(3, 7, 2)
    D = construct.direct_product_data(G, H)
    for a in range(G.order):
        for b in range(H.order):
            g = D.pair_id(a, b)
            assert D.proj_first[g] == a and D.proj_second[g] == b


@pytest.mark.parametrize("r,s,alpha", [(r, s, a) for r in (3, 5, 9) for s in range(3, 200 // r + 1, 2)
                                       for a in range(2, s) if gcd(a, s) == 1 and pow(a, r, s) == 1
                                       and r * s <= 200])
def test_metacyclic_multiplication_rule(r, s, alpha):
    G = construct.metacyclic(r, s, alpha)
    ids = {(i, j): G.id_of(affine_element(r, s, alpha, i, j)) for i in range(r) for j in range(s)}
    assert len(set(ids.values())) == r * s
    keys = list(ids)
    right = np.array([ids[k] for k in keys])
    for i1, j1 in keys:
        expect = [ids[((i1 + i2) % r, (j1 * pow(alpha, i2, s) + j2) % s)] for i2, j2 in keys]
        assert np.array_equal(G.mul(ids[i1, j1], right), expect)


def test_metacyclic_examples():
    M = construct.metacyclic(3, 7, 2)
    assert M.order == 21 and witness.is_j_group(M) is None
    M = construct.metacyclic(3, 9, 4)
    a2 = M.pow(M.handles["a"], 2)
    assert M.order == 27 and M.orders[a2] == 3 and witness.is_witness(M, a2)
    M = construct.metacyclic(3, 21, 4)
    assert witness.is_witness(M, M.handles["b"])


def test_metacyclic_rejects_bad_spec():
    with pytest.raises(construct.ConstructError, match="alpha"):
        construct.metacyclic(3, 7, 3)


def test_heisenberg():
    for p in (3, 5):
        H = construct.heisenberg(p)
        s = structure.lower_central_series(H)
        assert H.order == p ** 3 and structure.exponent(H) == p and s.nilpotency_class == 2
    with pytest.raises(construct.ConstructError):
        construct.heisenberg(4)


def test_3_9_group(g39):
    assert g39.order == 19683
    assert g39.orders[g39.handles["k"]] == 9


def test_catalog_counts():
    cat = construct.catalog_odd_upto(64)
    counts = Counter(G.order for G in cat)
    for n in range(1, 64, 2):
        assert counts[n] == GROUP_COUNTS.get(n, 1), n
    assert sorted(G.name for G in cat if G.order == 63) == sorted(["C63", "C3xC21", "M(3,7,2)xC3", "M(9,7,2)"])
    assert Counter(G.order for G in construct.catalog_odd_upto(22))[21] == 2
    assert Counter(G.order for G in construct.catalog_odd_upto(28))[27] == 5


def test_catalog_fingerprints_distinct():
    cat = construct.catalog_odd_upto(64)
    assert len({construct.fingerprint(G) for G in cat}) == len(cat)


def test_catalog_bound():
    with pytest.raises(construct.ConstructError):
        construct.catalog_odd_upto(201)


def test_abelian_invariants():
    assert construct.abelian_invariants(construct.abelian((3, 9))) == construct.abelian_invariants(construct.abelian((9, 3)))
    assert len(construct.abelian_invariant_lists(27)) == 3


@pytest.mark.parametrize("text,order", [
    ("cyclic:9", 9), ("meta:3,7,2", 21), ("heis:3", 27), ("abelian:3,3", 9),
    ("prod:(meta:3,7,2)x(cyclic:3)", 63), ("prod:(cyclic:3)x(cyclic:5)x(cyclic:7)", 105),
])
def test_parse_group_spec(text, order):
    assert construct.parse_group_spec(text).order == order


def test_parse_perm_file(tmp_path):
    f = tmp_path / "g.cycles"
    f.write_text("# two generators\n(1,2,3)\n(4,5)\n")
    assert construct.parse_group_spec(f"perm:@{f}").order == 6


@pytest.mark.parametrize("text", ["bogus:3", "cyclic", "meta:3,7", "prod:(cyclic:3)", "prod:(cyclic:3)x(cyclic:3",
                                  "perm:/nofile", "paper39:1"])
def test_parse_errors(text):
    with pytest.raises(construct.ConstructError):
        construct.parse_group_spec(text)


def test_cap_enforced():
    with pytest.raises(ValueError, match="too large"):
        construct.parse_group_spec("cyclic:100", cap=50)
