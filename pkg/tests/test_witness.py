from __future__ import annotations

import numpy as np
import pytest

from conftest import brute_is_witness
from jgroups import construct, structure, witness
from jgroups.structure import center, closure, derived_subgroup


def brute_double_cosets(G, K: set[int]) -> list[frozenset[int]]:
    seen: set[int] = set()
    out = []
    for x in range(G.order):
        if x in seen:
            continue
        dc = frozenset(G.mul(G.mul(a, x), b) for a in K for b in K)
        seen |= dc
        out.append(dc)
    return out


@pytest.fixture(scope="module")
def catalog40():
    return construct.catalog_odd_upto(40)


def test_product_identity_for_trivial_x():
    G = construct.metacyclic(3, 7, 2)
    for k in range(G.order):
        assert witness.witness_product(G, k, 0) == 0


def test_product_in_c3():
    C3 = construct.cyclic(3)
    g = 1
    assert witness.witness_product(C3, g, g) == 0


def test_double_coset_examples(m372, g39):
    C9 = construct.cyclic(9)
    K = closure(C9, [3])
    assert len(witness.double_coset_reps(C9, K)) == 9 // K.order
    K = closure(m372, [m372.handles["a"]])
    labels = witness.double_coset_labels(m372, K)
    brute = brute_double_cosets(m372, set(K.members.tolist()))
    assert len(np.unique(labels)) == len(brute)
    assert sum(len(d) for d in brute) == 21
    for d in brute:
        assert len({labels[x] for x in d}) == 1
    K = closure(g39, [g39.handles["k"]])
    labels = witness.double_coset_labels(g39, K)
    assert np.bincount(np.unique(labels, return_inverse=True)[1]).sum() == 19683


def test_double_cosets_against_brute_force(catalog40):
    for G in catalog40:
        if G.is_abelian():
            continue
        for k in range(G.order):
            K = set(G.powers(k).tolist())
            labels = witness.double_coset_labels(G, closure(G, [k]))
            brute = brute_double_cosets(G, K)
            assert len(np.unique(labels)) == len(brute)
            assert all(len({labels[x] for x in d}) == 1 for d in brute)


def test_is_witness_examples(m394, g39):
    C9 = construct.cyclic(9)
    assert witness.is_witness(C9, 1)
    assert not witness.is_witness(C9, 3)
    assert witness.is_witness(m394, m394.pow(m394.handles["a"], 2))
    assert not witness.is_witness(g39, g39.handles["k"])


def test_witness_sets_against_brute_force(catalog40):
    for G in catalog40:
        brute = [k for k in range(G.order) if brute_is_witness(G, k)]
        assert witness.witness_set(G).witnesses.tolist() == brute, G.name


def test_reduced_and_exhaustive_tests_agree(catalog40):
    for G in catalog40:
        for k in range(G.order):
            assert witness.is_witness(G, k) == witness.is_witness(G, k, exhaustive=True)


def test_variants_correspond(catalog40):
    # J1 and J3 coincide; J2 and J4 are the inverses of J3 and J1
    for G in catalog40:
        sets = {v: set(witness.variant_witness_set(G, v).tolist()) for v in witness.VARIANTS}
        inv = G.inverses
        assert sets["J1"] == sets["J3"]
        assert sets["J2"] == {int(inv[k]) for k in sets["J3"]}
        assert sets["J4"] == {int(inv[k]) for k in sets["J1"]}


def test_variant_examples(m372, m394):
    a2 = m394.pow(m394.handles["a"], 2)
    assert witness.witness_variant(m394, a2, "J1") and witness.witness_variant(m394, a2, "J3")
    for v in witness.VARIANTS:
        assert witness.variant_witness_set(m372, v).size == 0


def test_unknown_variant():
    with pytest.raises(witness.WitnessError):
        witness.is_witness(construct.cyclic(3), 1, variant="J9")


def test_witness_set_examples(heis3, heis5):
    P = construct.direct_product(construct.metacyclic(3, 7, 2), construct.cyclic(3))
    rep = witness.witness_set(P)
    assert rep.witness_count == 12 and set(P.orders[rep.witnesses].tolist()) == {21}
    rep = witness.witness_set(heis3)
    z = center(heis3).members
    g2 = derived_subgroup(heis3).members
    assert rep.witnesses.tolist() == z[z != 0].tolist() == g2[g2 != 0].tolist()
    assert witness.witness_set(heis5).witness_count == 124


def test_witness_set_is_thread_independent():
    for G in (construct.heisenberg(5), construct.metacyclic(3, 21, 4), construct.abelian((3, 9))):
        a = witness.witness_set(G, threads=1).to_json()
        b = witness.witness_set(G, threads=4).to_json()
        assert a == b


def test_is_j_group():
    assert witness.is_j_group(construct.cyclic(2)) is None
    assert witness.is_j_group(construct.metacyclic(3, 7, 2)) is None
    M = construct.metacyclic(3, 21, 4)
    k = witness.is_j_group(M)
    assert k is not None and witness.is_witness(M, k)


def test_build_f():
    C3 = construct.cyclic(3)
    f = witness.build_f(C3, 1)
    assert f.check()
    C9 = construct.cyclic(9)
    k = 1
    f = witness.build_f(C9, k)
    # f(x k^m) = x k^(m-1) x k^(m-2) ... x k^0 f(x)
    for x in range(9):
        for m in range(1, 10):
            lhs = f(C9.mul(x, C9.pow(k, m)))
            rhs = f(x)
            for i in range(m):
                rhs = C9.mul(C9.mul(x, C9.pow(k, i)), rhs)
            assert lhs == rhs
    M = construct.metacyclic(3, 21, 4)
    f = witness.build_f(M, M.handles["b"])
    assert f.check()
    assert all(f(s) == 0 for s in f.transversal) and len(f.transversal) == 3


def test_build_f_rejects_non_witness():
    with pytest.raises(witness.WitnessError, match="not a witness"):
        witness.build_f(construct.cyclic(9), 3)


def _conditions(G):
    return {c.name: c for c in witness.sufficient_conditions(G)}


def test_condition_examples(heis3, heis5, g39):
    assert _conditions(heis3)["exponent_p"].holds is True
    c = _conditions(heis5)
    assert c["class_bound_a"].holds is True
    assert set(witness.promised_set(heis5, "B(G)").tolist()) == set(range(1, 125))
    c = _conditions(g39)
    assert c["class_bound_a"].holds is False
    assert c["class_bound_b"].holds is False
    assert c["class_bound_d"].holds is False


def test_even_order_conditions():
    c = _conditions(construct.cyclic(4))
    assert not any(x.implies_j for x in c.values())


def test_big_elements():
    G = construct.abelian((3, 9))
    assert witness.big_elements(G).tolist() == [g for g in range(G.order) if G.orders[g] == 9]
    assert structure.exponent(G) == 9
