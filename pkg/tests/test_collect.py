from __future__ import annotations

import csv
import json
from math import comb
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from jgroups import collect
from jgroups.collect import (
    TruncatedAlgebraElement,
    algebra_eval,
    coefficient_table,
    collect_wn,
    poly_eval,
    verify_collection,
    wn_word,
)

DATA = Path(__file__).parent / "data"


def golden_rows() -> list[dict]:
    with open(DATA / "table6_reference.csv", newline="") as fh:
        return list(csv.DictReader(fh))


def test_table_matches_golden_file():
    assert collect.table_csv(6) == (DATA / "table6_reference.csv").read_text()


def test_table_rows_field_by_field():
    rows = coefficient_table(6)
    gold = golden_rows()
    assert len(rows) == len(gold) == 23
    for row, g in zip(rows, gold):
        assert str(row.commutator) == g["R_i"]
        assert row.load == int(g["m_i"])
        coeffs = [int(g[f"a_i{j}"]) for j in range(1, 12) if g[f"a_i{j}"] != ""]
        assert list(row.poly.coeffs) == coeffs


def test_table_examples():
    rows = coefficient_table(6)
    assert rows[0].poly.coeffs == (1,)
    assert rows[2].poly.coeffs == (0, 1, 2)
    assert str(rows[18].commutator) == "[k,x,k,k,k,k]" and rows[18].load == 11
    assert rows[18].poly.coeffs == (0, 0, 0, 18, 912, 9015, 35946, 72030, 77280, 42525, 9450)
    assert all(a >= 0 for r in rows for a in r.poly.coeffs)


def test_table_polynomials_reproduce_collection():
    # the polynomial of row i evaluated at n equals the exponent of R_i in w_n
    rows = coefficient_table(5)
    for n in range(0, 15):
        exps = collect.collect(wn_word(n), 5).exponents
        assert [poly_eval(r.poly, n) for r in rows] == list(exps)


def test_table_bounds():
    assert [str(r.commutator) for r in coefficient_table(1)] == ["x", "k"]
    with pytest.raises(collect.CollectionError):
        coefficient_table(9)


def test_table_json_parses():
    doc = json.loads(collect.table_json(3))
    assert doc["c"] == 3
    assert doc["rows"][2]["coefficients"] == [0, 1, 2]


def test_hall_basis_sizes():
    # Witt's formula for the free Lie algebra on two generators
    def witt(n):
        mu = {1: 1, 2: -1, 3: -1, 4: 0, 5: -1, 6: 1, 7: -1, 8: 0}
        return sum(mu[d] * 2 ** (n // d) for d in mu if n % d == 0) // n
    for c in range(1, 8):
        assert len(collect.hall_basis(c).commutators) == sum(witt(w) for w in range(1, c + 1))


def test_poly_eval():
    assert poly_eval((1,), 7) == 7
    assert poly_eval((0, 1, 2), 3) == 5
    row8 = coefficient_table(6)[7]
    value = sum(a * comb(9, j) for j, a in enumerate(row8.poly.coeffs, start=1))
    assert poly_eval(row8.poly, 9) == value and value % 3 == 0


def test_collect_examples():
    cw = collect.collect("xkx", 2)
    assert [(str(r), e) for r, e in cw.nonzero()] == [("x", 2), ("k", 1), ("[k,x]", 1)]
    cw = collect.collect("k", 6)
    assert [(str(r), e) for r, e in cw.nonzero()] == [("k", 1)]
    cw = collect.collect("xk^2xkx", 3)
    assert list(cw.exponents) == [3, 3, 5, 2, 6]


def test_wn_word():
    assert wn_word(0) == ()
    assert collect.format_word(wn_word(1)) == "x"
    assert collect.format_word(wn_word(3)) == "x k k x k x"


def test_algebra_examples():
    assert algebra_eval("xk", 2).coeffs == {(): 1, (0,): 1, (1,): 1, (0, 1): 1}
    assert algebra_eval("xX", 4) == TruncatedAlgebraElement.one(4)
    assert algebra_eval("X", 2).coeffs == {(): 1, (0,): -1, (0, 0): 1}


def test_verify_examples():
    assert verify_collection(wn_word(2), 2)
    assert verify_collection("kx", 1)
    for j in range(1, 12):
        assert verify_collection(wn_word(j), 6, collect_wn(j, 6))


def test_recursive_wn_matches_direct_collection():
    for n in range(1, 8):
        assert collect_wn(n, 5).exponents == collect.collect(wn_word(n), 5).exponents


def test_literal_collection_matches_pc():
    for c in (3, 4, 5):
        for n in range(1, 6):
            assert collect.hall_collect(wn_word(n), c).exponents == list(collect.collect(wn_word(n), c).exponents)


def test_literal_labels_count():
    rows = coefficient_table(4)
    for n in range(1, 6):
        hc = collect.hall_collect_wn(n, 4)
        for i in range(5):
            assert len(hc.labels[i]) == poly_eval(rows[i].poly, n)


def test_divisibility_examples():
    rep = collect.theorem_divisibility_report(3, 2, 6)
    assert rep.all_divide
    rows = coefficient_table(6)
    a9 = {a for r in rows if len(r.poly.coeffs) >= 9 for a in [r.poly.coeffs[8]] if a}
    assert a9 == {840, 14700, 77280, 3360, 60480, 2520}
    assert all(a % 3 == 0 for a in a9)
    assert collect.theorem_divisibility_report(5, 1, 2).all_divide


def test_divisibility_class_seven_survivors():
    rep = collect.theorem_divisibility_report(3, 2, 7)
    assert not rep.all_divide
    surv = rep.survivors(3)
    assert [v for _, v in surv] == [1, 2, 1, 2, 1]
    assert surv[0][0] == "[k,x,k,k,k,k,k]"


def test_divisibility_errors():
    with pytest.raises(collect.CollectionError):
        collect.theorem_divisibility_report(4, 1, 3)
    with pytest.raises(collect.CollectionError):
        collect.theorem_divisibility_report(3, 1, 8)


def test_parse_word_errors():
    with pytest.raises(collect.CollectionError):
        collect.parse_word("xyz")
    with pytest.raises(collect.CollectionError):
        collect.collect("x", 0)


words = st.lists(st.tuples(st.integers(0, 1), st.integers(-3, 3).filter(bool)), max_size=8)


@settings(max_examples=60, deadline=None)
@given(words, st.integers(1, 5))
def test_pc_collection_agrees_with_algebra(word, c):
    assert verify_collection(word, c)


@settings(max_examples=40, deadline=None)
@given(words, words, st.integers(1, 4))
def test_collection_is_multiplicative(u, v, c):
    pc = collect.presentation(c)
    a = collect.collect(u, c).exponents
    b = collect.collect(v, c).exponents
    assert tuple(pc.mul(a, b)) == tuple(collect.collect(u + v, c).exponents)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 1), min_size=1, max_size=7), st.integers(2, 4))
def test_literal_collection_agrees_on_positive_words(letters, c):
    word = [(a, 1) for a in letters]
    assert collect.collect(word, c, method="hall").exponents == collect.collect(word, c).exponents
