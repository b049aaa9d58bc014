"""End-to-end self checks, one per acceptance criterion.

Each check returns a ``CheckResult``; ``run_checks`` runs them in order.  The
CLI exposes this as ``--check-paper`` and the acceptance test drives it.
"""
from __future__ import annotations

import itertools
import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import collect, construct, numth, structure, witness
from .perm import Group

# Reference coefficient table for c = 6: (commutator, load, coefficients)
REFERENCE_TABLE6 = (
    ("x", 1, (1,)),
    ("k", 2, (0, 1)),
    ("[k,x]", 3, (0, 1, 2)),
    ("[k,x,x]", 4, (0, 0, 2, 3)),
    ("[k,x,k]", 5, (0, 0, 6, 18, 12)),
    ("[k,x,x,x]", 5, (0, 0, 0, 3, 4)),
    ("[k,x,x,k]", 6, (0, 0, 3, 27, 54, 30)),
    ("[k,x,k,k]", 7, (0, 0, 2, 51, 184, 225, 90)),
    ("[k,x,x,x,x]", 6, (0, 0, 0, 0, 4, 5)),
    ("[k,x,x,x,k]", 7, (0, 0, 0, 12, 72, 120, 60)),
    ("[k,x,x,k,k]", 8, (0, 0, 1, 54, 378, 910, 900, 315)),
    ("[k,x,k,k,k]", 9, (0, 0, 0, 45, 600, 2325, 3870, 2940, 840)),
    ("[k,x,x,[k,x]]", 7, (0, 0, 4, 63, 220, 280, 120)),
    ("[k,x,k,[k,x]]", 8, (0, 0, 17, 291, 1394, 2800, 2520, 840)),
    ("[k,x,x,x,x,x]", 7, (0, 0, 0, 0, 0, 5, 6)),
    ("[k,x,x,x,x,k]", 8, (0, 0, 0, 0, 30, 150, 225, 105)),
    ("[k,x,x,x,k,k]", 9, (0, 0, 0, 19, 324, 1540, 3020, 2625, 840)),
    ("[k,x,x,k,k,k]", 10, (0, 0, 0, 45, 990, 6150, 16650, 22365, 14700, 3780)),
    ("[k,x,k,k,k,k]", 11, (0, 0, 0, 18, 912, 9015, 35946, 72030, 77280, 42525, 9450)),
    ("[k,x,x,x,[k,x]]", 8, (0, 0, 0, 24, 228, 645, 720, 280)),
    ("[k,x,x,k,[k,x]]", 9, (0, 0, 7, 297, 2610, 9010, 14670, 11340, 3360)),
    ("[k,x,k,k,[k,x]]", 10, (0, 0, 7, 555, 6898, 33115, 77970, 96565, 60480, 15120)),
    ("[k,x,k,[k,x,x]]", 9, (0, 0, 10, 264, 2004, 6640, 10770, 8400, 2520)),
)

NON_J_ORDERS_BELOW_64 = (21, 39, 55, 57, 63)


@dataclass
class CheckResult:
    criterion: int
    title: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    failures: list = field(default_factory=list)

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.criterion}. {self.title} ({self.seconds:.1f}s) {self.detail}".rstrip()


def _timed(criterion: int, title: str, fn: Callable[[], tuple[bool, str, list]]) -> CheckResult:
    t0 = time.perf_counter()
    try:
        ok, detail, failures = fn()
    except Exception as exc:  # a crash is a failed check, not an aborted run
        ok, detail, failures = False, f"error: {exc!r}", [repr(exc)]
    return CheckResult(criterion, title, ok, detail, time.perf_counter() - t0, failures)


# ------------------------------------------------------------------ criteria


def check_table() -> tuple[bool, str, list]:
    rows = collect.coefficient_table(6)
    got = [(str(r.commutator), r.load, r.poly.coeffs) for r in rows]
    bad = [(i + 1, g, e) for i, (g, e) in enumerate(itertools.zip_longest(got, REFERENCE_TABLE6)) if g != e]
    return not bad, f"{len(got)} rows, {len(bad)} mismatches", bad


def check_oracle() -> tuple[bool, str, list]:
    bad = [j for j in range(1, 12) if not collect.verify_collection(collect.wn_word(j), 6, collect.collect_wn(j, 6))]
    return not bad, "w_1..w_11 at c=6", bad


def survey_records(bound: int, threads: int = 1, controls: bool = True) -> list[dict]:
    groups = [(G, False) for G in construct.catalog_odd_upto(bound)]
    if controls:
        groups += [(G, True) for G in construct.even_controls() if G.order < bound]
    out = []
    for G, is_control in groups:
        rep = witness.witness_set(G, threads=threads)
        series = structure.lower_central_series(G)
        out.append({
            "group": G.name,
            "order": G.order,
            "control": is_control,
            "class": series.nilpotency_class if series.nilpotent else "not nilpotent",
            "exponent": rep.exponent,
            "is_j": rep.is_j_group,
            "witness_count": rep.witness_count,
            "big_count": rep.big_count,
            "witnesses_are_subset_of_big": rep.witnesses_subset_of_big,
            "conditions": [c.to_json() for c in witness.sufficient_conditions(G)],
        })
    return out


def check_survey() -> tuple[bool, str, list]:
    recs = survey_records(64)
    odd_non_j = sorted(r["order"] for r in recs if not r["control"] and not r["is_j"])
    controls = [r for r in recs if r["control"]]
    ok = odd_non_j == list(NON_J_ORDERS_BELOW_64) and controls and all(not r["is_j"] for r in controls)
    return bool(ok), f"non-J odd orders {odd_non_j}; {len(controls)} even controls non-J", [] if ok else odd_non_j


def check_m372_c3() -> tuple[bool, str, list]:
    G = construct.direct_product(construct.metacyclic(3, 7, 2), construct.cyclic(3))
    rep = witness.witness_set(G)
    of21 = np.flatnonzero(G.orders == 21)
    ok = G.order == 63 and rep.is_j_group and np.array_equal(rep.witnesses, of21) and len(of21) == 12
    return bool(ok), f"|W|={rep.witness_count}", []


def check_heisenberg() -> tuple[bool, str, list]:
    H3 = construct.heisenberg(3)
    W3 = witness.witness_set(H3).witnesses
    Z = structure.center(H3).members
    g2 = structure.gamma(H3, 2).members
    ok3 = np.array_equal(W3, Z[Z != 0]) and np.array_equal(W3, g2[g2 != 0]) and len(W3) == 2
    H5 = construct.heisenberg(5)
    W5 = witness.witness_set(H5).witnesses
    ok5 = np.array_equal(W5, np.arange(1, 125))
    return bool(ok3 and ok5), f"|W(H3)|={len(W3)}, |W(H5)|={len(W5)}", []


def check_nonbig() -> tuple[bool, str, list]:
    G = construct.metacyclic(3, 9, 4)
    a2 = G.pow(G.handles["a"], 2)
    ok = structure.exponent(G) == 9 and int(G.orders[a2]) == 3 and witness.is_witness(G, a2)
    return bool(ok), f"exp={structure.exponent(G)}, |a^2|={int(G.orders[a2])}", []


def check_3_9(threads: int = 1) -> tuple[bool, str, list]:
    G = construct.paper_3_9_group()
    series = structure.lower_central_series(G)
    rep = witness.witness_set(G, threads=threads)
    exp_d = structure.exponent(G, structure.derived_subgroup(G))
    k = G.handles["k"]
    facts = {
        "order": (G.order, 19683),
        "class": (series.nilpotency_class, 7),
        "exp": (rep.exponent, 9),
        "exp_derived": (exp_d, 3),
        "d": (series.d_index, 1),
        "big": (rep.big_count, 16038),
        "witnesses": (rep.witness_count, 7290),
        "W_subset_B": (rep.witnesses_subset_of_big and rep.witness_count < rep.big_count, True),
        "k_not_witness": (not witness.is_witness(G, k), True),
    }
    bad = [(name, got, want) for name, (got, want) in facts.items() if got != want]
    return not bad, ", ".join(f"{n}={g}" for n, (g, _) in facts.items()), bad


# --- properties (criterion 8)


def _prop_double_cosets(groups) -> list:
    bad = []
    for G in groups:
        for k in range(G.order):
            if witness.is_witness(G, k) != witness.is_witness(G, k, exhaustive=True):
                bad.append((G.name, k))
    return bad


def _prop_same_exponent(groups) -> list:
    bad = []
    for G in groups:
        rep = witness.witness_set(G)
        for k in rep.witnesses:
            C = structure.centralizer(G, int(k))
            if int(G.orders[k]) != structure.exponent(G, C):
                bad.append((G.name, int(k), "order != exp(C(k))"))
        Z = structure.center(G)
        zw = np.intersect1d(Z.members, rep.witnesses)
        if structure.exponent(G, Z) == rep.exponent:
            if not np.array_equal(zw, witness.big_elements(G, Z)):
                bad.append((G.name, "Z cap W != B(Z)"))
        elif len(zw):
            bad.append((G.name, "central witness with small centre exponent"))
    return bad


def _prop_subgroups(groups) -> list:
    bad = []
    for G in groups:
        W = witness.witness_set(G).witnesses
        reps = np.unique(structure.conjugacy_labels(G))
        for k in W[:4]:
            for g in reps:
                H = structure.closure(G, [int(k), int(g)])
                if not witness.is_witness(G, int(k), within=H):
                    bad.append((G.name, int(k), int(g)))
    return bad


def _prop_quotients(groups) -> list:
    bad = []
    for G in groups:
        normals = structure.normal_subgroups(G)
        if normals is None:
            continue
        W = witness.witness_set(G).witnesses
        quots = {}
        for N in normals:
            if N.order in (1, G.order):
                continue
            quots[N.mask.tobytes()] = (N, structure.quotient(G, N))
        for k in W:
            cyc = set(G.powers(int(k)).tolist())
            for N, Q in quots.values():
                if len(cyc & set(N.members.tolist())) == 1:
                    if not witness.is_witness(Q.group, int(Q.project[k])):
                        bad.append((G.name, int(k), N.order))
        # intersection of two normal subgroups trivial, k witness mod each => k witness
        wq = {key: set(witness.witness_set(Q.group).witnesses.tolist()) for key, (N, Q) in quots.items()}
        wset = set(W.tolist())
        for (k1, (N1, Q1)), (k2, (N2, Q2)) in itertools.combinations(quots.items(), 2):
            if np.any(N1.mask & N2.mask & (np.arange(G.order) != 0)):
                continue
            for k in range(G.order):
                if int(Q1.project[k]) in wq[k1] and int(Q2.project[k]) in wq[k2] and k not in wset:
                    bad.append((G.name, "intersection", k))
    return bad


def _prop_direct_products(pairs) -> list:
    bad = []
    for A, B in pairs:
        data = construct.direct_product_data(A, B)
        P = data.group
        WA = witness.witness_set(A).witnesses
        WB = witness.witness_set(B).witnesses
        WP = set(witness.witness_set(P).witnesses.tolist())
        prod = {data.pair_id(int(a), int(b)) for a in WA for b in WB}
        if not prod <= WP:
            bad.append((A.name, B.name, "inclusion"))
        if math.gcd(A.order, B.order) == 1 and prod != WP:
            bad.append((A.name, B.name, "coprime equality"))
    return bad


def _prop_variants(groups) -> list:
    bad = []
    for G in groups:
        sets = {v: witness.variant_witness_set(G, v) for v in witness.VARIANTS}
        inv = G.inverses
        if not np.array_equal(sets["J1"], sets["J3"]):
            bad.append((G.name, "J1 != J3"))
        if not np.array_equal(sets["J2"], np.sort(inv[sets["J3"]])):
            bad.append((G.name, "J2 != J3^-1"))
        if not np.array_equal(sets["J4"], np.sort(inv[sets["J1"]])):
            bad.append((G.name, "J4 != J1^-1"))
    return bad


def _prop_metacyclic_b(bound: int) -> list:
    bad = []
    for n in range(1, bound, 2):
        for r, s, alpha in construct._metacyclic_specs_of_order(n, bound):
            if r * s != n:
                continue
            M = construct.metacyclic(r, s, alpha)
            if witness.is_witness(M, M.handles["b"]) != (s % r == 0):
                bad.append(M.name)
            nilp = structure.lower_central_series(M).nilpotent
            if nilp != all((alpha - 1) % q == 0 for q in numth.prime_factors(s)):
                bad.append((M.name, "nilpotency"))
    return bad


def _prop_metacyclic_sums(limit: int = 1000) -> list:
    bad = []
    for s in range(1, limit + 1, 2):
        for alpha in range(1, max(s, 2)):
            if math.gcd(alpha, s) == 1 and pow(alpha, s, s) == 1 % s:
                if numth.metacyclic_sums(s, alpha) != (0, 0):
                    bad.append((s, alpha))
    return bad


def legendre_valuation(n: int, j: int, p: int) -> int:
    def fact_val(m):
        v, q = 0, p
        while q <= m:
            v += m // q
            q *= p
        return v

    return fact_val(n) - fact_val(j) - fact_val(n - j)


def _prop_kummer(limit: int = 243) -> list:
    bad = []
    for p in (2, 3, 5, 7):
        for n in range(limit + 1):
            for j in range(n + 1):
                if numth.kummer_valuation(n, j, p).valuation != legendre_valuation(n, j, p):
                    bad.append((n, j, p))
    return bad


def _prop_power_quotient(groups) -> list:
    """Lifting from a quotient by a central-exponent normal subgroup: if kN is
    a witness of G/N of order m and k^m is a big central element of N, then k
    is a witness of G."""
    bad = []
    for G in groups:
        normals = structure.normal_subgroups(G)
        if normals is None:
            continue
        wset = set(witness.witness_set(G).witnesses.tolist())
        for N in normals:
            if N.order in (1, G.order):
                continue
            Q = structure.quotient(G, N)
            wq = set(witness.witness_set(Q.group).witnesses.tolist())
            bigN = set(witness.big_elements(G, N).tolist())
            centre_n = np.ones(G.order, dtype=bool)
            for g in N.gens:
                centre_n &= G.right_mul_map(g) == G.left_mul_map(g)
            for k in range(G.order):
                qk = int(Q.project[k])
                if qk not in wq:
                    continue
                m = int(Q.group.orders[qk])
                km = G.pow(k, m)
                if km in bigN and centre_n[km] and k not in wset:
                    bad.append((G.name, k, N.order))
    return bad


def property_suite(quick: bool = False) -> dict[str, list]:
    small = construct.catalog_odd_upto(100 if quick else 200)
    threes = [G for G in construct.three_groups_upto(81 if quick else 243)]
    powerful = [G for G in threes if G.order <= 81 and not G.is_abelian() and structure.is_powerful(G)]
    nonab = [G for G in small if not G.is_abelian() and G.order <= 81]
    pairs = [
        (construct.cyclic(9), construct.cyclic(9)),
        (construct.metacyclic(3, 7, 2), construct.cyclic(5)),
        (construct.heisenberg(3), construct.cyclic(5)),
        (construct.metacyclic(3, 9, 4), construct.cyclic(7)),
        (construct.cyclic(3), construct.heisenberg(3)),
        (construct.metacyclic(3, 7, 2), construct.cyclic(3)),
    ]
    return {
        "double_coset_equivalence": _prop_double_cosets(small),
        "same_exponent": _prop_same_exponent(small),
        "subgroups": _prop_subgroups(nonab),
        "quotients_and_intersections": _prop_quotients([G for G in nonab if G.order <= 81]),
        "direct_products": _prop_direct_products(pairs),
        "variants": _prop_variants(small if not quick else small[:40]),
        "metacyclic_b_and_nilpotency": _prop_metacyclic_b(200),
        "metacyclic_sums": _prop_metacyclic_sums(1000),
        "kummer_vs_legendre": _prop_kummer(243),
        "quotient_lifting": _prop_power_quotient(powerful),
    }


def check_properties(quick: bool = False) -> tuple[bool, str, list]:
    res = property_suite(quick)
    bad = {k: v for k, v in res.items() if v}
    # C9 x C9 must show a strict inclusion
    data = construct.direct_product_data(construct.cyclic(9), construct.cyclic(9))
    strict = witness.witness_set(data.group).witness_count > 36
    ok = not bad and strict
    return ok, f"{len(res)} suites, strict C9xC9={strict}", [bad] if bad else []


def soundness_groups() -> list[Group]:
    return construct.catalog_odd_upto(200) + [construct.paper_3_9_group()]


def check_soundness(threads: int = 1) -> tuple[bool, str, list]:
    bad = []
    claims = 0
    for G in soundness_groups():
        rep = witness.witness_set(G, threads=threads)
        wset = rep.witnesses
        for cond in witness.sufficient_conditions(G):
            if not cond.holds:
                continue
            if cond.implies_j:
                claims += 1
                if not rep.is_j_group:
                    bad.append((G.name, cond.name, "no witness"))
            if cond.promise:
                need = witness.promised_set(G, cond.promise)
                if not np.isin(need, wset).all():
                    bad.append((G.name, cond.name, cond.promise))
    return not bad, f"{claims} verified claims", bad


CRITERIA = (
    (1, "coefficient table c=6", check_table),
    (2, "collection oracle w_1..w_11", check_oracle),
    (3, "smallest non-J groups", check_survey),
    (4, "M(3,7,2) x C3 witnesses", check_m372_c3),
    (5, "Heisenberg p=3,5", check_heisenberg),
    (6, "non-big witness in M(3,9,4)", check_nonbig),
    (7, "order 3^9 class 7 group", check_3_9),
    (8, "property suites", check_properties),
    (9, "sufficient-condition soundness", check_soundness),
)


def run_checks(only=None) -> list[CheckResult]:
    out = []
    for num, title, fn in CRITERIA:
        if only is not None and num not in only:
            continue
        out.append(_timed(num, title, fn))
    return out
