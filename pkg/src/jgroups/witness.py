"""Witness testing and enumeration.

An element k of order n is a witness when ``x k^(n-1) x k^(n-2) ... x k x = 1``
for every x.  It is enough to test one x per double coset <k> x <k>, and the
witness set is a union of conjugacy classes, so one representative per class
is tested and the verdict spread over the class.
"""
from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .numth import prime_factors, prime_power
from .perm import Group
from .structure import (
    Subgroup,
    center,
    conjugacy_labels,
    exponent,
    gamma,
    is_power_closed_bounded,
    is_powerful,
    lower_central_series,
    orbit_labels,
)

VARIANTS = ("J1", "J2", "J3", "J4")


class WitnessError(ValueError):
    pass


# ---------------------------------------------------------------- primitives


def _exps(n: int, variant: str) -> tuple[np.ndarray, bool]:
    """Exponent sequence and factor order for each product form.

    J1: prod_{i=1..n} x k^(n-i)    J2: prod_{i=0..n-1} x k^i
    J3: prod_{i=1..n} k^(n-i) x    J4: prod_{i=0..n-1} k^i x
    """
    down = np.arange(n - 1, -1, -1)
    up = np.arange(n)
    table = {"J1": (down, True), "J2": (up, True), "J3": (down, False), "J4": (up, False)}
    try:
        return table[variant]
    except KeyError:
        raise WitnessError(f"unknown variant {variant!r}; expected one of {VARIANTS}") from None


def _kpow_rows(G: Group, k: int) -> np.ndarray:
    return G.perms[G.powers(k)]


def witness_product(G: Group, k: int, x: int, variant: str = "J1") -> int:
    """Id of ``prod_{i=1..n} x k^(n-i)`` (or the chosen variant), n = |k|."""
    exps, x_first = _exps(int(G.orders[k]), variant)
    rows = kernels.product_rows(G.perms[[x]], _kpow_rows(G, k), exps, x_first)
    return int(G.lookup(rows)[0])


def double_coset_labels(G: Group, K: Subgroup) -> np.ndarray:
    """``labels[x]`` is the least id of the double coset ``K x K``."""
    gens = K.gens or (0,)
    maps = [G.left_mul_map(g) for g in gens] + [G.right_mul_map(g) for g in gens]
    return orbit_labels(G.order, maps)


def double_coset_reps(G: Group, K: Subgroup) -> np.ndarray:
    """Least element of each double coset ``K x K``, ascending."""
    return np.unique(double_coset_labels(G, K))


def _cyclic(G: Group, k: int) -> Subgroup:
    mask = np.zeros(G.order, dtype=bool)
    mask[G.powers(k)] = True
    return Subgroup(G, mask, (int(k),) if k else ())


def _cyclic_reps(G: Group, k: int) -> np.ndarray:
    """Double-coset representatives for <k>, using one left and one right map."""
    if k == 0:
        return np.arange(G.order)
    maps = [G.left_mul_map(k), G.right_mul_map(k)]
    return np.unique(orbit_labels(G.order, maps))


def is_witness(G: Group, k: int, exhaustive: bool = False, variant: str = "J1",
               within: Subgroup | None = None) -> bool:
    """Witness test over double-coset representatives (or every x).

    ``within`` restricts x to a subgroup containing k, i.e. tests k as an
    element of that subgroup.
    """
    if within is not None:
        if not within.mask[k]:
            raise WitnessError("k is not in the subgroup")
        return _test(G, k, variant=variant, xs=within.members)[0]
    return _test(G, k, exhaustive, variant)[0]


def _test(G: Group, k: int, exhaustive: bool = False, variant: str = "J1", xs=None) -> tuple[bool, int]:
    n = int(G.orders[k])
    exps, x_first = _exps(n, variant)
    if xs is None:
        xs = np.arange(G.order) if exhaustive else _cyclic_reps(G, k)
    tab = G.table
    if tab is not None:
        ids = kernels.table_product_ids(tab, xs, G.powers(k), exps, x_first)
        return bool(np.all(ids == 0)), len(xs)
    mask = kernels.product_mask(G.perms[xs], _kpow_rows(G, k), exps, x_first)
    return bool(mask.all()), len(xs)


def witness_variant(G: Group, k: int, variant: str, exhaustive: bool = False) -> bool:
    return is_witness(G, k, exhaustive=exhaustive, variant=variant)


def variant_witness_set(G: Group, variant: str, exhaustive: bool = True) -> np.ndarray:
    """Elements passing the given product form, testing every candidate."""
    return np.array([k for k in range(G.order) if is_witness(G, k, exhaustive, variant)], dtype=np.int64)


# ------------------------------------------------------------------ reports


@dataclass
class WitnessReport:
    group: Group
    witnesses: np.ndarray
    big: np.ndarray
    is_j_group: bool
    sample_witness: int | None
    exponent: int
    stats: dict = field(default_factory=dict)

    @property
    def witness_count(self) -> int:
        return len(self.witnesses)

    @property
    def big_count(self) -> int:
        return len(self.big)

    @property
    def witnesses_subset_of_big(self) -> bool:
        return bool(np.isin(self.witnesses, self.big).all())

    def histogram(self) -> dict[str, int]:
        return {str(o): c for o, c in sorted(Counter(map(int, self.group.orders[self.witnesses])).items())}

    def to_json(self) -> dict:
        return {
            "group": self.group.name,
            "order": self.group.order,
            "exponent": self.exponent,
            "is_j_group": self.is_j_group,
            "witness_count": self.witness_count,
            "big_count": self.big_count,
            "witnesses_are_subset_of_big": self.witnesses_subset_of_big,
            "witness_orders_histogram": self.histogram(),
            "stats": dict(self.stats),
        }


def big_elements(G: Group, H: Subgroup | None = None) -> np.ndarray:
    """Elements of H (default G) whose order is exp(H)."""
    e = exponent(G, H)
    mask = G.orders == e
    if H is not None:
        mask &= H.mask
    return np.flatnonzero(mask)


def witness_set(G: Group, threads: int = 1) -> WitnessReport:
    """All witnesses, testing one element per conjugacy class.

    With ``threads > 1`` class representatives are tested concurrently; the
    report is assembled in representative order, so it does not depend on the
    thread count.
    """
    labels = conjugacy_labels(G)
    reps = np.unique(labels)

    def run(k):
        return _test(G, int(k))

    if threads > 1 and len(reps) > 1:
        # warm shared caches before fanning out
        G.inverses
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, reps))
        # map() yields in submission order, independent of completion order
    else:
        results = [run(k) for k in reps]
    good = reps[[ok for ok, _ in results]] if len(reps) else reps
    witnesses = np.flatnonzero(np.isin(labels, good))
    big = big_elements(G)
    tested = sum(cnt for _, cnt in results)
    stats = {
        "classes": int(len(reps)),
        "candidates_tested": int(len(reps)),
        "candidates_pruned": int(G.order - len(reps)),
        "x_tested": int(tested),
        "x_pruned": int(len(reps) * G.order - tested),
        "backend": kernels.BACKEND,
    }
    return WitnessReport(
        group=G,
        witnesses=witnesses,
        big=big,
        is_j_group=len(witnesses) > 0,
        sample_witness=int(witnesses[0]) if len(witnesses) else None,
        exponent=exponent(G),
        stats=stats,
    )


def is_j_group(G: Group) -> int | None:
    """Some witness, or None.  Even order returns None at once."""
    if G.order % 2 == 0:
        return None
    labels = conjugacy_labels(G)
    reps = np.unique(labels)
    orders = G.orders[reps]
    for k in reps[np.lexsort((reps, -orders))]:
        if is_witness(G, int(k)):
            return int(k)
    return None


# ------------------------------------------------------------- witness function


@dataclass
class WitnessFunction:
    group: Group
    witness: int
    transversal: list[int]
    table: np.ndarray  # table[x] = f(x)

    def __call__(self, x: int) -> int:
        return int(self.table[x])

    def check(self) -> bool:
        G = self.group
        xs = np.arange(G.order)
        lhs = self.table[G.right_mul_map(self.witness)]
        rhs = G.mul(xs, self.table)
        return bool(np.array_equal(lhs, rhs))


def build_f(G: Group, k: int) -> WitnessFunction:
    """f with f(x k) = x f(x): f(s) = 1 on a left transversal S of <k>, then
    f(s k^(m+1)) = s k^m f(s k^m)."""
    if not is_witness(G, k):
        raise WitnessError("not a witness")
    n = int(G.orders[k])
    coset = orbit_labels(G.order, [G.right_mul_map(k)])
    transversal = [int(s) for s in np.unique(coset)]
    table = np.full(G.order, -1, dtype=np.int64)
    step = G.right_mul_map(k)
    for s in transversal:
        x, fx = s, 0
        table[x] = fx
        for _ in range(n - 1):
            x, fx = int(step[x]), G.mul(x, fx)
            table[x] = fx
    f = WitnessFunction(G, int(k), transversal, table)
    if not f.check():
        raise WitnessError("constructed f fails f(xk) = x f(x)")
    return f


# ------------------------------------------------------- sufficient conditions


@dataclass
class Condition:
    name: str
    holds: bool | None  # None: not applicable / unknown
    implies_j: bool
    promise: str | None = None  # "B(G)", "B(gamma_d)", "B(Z(G))", "G\\1", "gamma_c\\1"
    note: str = ""

    @property
    def status(self) -> str:
        if self.holds is None:
            return self.note or "n/a"
        return "holds" if self.holds else "fails"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "implies_j": self.implies_j,
            "promise": self.promise,
            "note": self.note,
        }


def sufficient_conditions(G: Group) -> list[Condition]:
    """Evaluate each known sufficient condition for being a J-group."""
    out: list[Condition] = []
    odd = G.order % 2 == 1
    exp_g = exponent(G)
    Z = center(G)
    z_ok = odd and exponent(G, Z) == exp_g
    out.append(Condition("center_exponent", z_ok if odd else None, z_ok, "B(Z(G))" if z_ok else None,
                         "" if odd else "n/a: even order"))
    series = lower_central_series(G)
    if odd and series.nilpotent:
        c = max(series.nilpotency_class, 1)
        primes = list(prime_factors(G.order)) if G.order > 1 else []
        ok = all(p * p > 2 * c - 1 for p in primes)
        out.append(Condition("nilpotent_small_class", ok, ok, None))
    else:
        out.append(Condition("nilpotent_small_class", None, False, None, "n/a: not odd nilpotent"))
    pp = prime_power(G.order)
    if pp is None or pp[0] == 2:
        for name in ("exponent_p", "class_bound_a", "class_bound_b", "class_bound_d", "powerful",
                     "power_closed", "exponent_p_class_bound_a", "exponent_p_class_bound_b"):
            out.append(Condition(name, None, False, None, "n/a: not an odd p-group"))
        return out
    p = pp[0]
    c = series.nilpotency_class
    d = series.d_index
    exp_p = exp_g == p
    out.append(Condition("exponent_p", exp_p, exp_p, "B(Z(G))" if exp_p else None))
    a = p > 2 * c - 1
    out.append(Condition("class_bound_a", a, a, "B(G)" if a else None, f"p={p}, 2c-1={2 * c - 1}"))
    b = p * p > 2 * c - 1
    out.append(Condition("class_bound_b", b, b, "B(gamma_d)" if b else None, f"p^2={p * p}, 2c-1={2 * c - 1}"))
    t8 = d >= c - 5
    out.append(Condition("class_bound_d", t8, t8, "B(gamma_d)" if t8 else None, f"d={d}, c-5={c - 5}"))
    pw = is_powerful(G)
    out.append(Condition("powerful", pw, pw, "B(G)" if pw else None))
    pc = is_power_closed_bounded(G)
    out.append(Condition("power_closed", pc, bool(pc), "B(gamma_d)" if pc else None,
                         "bounded check" if pc is not None else "unknown: beyond bounded check"))
    ea = exp_p and a
    out.append(Condition("exponent_p_class_bound_a", ea, ea, "G\\1" if ea else None))
    eb = exp_p and b
    out.append(Condition("exponent_p_class_bound_b", eb, eb, "gamma_c\\1" if eb else None))
    return out


def promised_set(G: Group, promise: str) -> np.ndarray:
    """Elements a condition promises to be witnesses."""
    series = lower_central_series(G)
    if promise == "B(G)":
        return big_elements(G)
    if promise == "B(Z(G))":
        return big_elements(G, center(G))
    if promise == "B(gamma_d)":
        return big_elements(G, gamma(G, series.d_index))
    if promise == "G\\1":
        return np.arange(1, G.order)
    if promise == "gamma_c\\1":
        members = gamma(G, series.nilpotency_class).members
        return members[members != 0]
    raise WitnessError(f"unknown promise {promise!r}")
