"""Subgroups, series and the structural predicates used as hypotheses."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .numth import prime_power
from .perm import Group, enumerate_group, Permutation

ALL_PAIRS_LIMIT = 2_000_000
NORMAL_SUBGROUP_LIMIT = 3**5
REGULAR_LIMIT = 3**5


class StructureError(ValueError):
    pass


# ------------------------------------------------------------------- subgroups


@dataclass(eq=False)
class Subgroup:
    """Subgroup of an enumerated group, held as a membership mask."""

    parent: Group
    mask: np.ndarray
    generated_by: tuple[int, ...] = ()

    def __post_init__(self):
        self.mask.setflags(write=False)

    @property
    def members(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    @property
    def order(self) -> int:
        return int(self.mask.sum())

    def __len__(self) -> int:
        return self.order

    def __contains__(self, g) -> bool:
        return bool(self.mask[g])

    def issubset(self, other: "Subgroup") -> bool:
        return bool(np.all(other.mask[self.mask]))

    def __eq__(self, other) -> bool:
        return isinstance(other, Subgroup) and other.parent is self.parent and np.array_equal(self.mask, other.mask)

    def __hash__(self):
        return hash(self.mask.tobytes())

    @property
    def gens(self) -> tuple[int, ...]:
        """A generating set, computed on demand for mask-defined subgroups."""
        if not self.generated_by and self.order > 1:
            self.generated_by = closure(self.parent, self.members).generated_by
        return self.generated_by

    def is_trivial(self) -> bool:
        return self.order == 1

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order} of {self.parent.order})"


def whole(G: Group) -> Subgroup:
    return Subgroup(G, np.ones(G.order, dtype=bool), tuple(G.gen_ids))


def trivial(G: Group) -> Subgroup:
    m = np.zeros(G.order, dtype=bool)
    m[0] = True
    return Subgroup(G, m, ())


def _grow(G: Group, mask: np.ndarray, frontier: np.ndarray, gens: Sequence[int]) -> np.ndarray:
    """Close ``mask`` under right multiplication by ``gens`` starting from ``frontier``."""
    maps = [G.right_mul_map(g) for g in gens]
    while len(frontier):
        nxt = np.unique(np.concatenate([m[frontier] for m in maps]))
        nxt = nxt[~mask[nxt]]
        mask[nxt] = True
        frontier = nxt
    return mask


def closure(G: Group, seeds: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing ``seeds``.

    Seeds are added one at a time; a seed already inside the current subgroup
    is skipped, so the generating set stays short (at most log2|G| elements).
    """
    mask = np.zeros(G.order, dtype=bool)
    mask[0] = True
    gens: list[int] = []
    for s in np.unique(np.asarray(list(seeds), dtype=np.int64)):
        s = int(s)
        if mask[s]:
            continue
        gens.append(s)
        if len(gens) == 1:
            mask = _grow(G, mask, np.array([0]), gens)
        else:
            # the new subgroup is the closure of old members under all gens
            mask = _grow(G, mask, np.flatnonzero(mask), gens)
    return Subgroup(G, mask, tuple(gens))


def normal_closure(G: Group, seeds: Iterable[int], within: Sequence[int] | None = None) -> Subgroup:
    """Smallest subgroup containing ``seeds`` and normalised by ``within``
    (default: the generators of G)."""
    conjugators = list(G.gen_ids if within is None else within)
    H = closure(G, seeds)
    cmaps = [G.conj_map(g) for g in conjugators]
    while True:
        extra = {int(cm[h]) for cm in cmaps for h in H.gens}
        extra = [e for e in extra if not H.mask[e]]
        if not extra:
            return H
        H = closure(G, list(H.gens) + extra)


def is_normal(G: Group, H: Subgroup) -> bool:
    for g in G.gen_ids:
        cm = G.conj_map(g)
        if not np.all(H.mask[cm[H.members]]):
            return False
    return True


def center(G: Group) -> Subgroup:
    mask = np.ones(G.order, dtype=bool)
    for g in G.gen_ids:
        mask &= G.right_mul_map(g) == G.left_mul_map(g)
    return Subgroup(G, mask)


def centralizer(G: Group, g: int, within: Subgroup | None = None) -> Subgroup:
    mask = G.right_mul_map(g) == G.left_mul_map(g)
    if within is not None:
        mask = mask & within.mask
    return Subgroup(G, mask)


def conjugacy_labels(G: Group) -> np.ndarray:
    """``labels[x]`` is the least id in the conjugacy class of ``x``."""
    hit = G._cache.get("class_labels")
    if hit is None:
        hit = orbit_labels(G.order, [G.conj_map(g) for g in G.gen_ids])
        hit.setflags(write=False)
        G._cache["class_labels"] = hit
    return hit


def conjugacy_classes(G: Group) -> list[np.ndarray]:
    labels = conjugacy_labels(G)
    reps = np.unique(labels)
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], reps)
    return [order[a:b] for a, b in zip(bounds, list(bounds[1:]) + [len(order)])]


def orbit_labels(n: int, maps: Sequence[np.ndarray]) -> np.ndarray:
    """Least element of each orbit of the group generated by the given
    permutations of ``range(n)``."""
    label = np.arange(n)
    inverses = []
    for m in maps:
        inv = np.empty_like(m)
        inv[m] = np.arange(n)
        inverses.append(inv)
    allmaps = list(maps) + inverses
    while True:
        new = label.copy()
        for m in allmaps:
            np.minimum(new, label[m], out=new)
        new = new[new]  # pointer jumping
        if np.array_equal(new, label):
            return label
        label = new


# ----------------------------------------------------- commutators and series


def commutator_subgroup(G: Group, X: Subgroup, Y: Subgroup) -> Subgroup:
    """``[X, Y]`` generated by every commutator ``[x, y]``.

    When ``|X|*|Y|`` exceeds ``ALL_PAIRS_LIMIT`` this uses the equivalent
    description as the normal closure, in ``<X, Y>``, of the commutators of
    generators.
    """
    if X.order * Y.order <= ALL_PAIRS_LIMIT:
        ys = Y.members
        seeds = set()
        inv = G.inverses
        for x in X.members:
            # [x, y] = x^-1 y^-1 x y
            left = G.mul(inv[x], inv[ys])
            seeds.update(np.unique(G.mul(G.mul(left, x), ys)).tolist())
        return closure(G, seeds)
    xg, yg = X.gens, Y.gens
    seeds = [G.commutator(a, b) for a in xg for b in yg]
    return normal_closure(G, seeds, within=list(xg) + list(yg))


def derived_subgroup(G: Group, H: Subgroup | None = None) -> Subgroup:
    H = whole(G) if H is None else H
    return commutator_subgroup(G, H, H)


def exponent(G: Group, H: Subgroup | None = None) -> int:
    orders = G.orders if H is None else G.orders[H.mask]
    return math.lcm(*map(int, np.unique(orders)))


@dataclass
class SeriesReport:
    terms: list[Subgroup]
    nilpotent: bool
    nilpotency_class: int | None
    exponents: list[int]
    d_index: int | None

    @property
    def orders(self) -> list[int]:
        return [t.order for t in self.terms]

    def to_json(self) -> dict:
        return {
            "class": self.nilpotency_class if self.nilpotent else "not nilpotent",
            "exponents": self.exponents,
            "orders": self.orders,
            "d": self.d_index if self.nilpotent else "not nilpotent",
        }


def lower_central_series(G: Group) -> SeriesReport:
    """gamma_1 = G, gamma_(i+1) = [gamma_i, G], stopping at 1 or when it stabilises."""
    hit = G._cache.get("lcs")
    if hit is not None:
        return hit
    G_all = whole(G)
    terms = [G_all]
    while not terms[-1].is_trivial():
        nxt = commutator_subgroup(G, terms[-1], G_all)
        if nxt.order == terms[-1].order:
            break
        terms.append(nxt)
    nilpotent = terms[-1].is_trivial()
    exps = [exponent(G, t) for t in terms]
    c = len(terms) - 1 if nilpotent else None
    d = None
    if nilpotent:
        e = exps[0]
        d = max(i + 1 for i, v in enumerate(exps) if v == e)
    report = SeriesReport(terms, nilpotent, c, exps, d)
    G._cache["lcs"] = report
    return report


def gamma(G: Group, i: int) -> Subgroup:
    """i-th term of the lower central series (trivial past the end)."""
    terms = lower_central_series(G).terms
    if i - 1 < len(terms):
        return terms[i - 1]
    return trivial(G) if terms[-1].is_trivial() else terms[-1]


# ------------------------------------------------------------------ p-groups


def p_of(G: Group) -> int:
    pp = prime_power(G.order)
    if pp is None:
        raise StructureError("not a p-group")
    return pp[0]


def is_p_group(G: Group) -> bool:
    return prime_power(G.order) is not None


def agemo(G: Group, k: int) -> Subgroup:
    """Subgroup generated by the p^k-th powers."""
    p = p_of(G)
    return closure(G, np.unique(G.pow_all(p**k)))


def omega(G: Group, k: int) -> Subgroup:
    """Subgroup generated by the elements of order dividing p^k."""
    p = p_of(G)
    return closure(G, np.flatnonzero((p**k) % G.orders == 0))


def power_set_mask(G: Group, m: int) -> np.ndarray:
    mask = np.zeros(G.order, dtype=bool)
    mask[G.pow_all(m)] = True
    return mask


def is_powerful(G: Group) -> bool:
    p = p_of(G)
    if p == 2:
        raise StructureError("powerful is defined here for odd p")
    return derived_subgroup(G).issubset(agemo(G, 1))


def is_regular(G: Group) -> bool | None:
    """Exhaustive regularity test; None when |G| exceeds ``REGULAR_LIMIT``.

    For every pair (a, b) it checks that ``(ab)^-p a^p b^p`` is a p-th power of
    some element of ``gamma_2(<a, b>)``.  ``a`` ranges over conjugacy-class
    representatives since the condition is invariant under conjugating both.
    """
    p = p_of(G)
    if G.order > REGULAR_LIMIT:
        return None
    if G.is_abelian():
        return True
    cache: dict[bytes, np.ndarray] = {}
    reps = np.unique(conjugacy_labels(G))
    for a in reps:
        a = int(a)
        ap = G.pow(a, p)
        for b in range(G.order):
            ab = G.mul(a, b)
            if ab == G.mul(b, a):
                continue
            target = G.mul(G.mul(G.inv(G.pow(ab, p)), ap), G.pow(b, p))
            if target == 0:
                continue
            H = closure(G, [a, b])
            key = H.mask.tobytes()
            powers = cache.get(key)
            if powers is None:
                D = derived_subgroup(G, H)
                powers = np.zeros(G.order, dtype=bool)
                powers[G.pow_all(p, D.members)] = True
                cache[key] = powers
            if not powers[target]:
                return False
    return True


def normal_subgroups(G: Group) -> list[Subgroup] | None:
    """All normal subgroups as joins of normal closures of conjugacy classes;
    None above ``NORMAL_SUBGROUP_LIMIT``."""
    if G.order > NORMAL_SUBGROUP_LIMIT:
        return None
    reps = np.unique(conjugacy_labels(G))
    minimal = {}
    for r in reps:
        N = normal_closure(G, [int(r)])
        minimal.setdefault(N.mask.tobytes(), N)
    found = {trivial(G).mask.tobytes(): trivial(G)}
    frontier = list(found.values())
    gens_pool = list(minimal.values())
    while frontier:
        nxt = []
        for N in frontier:
            for M in gens_pool:
                if M.issubset(N):
                    continue
                J = closure(G, list(N.gens) + list(M.gens))
                key = J.mask.tobytes()
                if key not in found:
                    found[key] = J
                    nxt.append(J)
        frontier = nxt
    return sorted(found.values(), key=lambda s: (s.order, s.members.tolist()))


def is_power_closed_bounded(G: Group) -> bool | None:
    """For G and every quotient G/N by a normal subgroup, check that the set
    of p^k-th powers is a subgroup for every k.

    A finite under-approximation of closure over all sections; returns None
    when normal subgroups are not enumerated (|G| too large).
    """
    p = p_of(G)
    if G.is_abelian():
        return True
    normals = normal_subgroups(G)
    if normals is None:
        return None
    e = exponent(G)
    tab = G.table
    for N in normals:
        members = N.members
        k = 1
        while p**k < e:
            powers = np.unique(G.pow_all(p**k))
            # union of the cosets xN of p^k-th powers x
            mask = np.zeros(G.order, dtype=bool)
            if tab is not None:
                mask[tab[np.ix_(powers, members)].ravel()] = True
            else:
                for x in powers:
                    mask[G.mul(int(x), members)] = True
            H = closure(G, np.flatnonzero(mask))
            if H.order != int(mask.sum()):
                return False
            k += 1
    return True


def predicates(G: Group) -> dict:
    """Hypotheses for p-groups with p odd."""
    p = p_of(G)
    if p == 2:
        raise StructureError("predicates need an odd p-group")
    return {
        "is_powerful": is_powerful(G),
        "is_regular": is_regular(G),
        "is_power_closed_bounded": is_power_closed_bounded(G),
    }


# ------------------------------------------------------------------- quotients


@dataclass(eq=False)
class Quotient:
    group: Group
    project: np.ndarray  # id in G -> id in G/N
    kernel: Subgroup


def coset_labels(G: Group, N: Subgroup) -> np.ndarray:
    """Label of the right coset ``N x`` (least id in it) for every x."""
    maps = [G.left_mul_map(n) for n in (N.gens or (0,))]
    return orbit_labels(G.order, maps)


def quotient(G: Group, N: Subgroup, name: str = "") -> Quotient:
    """G/N acting on its right cosets by right multiplication."""
    if not is_normal(G, N):
        raise StructureError("not normal")
    labels = coset_labels(G, N)
    reps = np.unique(labels)
    index = np.full(G.order, -1, dtype=np.int64)
    index[reps] = np.arange(len(reps))
    coset_of = index[labels]
    images = []
    for g in G.gen_ids:
        images.append(Permutation(tuple(int(v) for v in coset_of[G.right_mul_map(g)[reps]])))
    Q = enumerate_group(images, cap=max(G.order, 1), name=name or f"{G.name}/N")
    gen_imgs = [Q.id_of(im) for im in images]
    proj = G.homomorphism_images(gen_imgs, Q)
    return Quotient(Q, proj, N)
