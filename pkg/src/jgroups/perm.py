"""Permutations and finite permutation groups enumerated element by element.

Composition reads left to right: ``compose(p, q)`` applies ``p`` first, then
``q``, so ``compose(p, q)[i] == q[p[i]]``.  Words such as ``x k^(n-1) x ...``
therefore act in the order they are written.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_CAP = 20000
TABLE_LIMIT = 2500


class PermError(ValueError):
    pass


class GroupTooLarge(PermError):
    pass


# ----------------------------------------------------------------- Permutation


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``{0, ..., deg-1}`` stored as its image list."""

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(v) for v in self.images)
        if not imgs:
            raise PermError("permutation needs degree >= 1")
        if sorted(imgs) != list(range(len(imgs))):
            raise PermError(f"not a bijection on 0..{len(imgs) - 1}: {imgs}")
        object.__setattr__(self, "images", imgs)

    @property
    def deg(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, e: int) -> "Permutation":
        return power(self, e)

    def inverse(self) -> "Permutation":
        inv = [0] * self.deg
        for i, v in enumerate(self.images):
            inv[v] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == v for i, v in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.deg
        out = []
        for start in range(self.deg):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def to_cycles(self, one_based: bool = True) -> str:
        shift = 1 if one_based else 0
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(str(v + shift) for v in c) + ")" for c in cyc)

    def __str__(self) -> str:
        return self.to_cycles()


def identity(deg: int) -> Permutation:
    return Permutation(tuple(range(deg)))


def cycle(*points: int, deg: int | None = None) -> Permutation:
    """The cycle ``(p0 p1 ... pm)`` on 0-based points."""
    if deg is None:
        deg = max(points) + 1 if points else 1
    imgs = list(range(deg))
    for a, b in zip(points, points[1:] + points[:1]):
        imgs[a] = b
    return Permutation(tuple(imgs))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """``p`` then ``q``: i -> q(p(i))."""
    if p.deg != q.deg:
        raise PermError("degree mismatch")
    qi = q.images
    return Permutation(tuple(qi[v] for v in p.images))


def power(p: Permutation, e: int) -> Permutation:
    if e < 0:
        p, e = p.inverse(), -e
    out = identity(p.deg)
    base = p
    while e:
        if e & 1:
            out = compose(out, base)
        e >>= 1
        if e:
            base = compose(base, base)
    return out


def element_order(p: Permutation) -> int:
    """Least m >= 1 with p^m = 1, i.e. the lcm of the cycle lengths."""
    return math.lcm(1, *(len(c) for c in p.cycles()))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, deg: int | None = None, one_based: bool = True) -> Permutation:
    """Parse ``"(1,10,26)(2,11)"``; points are 1-based unless ``one_based=False``."""
    text = text.strip()
    if not text:
        raise PermError("empty permutation text")
    stripped = _CYCLE_RE.sub("", text).strip()
    if stripped:
        raise PermError(f"unparsable cycle notation near {stripped[:20]!r}")
    shift = 1 if one_based else 0
    cycles = []
    for body in _CYCLE_RE.findall(text):
        body = body.strip()
        if not body:
            continue
        pts = [int(t) - shift for t in re.split(r"[,\s]+", body) if t]
        if any(v < 0 for v in pts):
            raise PermError("point index below range")
        if len(set(pts)) != len(pts):
            raise PermError(f"repeated point in cycle ({body})")
        cycles.append(pts)
    top = max((max(c) for c in cycles if c), default=0) + 1
    if deg is None:
        deg = top
    elif top > deg:
        raise PermError(f"point {top} exceeds degree {deg}")
    imgs = list(range(deg))
    used = set()
    for c in cycles:
        for a, b in zip(c, c[1:] + c[:1]):
            if a in used:
                raise PermError("cycles are not disjoint")
            used.add(a)
            imgs[a] = b
    return Permutation(tuple(imgs))


# ----------------------------------------------------------------------- Group


def _compose_rows(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise ``a`` then ``b`` for broadcastable stacks of image rows."""
    a, b = np.broadcast_arrays(a, b)
    return np.take_along_axis(b, a, axis=-1)


@dataclass(eq=False)
class Group:
    """Immutable finite permutation group with every element enumerated.

    ``perms[i]`` is the image row of element ``i``; element 0 is the identity
    and ids follow breadth-first discovery order from the generators.
    ``parent[i]`` and ``via[i]`` record how element ``i`` was found:
    ``perms[i] == compose(perms[parent[i]], generators[via[i]])``.
    """

    generators: tuple[Permutation, ...]
    perms: np.ndarray
    parent: np.ndarray
    via: np.ndarray
    name: str = ""
    gen_ids: tuple[int, ...] = ()
    handles: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False)

    # -- construction helpers
    def __post_init__(self):
        self.perms.setflags(write=False)
        self._build_lookup()
        self._inv = self.lookup(np.argsort(self.perms, axis=1).astype(self.perms.dtype))
        self._orders = self._element_orders()

    def _build_lookup(self) -> None:
        n, deg = self.perms.shape
        base: list[int] = []
        keys = np.zeros(n, dtype=np.int64)
        radix = 1
        if n > 1:
            for pt in range(deg):
                col = self.perms[:, pt].astype(np.int64)
                if np.all(col == pt):
                    continue
                if radix * deg >= 2**62:
                    break
                trial = keys + col * radix
                if len(np.unique(trial)) > len(np.unique(keys)) or not base:
                    keys = trial
                    base.append(pt)
                    radix *= deg
                if len(np.unique(keys)) == n:
                    break
        if len(np.unique(keys)) != n:
            # fall back to exact row hashing
            self._base = None
            self._row_index = {row.tobytes(): i for i, row in enumerate(self.perms)}
            return
        self._base = np.array(base, dtype=np.intp)
        self._radix = deg ** np.arange(len(base), dtype=np.int64)
        order = np.argsort(keys, kind="stable")
        self._sorted_keys = keys[order]
        self._key_order = order

    def _element_orders(self) -> np.ndarray:
        n, deg = self.perms.shape
        out = np.ones(n, dtype=np.int64)
        cur = self.perms
        ident = np.arange(deg, dtype=self.perms.dtype)
        done = np.all(cur == ident, axis=1)
        # cycle-length lcm is cheaper than repeated powering for large orders
        if n > 0:
            lens = np.zeros((n, deg), dtype=np.int64)
            pos = np.broadcast_to(ident, (n, deg)).copy()
            step = 0
            unresolved = np.ones((n, deg), dtype=bool)
            while unresolved.any():
                step += 1
                pos = np.take_along_axis(self.perms, pos, axis=1)
                hit = unresolved & (pos == ident)
                lens[hit] = step
                unresolved &= ~hit
            out = np.array([math.lcm(*map(int, np.unique(row))) for row in lens], dtype=np.int64)
        out[done] = 1
        return out

    # -- basic accessors
    @property
    def order(self) -> int:
        return self.perms.shape[0]

    def __len__(self) -> int:
        return self.order

    @property
    def degree(self) -> int:
        return self.perms.shape[1]

    @property
    def identity_id(self) -> int:
        return 0

    @property
    def orders(self) -> np.ndarray:
        return self._orders

    @property
    def inverses(self) -> np.ndarray:
        return self._inv

    def element(self, i: int) -> Permutation:
        return Permutation(tuple(int(v) for v in self.perms[i]))

    @property
    def elements(self) -> list[Permutation]:
        return [self.element(i) for i in range(self.order)]

    def id_of(self, p: Permutation) -> int:
        if p.deg != self.degree:
            raise PermError("degree mismatch")
        row = np.asarray(p.images, dtype=self.perms.dtype)
        i = int(self.lookup(row[None, :], check=False)[0])
        if i < 0 or not np.array_equal(self.perms[i], row):
            raise PermError("permutation is not in the group")
        return i

    def lookup(self, rows: np.ndarray, check: bool = True) -> np.ndarray:
        """Ids of the given image rows (which must be group elements)."""
        rows = np.asarray(rows)
        if self._base is None:
            out = np.array([self._row_index.get(r.tobytes(), -1) for r in rows.astype(self.perms.dtype)])
        else:
            keys = rows[:, self._base].astype(np.int64) @ self._radix if len(self._base) else np.zeros(len(rows), np.int64)
            pos = np.searchsorted(self._sorted_keys, keys)
            pos = np.minimum(pos, len(self._sorted_keys) - 1)
            found = self._sorted_keys[pos] == keys
            out = np.where(found, self._key_order[pos], -1)
        if check and np.any(out < 0):
            raise PermError("row is not an element of the group")
        return out

    # -- arithmetic on ids
    @property
    def table(self) -> np.ndarray | None:
        """Cayley table ``table[a, b] = a*b`` for small groups, else None."""
        if "table" not in self._cache:
            self._cache["table"] = self._build_table() if self.order <= TABLE_LIMIT else None
        return self._cache["table"]

    def _build_table(self) -> np.ndarray:
        n = self.order
        right = [self.right_mul_map(g) for g in self.gen_ids]
        tab = np.empty((n, n), dtype=np.int32)
        tab[:, 0] = np.arange(n)
        for b in range(1, n):
            tab[:, b] = right[self.via[b]][tab[:, self.parent[b]]]
        tab.setflags(write=False)
        return tab

    def mul(self, a, b):
        """Product ``a*b`` (a first) of ids; broadcasts over arrays."""
        tab = self._cache.get("table")
        if tab is None and self.order <= TABLE_LIMIT:
            tab = self.table
        if tab is not None:
            out = tab[a, b]
            return int(out) if np.ndim(out) == 0 else out
        a_arr = np.atleast_1d(np.asarray(a))
        b_arr = np.atleast_1d(np.asarray(b))
        a_arr, b_arr = np.broadcast_arrays(a_arr, b_arr)
        rows = _compose_rows(self.perms[a_arr.ravel()], self.perms[b_arr.ravel()])
        out = self.lookup(rows).reshape(a_arr.shape)
        if np.ndim(a) == 0 and np.ndim(b) == 0:
            return int(out.ravel()[0])
        return out

    def mul_word(self, ids: Iterable[int]) -> int:
        row = np.arange(self.degree, dtype=self.perms.dtype)
        for i in ids:
            row = self.perms[i][row]
        return int(self.lookup(row[None, :])[0])

    def inv(self, a):
        out = self._inv[a]
        return int(out) if np.ndim(out) == 0 else out

    def pow(self, a: int, e: int) -> int:
        n = int(self._orders[a])
        e %= n
        row = np.arange(self.degree, dtype=self.perms.dtype)
        base = self.perms[a]
        while e:
            if e & 1:
                row = base[row]
            e >>= 1
            if e:
                base = base[base]
        return int(self.lookup(row[None, :])[0])

    def pow_all(self, e: int, ids=None) -> np.ndarray:
        """``g^e`` for every id in ``ids`` (default: all elements)."""
        rows = self.perms if ids is None else self.perms[np.asarray(ids)]
        if e < 0:
            rows = np.argsort(rows, axis=1).astype(rows.dtype)
            e = -e
        acc = np.broadcast_to(np.arange(self.degree, dtype=rows.dtype), rows.shape).copy()
        base = rows
        while e:
            if e & 1:
                acc = np.take_along_axis(base, acc, axis=1)
            e >>= 1
            if e:
                base = np.take_along_axis(base, base, axis=1)
        return self.lookup(acc)

    def powers(self, a: int) -> np.ndarray:
        """``[a^0, a^1, ..., a^(|a|-1)]`` as ids."""
        n = int(self._orders[a])
        rows = np.empty((n, self.degree), dtype=self.perms.dtype)
        rows[0] = np.arange(self.degree)
        for e in range(1, n):
            rows[e] = self.perms[a][rows[e - 1]]
        return self.lookup(rows)

    def right_mul_map(self, g: int) -> np.ndarray:
        """Array ``x -> x*g`` over all ids."""
        key = ("R", int(g))
        hit = self._cache.get(key)
        if hit is None:
            hit = self.lookup(self.perms[g][self.perms])
            hit.setflags(write=False)
            if len(self._cache) < 256:
                self._cache[key] = hit
        return hit

    def left_mul_map(self, g: int) -> np.ndarray:
        """Array ``x -> g*x`` over all ids."""
        key = ("L", int(g))
        hit = self._cache.get(key)
        if hit is None:
            hit = self.lookup(self.perms[:, self.perms[g]])
            hit.setflags(write=False)
            if len(self._cache) < 256:
                self._cache[key] = hit
        return hit

    def conj_map(self, g: int) -> np.ndarray:
        """Array ``x -> g^-1 x g`` over all ids."""
        ginv = self.perms[self._inv[g]]
        rows = self.perms[g][self.perms[:, ginv]]
        return self.lookup(rows)

    def commutator(self, a: int, b: int) -> int:
        ia, ib = self._inv[a], self._inv[b]
        return self.mul_word([ia, ib, a, b])

    def homomorphism_images(self, gen_images: Sequence[int], target: "Group") -> np.ndarray:
        """Extend ``generators[i] -> gen_images[i]`` (ids in ``target``) along the
        discovery tree.  The caller is responsible for it being well defined."""
        out = np.zeros(self.order, dtype=np.int64)
        imgs = [int(v) for v in gen_images]
        tab = target.table
        parent, via = self.parent, self.via
        if tab is not None:
            for e in range(1, self.order):
                out[e] = tab[out[parent[e]], imgs[via[e]]]
        else:
            rows = np.empty((self.order, target.degree), dtype=target.perms.dtype)
            rows[0] = np.arange(target.degree)
            for e in range(1, self.order):
                rows[e] = target.perms[imgs[via[e]]][rows[parent[e]]]
            out = target.lookup(rows)
        return out

    def is_abelian(self) -> bool:
        gens = self.gen_ids
        for i, a in enumerate(gens):
            for b in gens[i + 1 :]:
                if self.mul(a, b) != self.mul(b, a):
                    return False
        return True

    def __repr__(self) -> str:
        return f"Group({self.name or '?'}, order={self.order}, degree={self.degree})"


def enumerate_group(generators: Sequence[Permutation], cap: int = DEFAULT_CAP, name: str = "") -> Group:
    """Breadth-first closure of the generators, starting from the identity.

    Element ids follow discovery order; each frontier element is multiplied on
    the right by the generators in the order given.
    """
    gens = tuple(generators)
    if not gens:
        raise PermError("need at least one generator")
    deg = gens[0].deg
    if any(g.deg != deg for g in gens):
        raise PermError("degree mismatch")
    dtype = np.int32
    gen_rows = np.array([g.images for g in gens], dtype=dtype)
    ident = np.arange(deg, dtype=dtype)
    seen = {ident.tobytes(): 0}
    rows = [ident]
    parent = [0]
    via = [0]
    frontier = ident[None, :]
    frontier_ids = np.array([0])
    while len(frontier):
        # children[i, g] = frontier[i] then generator g
        children = gen_rows[:, frontier].transpose(1, 0, 2)
        new_rows, new_ids = [], []
        for fi in range(children.shape[0]):
            for gi in range(children.shape[1]):
                row = children[fi, gi]
                key = row.tobytes()
                if key in seen:
                    continue
                idx = len(rows)
                if idx >= cap:
                    raise GroupTooLarge(f"group too large: more than {cap} elements")
                seen[key] = idx
                rows.append(row)
                parent.append(int(frontier_ids[fi]))
                via.append(gi)
                new_rows.append(row)
                new_ids.append(idx)
        frontier = np.array(new_rows, dtype=dtype).reshape(-1, deg)
        frontier_ids = np.array(new_ids)
    perms = np.array(rows, dtype=dtype)
    g = Group(
        generators=gens,
        perms=perms,
        parent=np.array(parent, dtype=np.int64),
        via=np.array(via, dtype=np.int64),
        name=name,
    )
    g.gen_ids = tuple(seen[r.tobytes()] for r in gen_rows)
    return g
