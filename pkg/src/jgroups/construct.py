"""Builders for the concrete groups: cyclic, direct products, metacyclic,
Heisenberg, the explicit order-3^9 example, and small catalogs."""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .numth import is_prime, prime_factors, prime_power
from .perm import (
    DEFAULT_CAP,
    Group,
    PermError,
    Permutation,
    cycle,
    enumerate_group,
    identity,
    parse_cycles,
)


class ConstructError(ValueError):
    pass


GEN_K_3_9 = "(1,10,26,9,16,23,4,13,20)(2,11,27,7,17,24,5,14,21)(3,12,25,8,18,22,6,15,19)"
GEN_X_3_9 = "(1,19,10,7,27,16,4,22,13)(2,20,11,8,25,17,5,23,14)(3,21,12,9,26,18,6,24,15)"


# ------------------------------------------------------------------- families


def cyclic(n: int, cap: int = DEFAULT_CAP) -> Group:
    if n < 1:
        raise ConstructError("cyclic order must be >= 1")
    g = cycle(*range(n), deg=n) if n > 1 else identity(1)
    G = enumerate_group([g], cap=cap, name=f"C{n}")
    G.handles["g"] = G.gen_ids[0]
    return G


def _shift(p: Permutation, offset: int, deg: int) -> Permutation:
    imgs = list(range(deg))
    for i, v in enumerate(p.images):
        imgs[i + offset] = v + offset
    return Permutation(tuple(imgs))


@dataclass(eq=False)
class ProductGroup:
    group: Group
    first: Group
    second: Group
    proj_first: np.ndarray
    proj_second: np.ndarray

    def pair_id(self, a: int, b: int) -> int:
        """Id of ``(a, b)`` in the product."""
        row = np.concatenate([self.first.perms[a], self.second.perms[b] + self.first.degree])
        return int(self.group.lookup(row[None, :])[0])


def direct_product_data(G: Group, H: Group, cap: int = DEFAULT_CAP, name: str = "") -> ProductGroup:
    """G x H acting on disjoint point sets, with both coordinate projections."""
    if G.order * H.order > cap:
        raise ConstructError(f"group too large: {G.order * H.order} > cap {cap}")
    deg = G.degree + H.degree
    gens = [_shift(g, 0, deg) for g in G.generators] + [_shift(h, G.degree, deg) for h in H.generators]
    P = enumerate_group(gens, cap=cap, name=name or f"{G.name}x{H.name}")
    pf = G.lookup(np.ascontiguousarray(P.perms[:, : G.degree]))
    ps = H.lookup(np.ascontiguousarray(P.perms[:, G.degree :] - G.degree))
    return ProductGroup(P, G, H, pf, ps)


def direct_product(G: Group, H: Group, cap: int = DEFAULT_CAP, name: str = "") -> Group:
    data = direct_product_data(G, H, cap, name)
    P = data.group
    P.handles["proj_first"] = data.proj_first
    P.handles["proj_second"] = data.proj_second
    P.handles["product"] = data
    return P


def abelian(invariants, cap: int = DEFAULT_CAP) -> Group:
    """Direct product of cyclic groups of the given orders."""
    invs = [int(n) for n in invariants if int(n) > 1] or [1]
    G = cyclic(invs[0], cap)
    for n in invs[1:]:
        G = direct_product(G, cyclic(n, cap), cap)
    G.name = "x".join(f"C{n}" for n in invs)
    return G


@dataclass(frozen=True)
class MetacyclicSpec:
    """<a, b | a^r = b^s = 1, a^-1 b a = b^alpha>."""

    r: int
    s: int
    alpha: int

    def validate(self) -> None:
        r, s, alpha = self.r, self.s, self.alpha
        if r < 1 or s < 1:
            raise ConstructError("r and s must be positive")
        if s > 1 and not 1 <= alpha < s:
            raise ConstructError(f"need 1 <= alpha < s, got alpha={alpha}, s={s}")
        if math.gcd(alpha, s) != 1:
            raise ConstructError(f"gcd(alpha, s) = gcd({alpha}, {s}) != 1")
        if pow(alpha, r, s) != 1 % s:
            raise ConstructError(f"alpha^r != 1 (mod s): {alpha}^{r} mod {s} = {pow(alpha, r, s)}")

    @property
    def name(self) -> str:
        return f"M({self.r},{self.s},{self.alpha})"


def metacyclic(r: int, s: int, alpha: int, cap: int = DEFAULT_CAP) -> Group:
    """Points 0..s-1 carry Z_s, points s..s+r-1 carry Z_r.

    b: x -> x+1 on Z_s; a: x -> alpha*x on Z_s and x -> x+1 on Z_r.  With
    left-to-right composition this gives a^-1 b a = b^alpha, and the Z_r block
    makes a have order exactly r.
    """
    spec = MetacyclicSpec(r, s, alpha)
    spec.validate()
    if r * s > cap:
        raise ConstructError(f"group too large: {r * s} > cap {cap}")
    b = [(x + 1) % s for x in range(s)] + [s + y for y in range(r)]
    a = [(alpha * x) % s for x in range(s)] + [s + (y + 1) % r for y in range(r)]
    G = enumerate_group([Permutation(tuple(a)), Permutation(tuple(b))], cap=cap, name=spec.name)
    if G.order != r * s:
        raise ConstructError(f"realised order {G.order} != r*s = {r * s}")
    G.handles["a"], G.handles["b"] = G.gen_ids
    G.handles["spec"] = spec
    return G


def metacyclic_element(G: Group, i: int, j: int) -> int:
    """Id of ``a^i b^j``."""
    return G.mul(G.pow(G.handles["a"], i), G.pow(G.handles["b"], j))


def heisenberg(p: int, cap: int = DEFAULT_CAP) -> Group:
    """Unitriangular 3x3 group over F_p as maps (x, y) -> (x + a, y + c*x + b)
    on the p^2 points x*p + y."""
    if not is_prime(p) or p == 2:
        raise ConstructError(f"heisenberg needs an odd prime, got {p}")
    if p**3 > cap:
        raise ConstructError(f"group too large: {p ** 3} > cap {cap}")
    shift = [((x + 1) % p) * p + y for x in range(p) for y in range(p)]
    shear = [x * p + (y + x) % p for x in range(p) for y in range(p)]
    G = enumerate_group([Permutation(tuple(shift)), Permutation(tuple(shear))], cap=cap, name=f"Heis({p})")
    G.handles["shift"], G.handles["shear"] = G.gen_ids
    return G


def symmetric3() -> Group:
    G = enumerate_group([cycle(0, 1, 2), cycle(0, 1, deg=3)], name="S3")
    return G


def paper_3_9_group(cap: int = DEFAULT_CAP) -> Group:
    """The order-3^9 group of class 7 generated by two permutations of 27 points."""
    k = parse_cycles(GEN_K_3_9, 27)
    x = parse_cycles(GEN_X_3_9, 27)
    G = enumerate_group([k, x], cap=cap, name="G(3^9)")
    G.handles["k"], G.handles["x"] = G.gen_ids
    return G


# -------------------------------------------------------------------- catalogs


def abelian_invariant_lists(n: int) -> list[tuple[int, ...]]:
    """Invariant factor lists of every abelian group of order n (largest last)."""
    def partitions(e, maxpart=None):
        maxpart = e if maxpart is None else maxpart
        if e == 0:
            yield ()
            return
        for part in range(min(e, maxpart), 0, -1):
            for rest in partitions(e - part, part):
                yield (part,) + rest

    per_prime = []
    for p, e in sorted(prime_factors(n).items()) if n > 1 else []:
        per_prime.append([(p, part) for part in partitions(e)])
    out = []

    def combine(idx, chosen):
        if idx == len(per_prime):
            width = max((len(part) for _, part in chosen), default=0)
            invs = []
            for t in range(width):
                v = 1
                for p, part in chosen:
                    if t < len(part):
                        v *= p ** part[t]
                invs.append(v)
            out.append(tuple(sorted(invs)) or (1,))
            return
        for choice in per_prime[idx]:
            combine(idx + 1, chosen + [choice])

    combine(0, [])
    return out if out else [(1,)]


def abelian_invariants(G: Group) -> tuple[int, ...]:
    """Invariants of G/G' in elementary-divisor form (sorted prime powers)."""
    from .structure import derived_subgroup, quotient

    D = derived_subgroup(G)
    A = quotient(G, D).group if D.order > 1 else G
    out = []
    orders = A.orders
    for p in sorted(prime_factors(A.order)) if A.order > 1 else []:
        # number of elements of order dividing p^i determines the p-part
        counts = [1]
        i = 1
        while counts[-1] < p ** prime_factors(A.order)[p]:
            counts.append(int(np.sum((p**i) % orders == 0)))
            i += 1
        # rank at level i: log_p(counts[i]/counts[i-1])
        ranks = [round(math.log(counts[i] // counts[i - 1], p)) for i in range(1, len(counts))]
        for i, rk in enumerate(ranks):
            nxt = ranks[i + 1] if i + 1 < len(ranks) else 0
            out.extend([p ** (i + 1)] * (rk - nxt))
    return tuple(sorted(out))


def fingerprint(G: Group) -> tuple:
    from .structure import lower_central_series

    series = lower_central_series(G)
    hist = tuple(sorted(Counter(map(int, G.orders)).items()))
    return (G.order, abelian_invariants(G), series.nilpotency_class if series.nilpotent else -1, hist)


def _metacyclic_specs_of_order(n: int, bound: int):
    """Metacyclic specs M(r, s, alpha) with r a prime power, alpha != 1, r*s dividing n."""
    for r in range(3, n + 1, 2):
        if n % r or prime_power(r) is None:
            continue
        for s in range(3, n // r + 1, 2):
            if (n // r) % s:
                continue
            for alpha in range(2, s):
                if math.gcd(alpha, s) == 1 and pow(alpha, r, s) == 1:
                    yield r, s, alpha


def catalog_odd_upto(bound: int, cap: int = DEFAULT_CAP) -> list[Group]:
    """Odd-order groups of order < bound built as abelian x metacyclic,
    plus the Heisenberg groups (and their products with abelian groups),
    deduplicated by invariant fingerprint.  Sorted by (order, name)."""
    if bound > 200:
        raise ConstructError(f"catalog bound must be <= 200, got {bound}")
    found: dict[tuple, Group] = {}

    def add(G: Group):
        fp = fingerprint(G)
        if fp not in found:
            found[fp] = G

    for n in range(1, bound, 2):
        for invs in abelian_invariant_lists(n):
            add(abelian(invs, cap))
        for r, s, alpha in _metacyclic_specs_of_order(n, bound):
            M = metacyclic(r, s, alpha, cap)
            rest = n // (r * s)
            for invs in abelian_invariant_lists(rest):
                if rest == 1:
                    add(M)
                else:
                    A = abelian(invs, cap)
                    P = direct_product(M, A, cap, name=f"{M.name}x{A.name}")
                    add(P)
        for p in (3, 5):
            if n % p**3 == 0 and is_prime(p):
                H = heisenberg(p, cap)
                rest = n // p**3
                for invs in abelian_invariant_lists(rest):
                    if rest == 1:
                        add(H)
                    else:
                        A = abelian(invs, cap)
                        add(direct_product(H, A, cap, name=f"{H.name}x{A.name}"))
    return sorted(found.values(), key=lambda G: (G.order, G.name))


def even_controls() -> list[Group]:
    """Small even-order groups used as negative controls."""
    return [cyclic(2), cyclic(4), abelian((2, 2)), cyclic(6), symmetric3()]


def three_groups_upto(max_order: int = 243, cap: int = DEFAULT_CAP) -> list[Group]:
    """3-groups of order <= max_order reachable as abelian x metacyclic or
    Heisenberg(3) x abelian, deduplicated by fingerprint."""
    found: dict[tuple, Group] = {}

    def add(G):
        fp = fingerprint(G)
        found.setdefault(fp, G)

    e = 1
    while 3**e <= max_order:
        n = 3**e
        for invs in abelian_invariant_lists(n):
            add(abelian(invs, cap))
        for r, s, alpha in _metacyclic_specs_of_order(n, n + 1):
            M = metacyclic(r, s, alpha, cap)
            rest = n // (r * s)
            for invs in abelian_invariant_lists(rest):
                add(M if rest == 1 else direct_product(M, abelian(invs, cap), cap, name=f"{M.name}xC{'x'.join(map(str, invs))}"))
        if n >= 27:
            H = heisenberg(3, cap)
            rest = n // 27
            for invs in abelian_invariant_lists(rest):
                add(H if rest == 1 else direct_product(H, abelian(invs, cap), cap, name=f"Heis(3)xC{'x'.join(map(str, invs))}"))
        e += 1
    return sorted(found.values(), key=lambda G: (G.order, G.name))


# ---------------------------------------------------------------- spec grammar


def _split_product(body: str) -> list[str]:
    """Split ``(a)x(b)x(c)`` at top-level ``x`` separators."""
    parts, depth, cur = [], 0, []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch == "(":
            depth += 1
            if depth == 1:
                i += 1
                continue
        elif ch == ")":
            depth -= 1
            if depth == 0:
                parts.append("".join(cur))
                cur = []
                i += 1
                continue
        if depth == 0:
            if ch not in "x \t":
                raise ConstructError(f"bad product spec near {body[i:i + 10]!r}")
        else:
            cur.append(ch)
        if depth < 0:
            raise ConstructError("unbalanced parentheses in product spec")
        i += 1
    if depth != 0:
        raise ConstructError("unbalanced parentheses in product spec")
    if len(parts) < 2:
        raise ConstructError("product needs at least two factors")
    return parts


def parse_group_spec(text: str, cap: int = DEFAULT_CAP, base_dir: Path | None = None) -> Group:
    """Build a group from ``cyclic:n``, ``meta:r,s,alpha``, ``heis:p``,
    ``prod:(spec)x(spec)``, ``perm:@file.cycles`` or ``paper39:``."""
    text = text.strip()
    kind, sep, arg = text.partition(":")
    if not sep:
        raise ConstructError(f"group spec needs 'kind:args', got {text!r}")
    kind = kind.strip().lower()
    arg = arg.strip()
    try:
        if kind == "cyclic":
            return cyclic(int(arg), cap)
        if kind == "meta":
            r, s, alpha = (int(v) for v in arg.split(","))
            return metacyclic(r, s, alpha, cap)
        if kind == "heis":
            return heisenberg(int(arg), cap)
        if kind == "abelian":
            return abelian([int(v) for v in arg.split(",")], cap)
        if kind == "prod":
            parts = _split_product(arg)
            G = parse_group_spec(parts[0], cap, base_dir)
            for part in parts[1:]:
                G = direct_product(G, parse_group_spec(part, cap, base_dir), cap)
            return G
        if kind == "perm":
            if not arg.startswith("@"):
                raise ConstructError("perm spec must be perm:@file")
            path = Path(arg[1:])
            if base_dir is not None and not path.is_absolute():
                path = base_dir / path
            lines = [ln.split("#", 1)[0].strip() for ln in path.read_text().splitlines()]
            lines = [ln for ln in lines if ln]
            if not lines:
                raise ConstructError(f"no permutations in {path}")
            perms = [parse_cycles(ln) for ln in lines]
            deg = max(p.deg for p in perms)
            perms = [parse_cycles(ln, deg) for ln in lines]
            return enumerate_group(perms, cap=cap, name=path.stem)
        if kind == "paper39":
            if arg:
                raise ConstructError("paper39 takes no arguments")
            return paper_3_9_group(cap)
    except ValueError as exc:
        if isinstance(exc, (ConstructError, PermError)):
            raise
        raise ConstructError(f"bad group spec {text!r}: {exc}") from exc
    except OSError as exc:
        raise ConstructError(str(exc)) from exc
    raise ConstructError(f"unknown group kind {kind!r}")
