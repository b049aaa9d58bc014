"""Commutator collection on words in x and k.

Three independent pieces live here:

* ``PcPresentation``: a polycyclic presentation of the free nilpotent group of
  class ``c`` on ``x, k`` whose generators are the basic commutators (Hall basis)
  in collection order.  Conjugation relations are derived recursively from the
  commutator definitions, and products are normalised by collection from the
  left.  This is the authoritative path for the coefficient table.
* ``hall_collect``: the literal stage-by-stage process on positive words, where
  each letter is an atom carrying a label and at stage ``i`` every instance of
  ``R_i`` is moved left (leftmost first) via ``S R -> R S [S, R]``.  Exponential
  in the word length; used to cross-check the collector and to count labels.
* ``algebra_eval``: the image of a word in the truncated free associative
  algebra ``x -> 1 + X``, ``k -> 1 + K``, used as an oracle.

Commutators are left-normed, ``[a, b] = a^-1 b^-1 a b``.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Sequence

from .numth import kummer_valuation, is_prime, valuation

MAX_CLASS = 8
LETTERS = ("x", "k")


class CollectionError(ValueError):
    pass


# ---------------------------------------------------------------- commutators


@dataclass(frozen=True)
class BasicCommutator:
    """Binary tree over the leaves ``x`` and ``k``."""

    letter: str | None = None
    left: "BasicCommutator | None" = None
    right: "BasicCommutator | None" = None

    @property
    def is_leaf(self) -> bool:
        return self.letter is not None

    @property
    def weight(self) -> int:
        return 1 if self.is_leaf else self.left.weight + self.right.weight

    @property
    def load(self) -> int:
        if self.is_leaf:
            return 1 if self.letter == "x" else 2
        return self.left.load + self.right.load

    def count(self, letter: str) -> int:
        if self.is_leaf:
            return int(self.letter == letter)
        return self.left.count(letter) + self.right.count(letter)

    def __str__(self) -> str:
        if self.is_leaf:
            return self.letter
        head = str(self.left)
        if self.left.is_leaf:
            head = "[" + head
        else:
            head = head[:-1]
        return f"{head},{self.right}]"

    __repr__ = __str__


X_LEAF = BasicCommutator("x")
K_LEAF = BasicCommutator("k")


def bracket(a: BasicCommutator, b: BasicCommutator) -> BasicCommutator:
    return BasicCommutator(None, a, b)


@dataclass(frozen=True)
class HallBasis:
    """Basic commutators of weight <= c in collection order.

    ``definition[m] = (j, i)`` records ``R_m = [R_j, R_i]`` (0-based indices);
    generators have ``None``.
    """

    c: int
    commutators: tuple[BasicCommutator, ...]
    definition: tuple[tuple[int, int] | None, ...]

    def __len__(self) -> int:
        return len(self.commutators)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(r.weight for r in self.commutators)

    def index_of(self, pair: tuple[int, int]) -> int | None:
        return self._pairs().get(pair)

    def _pairs(self) -> dict[tuple[int, int], int]:
        cache = self.__dict__.get("_pair_cache")
        if cache is None:
            cache = {d: m for m, d in enumerate(self.definition) if d is not None}
            object.__setattr__(self, "_pair_cache", cache)
        return cache

    def is_hall_pair(self, j: int, i: int) -> bool:
        """Whether ``[R_j, R_i]`` (j > i) can arise when collecting ``R_i``."""
        if j <= i:
            return False
        d = self.definition[j]
        return d is None or d[1] <= i


def _check_class(c: int) -> None:
    if not isinstance(c, int) or not 1 <= c <= MAX_CLASS:
        raise CollectionError(f"class bound c must be in 1..{MAX_CLASS}, got {c!r}")


@lru_cache(maxsize=None)
def hall_basis(c: int) -> HallBasis:
    """Hall basis on ``x < k`` ordered by weight, then by the index of the
    commutator being collected (``R``), then by the index of ``S`` in ``[S, R]``.

    This is the order in which the commutators first arise when ``R_1, R_2, ...``
    are collected in turn.
    """
    _check_class(c)
    comms: list[BasicCommutator] = [X_LEAF, K_LEAF]
    defs: list[tuple[int, int] | None] = [None, None]
    for w in range(2, c + 1):
        level = []
        for i, r in enumerate(comms):
            for j in range(i + 1, len(comms)):
                s = comms[j]
                if r.weight + s.weight != w:
                    continue
                d = defs[j]
                if d is not None and d[1] > i:
                    continue
                level.append((i, j))
        level.sort()
        for i, j in level:
            comms.append(bracket(comms[j], comms[i]))
            defs.append((j, i))
    return HallBasis(c, tuple(comms), tuple(defs))


# --------------------------------------------------------------------- words

Word = tuple[tuple[int, int], ...]  # (letter index 0=x / 1=k, exponent)


def parse_word(word) -> Word:
    """Accept ``"xkkx"``, ``"x k^-1 X"`` (uppercase = inverse), or pairs."""
    if isinstance(word, str):
        out = []
        text = word.replace("*", " ").replace("{", "").replace("}", "")
        pos = 0
        while pos < len(text):
            ch = text[pos]
            if ch.isspace():
                pos += 1
                continue
            if ch.lower() not in LETTERS:
                raise CollectionError(f"unexpected symbol {ch!r} in word {word!r}")
            letter = LETTERS.index(ch.lower())
            exp = -1 if ch.isupper() else 1
            pos += 1
            if pos < len(text) and text[pos] == "^":
                pos += 1
                start = pos
                if pos < len(text) and text[pos] in "+-":
                    pos += 1
                while pos < len(text) and text[pos].isdigit():
                    pos += 1
                try:
                    exp *= int(text[start:pos])
                except ValueError:
                    raise CollectionError(f"bad exponent in word {word!r}") from None
            out.append((letter, exp))
        return tuple(out)
    out = []
    for item in word:
        if isinstance(item, str):
            out.extend(parse_word(item))
        else:
            letter, exp = item
            if isinstance(letter, str):
                letter = LETTERS.index(letter)
            out.append((int(letter), int(exp)))
    return tuple(out)


def wn_word(n: int) -> Word:
    """``x k^(n-1) x k^(n-2) ... x k x`` as a letter sequence (each exponent 1)."""
    if n < 0:
        raise CollectionError("n must be non-negative")
    out: list[tuple[int, int]] = []
    for i in range(1, n + 1):
        out.append((0, 1))
        out.extend([(1, 1)] * (n - i))
    return tuple(out)


def format_word(word: Word) -> str:
    parts = []
    for letter, exp in word:
        parts.append(LETTERS[letter] if exp == 1 else f"{LETTERS[letter]}^{exp}")
    return " ".join(parts)


# ---------------------------------------------------------- pc presentation


class PcPresentation:
    """Free nilpotent group of class ``c`` on ``x, k`` with the Hall basis as
    polycyclic generators.

    Elements are normal-form exponent vectors ``e`` standing for
    ``R_1^e_1 R_2^e_2 ... R_N^e_N`` (tuples of Python ints).
    """

    def __init__(self, c: int):
        self.basis = hall_basis(c)
        self.c = c
        self.n = len(self.basis)
        self.weights = self.basis.weights
        n = self.n
        # conj[i][j] = g_j^(g_i), conj_inv[i][j] = g_j^(g_i^-1), for j > i
        self._conj: list[dict[int, tuple]] = [dict() for _ in range(n)]
        self._conj_inv: list[dict[int, tuple]] = [dict() for _ in range(n)]
        self._pow_cache: dict[tuple[int, int], list] = {}
        self._derive_relations()

    # -- basic vectors
    def identity(self) -> tuple:
        return (0,) * self.n

    def unit(self, i: int, e: int = 1) -> tuple:
        v = [0] * self.n
        v[i] = e
        return tuple(v)

    def _commutes(self, i: int, j: int) -> bool:
        return self.weights[i] + self.weights[j] > self.c

    # -- relations
    def _derive_relations(self) -> None:
        basis = self.basis
        for i in range(self.n - 1, -1, -1):
            for j in range(i + 1, self.n):
                if self._commutes(i, j):
                    continue
                if basis.is_hall_pair(j, i):
                    m = basis.index_of((j, i))
                    v = [0] * self.n
                    v[j] = 1
                    v[m] = 1
                    self._conj[i][j] = tuple(v)
                    continue
                a, b = basis.definition[j]
                # (g_a^g_i, g_b^g_i) only involve generators above i, so the
                # collector below never needs relations with conjugator i.
                self._conj[i][j] = self.commutator(self.conj_image(i, a, 1), self.conj_image(i, b, 1))
            for j in range(self.n - 1, i, -1):
                if self._commutes(i, j):
                    continue
                tail = list(self._conj[i][j])
                tail[j] = 0
                image_tail = self._apply(lambda g: self.conj_image(i, g, -1), tuple(tail))
                self._conj_inv[i][j] = self.mul(self.unit(j), self.inverse(image_tail))

    def conj_image(self, i: int, j: int, e: int) -> tuple:
        """Normal form of ``g_j^(g_i^e)`` for j > i."""
        if e == 0 or self._commutes(i, j):
            return self.unit(j)
        if e == 1:
            return self._conj[i][j]
        if e == -1:
            return self._conj_inv[i][j]
        return self._power_images(i, e)[j - i - 1]

    def _power_images(self, i: int, e: int) -> list:
        key = (i, e)
        hit = self._pow_cache.get(key)
        if hit is not None:
            return hit
        sign = 1 if e > 0 else -1
        m = abs(e)
        # binary powering of the automorphism y -> y^(g_i^sign)
        result = None
        base = [self.conj_image(i, j, sign) for j in range(i + 1, self.n)]
        while m:
            if m & 1:
                result = base if result is None else self._compose(i, result, base)
            m >>= 1
            if m:
                base = self._compose(i, base, base)
        self._pow_cache[key] = result
        if len(self._pow_cache) > 4096:
            self._pow_cache.clear()
        return result

    def _compose(self, i: int, first: list, second: list) -> list:
        """Images under ``y -> second(first(y))`` for automorphisms given by
        image lists over generators i+1..n-1."""
        off = i + 1
        return [self._apply(lambda g: second[g - off], img) for img in first]

    def _apply(self, image_of, v: tuple) -> tuple:
        acc = self.identity()
        for g, e in enumerate(v):
            if e:
                acc = self.mul(acc, self.power(image_of(g), e))
        return acc

    # -- arithmetic
    def mul_gen(self, u: tuple, i: int, e: int) -> tuple:
        """``u * g_i^e`` in normal form."""
        if e == 0:
            return u
        out = list(u)
        out[i] += e
        tail = [j for j in range(i + 1, self.n) if u[j]]
        if all(self._commutes(i, j) for j in tail):
            return tuple(out)
        # u * g_i^e = prefix * g_i^e * prod_j (g_j^(g_i^e))^(u_j)
        acc = self.identity()
        for j in tail:
            acc = self.mul(acc, self.power(self.conj_image(i, j, e), u[j]))
        out[i + 1 :] = acc[i + 1 :]
        return tuple(out)

    def mul(self, u: tuple, v: tuple) -> tuple:
        for i, e in enumerate(v):
            if e:
                u = self.mul_gen(u, i, e)
        return u

    def inverse(self, u: tuple) -> tuple:
        acc = self.identity()
        for i in range(self.n - 1, -1, -1):
            if u[i]:
                acc = self.mul_gen(acc, i, -u[i])
        return acc

    def power(self, u: tuple, m: int) -> tuple:
        if m < 0:
            u, m = self.inverse(u), -m
        nz = [i for i, e in enumerate(u) if e]
        if not nz:
            return u
        if len(nz) == 1 or all(self._commutes(a, b) for a in nz for b in nz if a < b):
            return tuple(e * m for e in u)
        result = self.identity()
        base = u
        while m:
            if m & 1:
                result = self.mul(result, base)
            m >>= 1
            if m:
                base = self.mul(base, base)
        return result

    def commutator(self, u: tuple, v: tuple) -> tuple:
        return self.mul(self.mul(self.inverse(u), self.inverse(v)), self.mul(u, v))

    def eval_word(self, word) -> tuple:
        acc = self.identity()
        for letter, exp in parse_word(word):
            acc = self.mul_gen(acc, letter, exp)
        return acc


@lru_cache(maxsize=None)
def presentation(c: int) -> PcPresentation:
    _check_class(c)
    return PcPresentation(c)


# ------------------------------------------------------------ collected words


@dataclass(frozen=True)
class CollectedWord:
    basis: tuple[BasicCommutator, ...]
    exponents: tuple[int, ...]
    class_bound: int

    def nonzero(self) -> list[tuple[BasicCommutator, int]]:
        return [(r, e) for r, e in zip(self.basis, self.exponents) if e]

    def __str__(self) -> str:
        parts = [f"{r}^{e}" if e != 1 else str(r) for r, e in self.nonzero()]
        return " ".join(parts) if parts else "1"


def collect(word, c: int, method: str = "pc") -> CollectedWord:
    """Collected normal form of ``word`` modulo the (c+1)-th term of the lower
    central series.

    ``method="pc"`` uses the polycyclic collector; ``method="hall"`` runs the
    literal stage-by-stage process (positive words only, small inputs).
    """
    _check_class(c)
    w = parse_word(word)
    if method == "pc":
        exps = presentation(c).eval_word(w)
    elif method == "hall":
        exps = hall_collect(w, c).exponents
    else:
        raise CollectionError(f"unknown collection method {method!r}")
    return CollectedWord(hall_basis(c).commutators, tuple(exps), c)


def collect_wn(n: int, c: int) -> CollectedWord:
    """Collected form of ``w_n``, built by the recurrence ``w_n = x k^(n-1) w_(n-1)``."""
    _check_class(c)
    pc = presentation(c)
    return CollectedWord(pc.basis.commutators, _wn_vector(n, c), c)


@lru_cache(maxsize=64)
def _wn_vector(n: int, c: int) -> tuple:
    pc = presentation(c)
    if n == 0:
        return pc.identity()
    prev = _wn_vector(n - 1, c)
    head = pc.mul_gen(pc.unit(0), 1, n - 1)
    return pc.mul(head, prev)


# ------------------------------------------------------ literal collection


@dataclass
class HallCollection:
    exponents: list[int]
    labels: list[list[tuple[int, ...]]]  # labels of the surviving instances of each R_i


def _wn_labels(n: int) -> list[tuple[int, tuple[int, ...]]]:
    atoms = []
    for a in range(1, n + 1):
        atoms.append((0, (a,)))
        for b in range(a + 1, n + 1):
            atoms.append((1, (a, b)))
    return atoms


def hall_collect(word, c: int, labelled_atoms=None) -> HallCollection:
    """Literal collection: at stage i move each R_i left (leftmost instance
    first), replacing ``S R_i`` by ``R_i S [S, R_i]``.  New commutators inherit
    the concatenated labels.  Commutators of weight > c are discarded."""
    _check_class(c)
    basis = hall_basis(c)
    weights = basis.weights
    if labelled_atoms is None:
        atoms = []
        for pos, (letter, exp) in enumerate(parse_word(word)):
            if exp < 0:
                raise CollectionError("literal collection handles positive words only")
            atoms.extend([(letter, (pos,))] * exp)
    else:
        atoms = list(labelled_atoms)
    exps = [0] * len(basis)
    labels: list[list] = [[] for _ in range(len(basis))]
    rest = atoms
    for i in range(len(basis)):
        new_rest: list = []
        for atom in rest:
            if atom[0] != i:
                new_rest.append(atom)
                continue
            exps[i] += 1
            labels[i].append(atom[1])
            moved: list = []
            for s in new_rest:
                moved.append(s)
                if weights[s[0]] + weights[i] <= c:
                    m = basis.index_of((s[0], i))
                    if m is None:
                        raise CollectionError(
                            f"non-basic commutator [{basis.commutators[s[0]]},{basis.commutators[i]}] arose"
                        )
                    moved.append((m, s[1] + atom[1]))
            new_rest = moved
        rest = new_rest
    if rest:
        raise CollectionError("uncollected atoms remain")
    return HallCollection(exps, labels)


def hall_collect_wn(n: int, c: int) -> HallCollection:
    """Literal collection of ``w_n`` with x labelled ``(a)`` and k labelled ``(a, b)``."""
    return hall_collect(None, c, labelled_atoms=_wn_labels(n))


# -------------------------------------------------------- truncated algebra


class TruncatedAlgebraElement:
    """Element of Z<X, K> modulo words of length > c.  Keys are tuples over {0, 1}."""

    __slots__ = ("c", "coeffs")

    def __init__(self, c: int, coeffs: dict | None = None):
        self.c = c
        self.coeffs = {w: v for w, v in (coeffs or {}).items() if v}

    @classmethod
    def one(cls, c: int) -> "TruncatedAlgebraElement":
        return cls(c, {(): 1})

    @classmethod
    def letter(cls, c: int, letter: int) -> "TruncatedAlgebraElement":
        return cls(c, {(): 1, (letter,): 1})

    def __mul__(self, other: "TruncatedAlgebraElement") -> "TruncatedAlgebraElement":
        c = self.c
        out: dict = {}
        for w1, a in self.coeffs.items():
            room = c - len(w1)
            for w2, b in other.coeffs.items():
                if len(w2) <= room:
                    key = w1 + w2
                    out[key] = out.get(key, 0) + a * b
        return TruncatedAlgebraElement(c, out)

    def __sub__(self, other):
        out = dict(self.coeffs)
        for w, v in other.coeffs.items():
            out[w] = out.get(w, 0) - v
        return TruncatedAlgebraElement(self.c, out)

    def __eq__(self, other) -> bool:
        return isinstance(other, TruncatedAlgebraElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def power(self, e: int) -> "TruncatedAlgebraElement":
        """``(1 + Y)^e = sum_t C(e, t) Y^t`` for a unit with constant term 1."""
        if self.coeffs.get((), 0) != 1:
            raise CollectionError("power() needs constant term 1")
        y = self - TruncatedAlgebraElement.one(self.c)
        out = TruncatedAlgebraElement.one(self.c)
        term = TruncatedAlgebraElement.one(self.c)
        for t in range(1, self.c + 1):
            term = term * y
            if not term.coeffs:
                break
            coef = _gen_binom(e, t)
            if coef:
                out = out + term.scaled(coef)
        return out

    def inverse(self) -> "TruncatedAlgebraElement":
        return self.power(-1)

    def scaled(self, s: int) -> "TruncatedAlgebraElement":
        return TruncatedAlgebraElement(self.c, {w: v * s for w, v in self.coeffs.items()})

    def __add__(self, other):
        out = dict(self.coeffs)
        for w, v in other.coeffs.items():
            out[w] = out.get(w, 0) + v
        return TruncatedAlgebraElement(self.c, out)

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for w in sorted(self.coeffs, key=lambda w: (len(w), w)):
            v = self.coeffs[w]
            mono = "".join("XK"[a] for a in w) or "1"
            terms.append(f"{v}*{mono}" if v != 1 else mono)
        return " + ".join(terms)


def _gen_binom(e: int, t: int) -> int:
    if e >= 0:
        return comb(e, t)
    return (-1) ** t * comb(t - e - 1, t)


def algebra_eval(word, c: int) -> TruncatedAlgebraElement:
    """Image of a word under ``x -> 1 + X``, ``k -> 1 + K`` truncated at degree c."""
    _check_class(c)
    gens = [TruncatedAlgebraElement.letter(c, 0), TruncatedAlgebraElement.letter(c, 1)]
    acc = TruncatedAlgebraElement.one(c)
    for letter, exp in parse_word(word):
        acc = acc * gens[letter].power(exp)
    return acc


def commutator_image(r: BasicCommutator, c: int) -> TruncatedAlgebraElement:
    if r.is_leaf:
        return TruncatedAlgebraElement.letter(c, LETTERS.index(r.letter))
    a = commutator_image(r.left, c)
    b = commutator_image(r.right, c)
    return a.inverse() * b.inverse() * a * b


def collected_image(cw: CollectedWord) -> TruncatedAlgebraElement:
    c = cw.class_bound
    acc = TruncatedAlgebraElement.one(c)
    for r, e in cw.nonzero():
        acc = acc * commutator_image(r, c).power(e)
    return acc


def verify_collection(word, c: int, collected: CollectedWord | None = None) -> bool:
    """Check that the collected form and the word agree in the truncated algebra."""
    cw = collected if collected is not None else collect(word, c)
    return algebra_eval(word, c) == collected_image(cw)


# ------------------------------------------------------ binomial polynomials


@dataclass(frozen=True)
class BinomialPolynomial:
    """``f(n) = sum_j coeffs[j-1] * C(n, j)``."""

    coeffs: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.coeffs)

    def __call__(self, n: int) -> int:
        return poly_eval(self, n)


def poly_eval(p: BinomialPolynomial | Sequence[int], n: int) -> int:
    coeffs = p.coeffs if isinstance(p, BinomialPolynomial) else tuple(p)
    if n < 0:
        raise CollectionError("n must be non-negative")
    return sum(a * comb(n, j) for j, a in enumerate(coeffs, start=1))


def binomial_coefficients(values: Sequence[int]) -> tuple[int, ...]:
    """Recover a_1..a_m from f(1..m): a_j = f(j) - sum_{l<j} a_l C(j, l)."""
    out: list[int] = []
    for j, fj in enumerate(values, start=1):
        out.append(fj - sum(a * comb(j, l) for l, a in enumerate(out, start=1)))
    return tuple(out)


@dataclass(frozen=True)
class TableRow:
    index: int  # 1-based
    commutator: BasicCommutator
    load: int
    poly: BinomialPolynomial


def max_load(c: int) -> int:
    return max(r.load for r in hall_basis(c).commutators)


@lru_cache(maxsize=None)
def coefficient_table(c: int) -> tuple[TableRow, ...]:
    """Rows ``(R_i, m_i, a_i1..a_im_i)`` for every basic commutator of weight <= c."""
    if not 1 <= c <= 7:
        raise CollectionError(f"coefficient table supports 1 <= c <= 7, got {c}")
    basis = hall_basis(c)
    m = max_load(c)
    values = [_wn_vector(j, c) for j in range(1, m + 1)]
    rows = []
    for i, r in enumerate(basis.commutators):
        f = [values[j - 1][i] for j in range(1, m + 1)]
        coeffs = binomial_coefficients(f[: r.load])
        poly = BinomialPolynomial(coeffs)
        # every computed value must already be fitted by a polynomial of degree m_i
        for j in range(r.load + 1, m + 1):
            if poly_eval(poly, j) != f[j - 1]:
                raise CollectionError(f"exponent of {r} at n={j} exceeds its load")
        rows.append(TableRow(i + 1, r, r.load, poly))
    return tuple(rows)


def table_records(c: int) -> list[dict]:
    return [
        {
            "i": row.index,
            "commutator": str(row.commutator),
            "m": row.load,
            "coefficients": list(row.poly.coeffs),
        }
        for row in coefficient_table(c)
    ]


def table_csv(c: int) -> str:
    width = max_load(c)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["i", "R_i", "m_i"] + [f"a_i{j}" for j in range(1, width + 1)])
    for row in coefficient_table(c):
        cells = [str(a) for a in row.poly.coeffs] + [""] * (width - row.load)
        writer.writerow([row.index, str(row.commutator), row.load] + cells)
    return buf.getvalue()


def table_json(c: int) -> str:
    return json.dumps({"c": c, "rows": table_records(c)}, indent=1)


# --------------------------------------------------------- divisibility


@dataclass(frozen=True)
class DivisibilityLine:
    commutator: str
    weight: int
    load: int
    value: int  # f_i(n)
    valuation: int | None  # p-adic valuation of f_i(n); None for zero
    required: int  # modulus the witness argument needs
    divides: bool
    residual: tuple[tuple[int, int], ...]  # (j, a_ij) terms not killed by the modulus


@dataclass(frozen=True)
class DivisibilityReport:
    p: int
    e: int
    c: int
    n: int
    lines: tuple[DivisibilityLine, ...]

    @property
    def all_divide(self) -> bool:
        return all(line.divides for line in self.lines)

    def survivors(self, modulus: int | None = None) -> list[tuple[str, int]]:
        """Commutators whose exponent is not a multiple of the required modulus,
        with the surviving coefficient reduced mod ``modulus`` when given."""
        out = []
        for line in self.lines:
            if not line.residual:
                continue
            coef = sum(a for _, a in line.residual)
            if modulus is not None:
                coef %= modulus
                if coef == 0:
                    continue
            out.append((line.commutator, coef))
        return out


def theorem_divisibility_report(p: int, e: int, c: int) -> DivisibilityReport:
    """Exact p-adic bookkeeping for the exponents ``f_i(p^e)``.

    Weight-one generators need ``n | f_i(n)``; every other commutator involves k
    and needs ``(n/p) | f_i(n)``.  ``residual`` lists the binomial terms
    ``a_ij C(n, j)`` that are not multiples of the required modulus.
    """
    if not is_prime(p) or p == 2:
        raise CollectionError(f"p must be an odd prime, got {p}")
    if e < 1:
        raise CollectionError("e must be positive")
    if not 1 <= c <= 7:
        raise CollectionError(f"divisibility report supports c <= 7, got {c}")
    n = p**e
    lines = []
    for row in coefficient_table(c):
        r = row.commutator
        required = n if r.weight == 1 else n // p
        value = poly_eval(row.poly, n)
        residual = []
        for j, a in enumerate(row.poly.coeffs, start=1):
            if a == 0 or j > n:
                continue
            if (a * comb(n, j)) % required:
                residual.append((j, a))
        lines.append(
            DivisibilityLine(
                str(r), r.weight, row.load, value, valuation(value, p), required,
                value % required == 0, tuple(residual),
            )
        )
    return DivisibilityReport(p, e, c, n, tuple(lines))


def kummer_term_valuations(n: int, p: int, upto: int) -> dict[int, int]:
    return {j: kummer_valuation(n, j, p).valuation for j in range(1, min(upto, n) + 1)}
