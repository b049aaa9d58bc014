"""Small exact number theory: Kummer carries, multiplicative orders, metacyclic sums."""
from __future__ import annotations

import math
from dataclasses import dataclass


class NumberTheoryError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> dict[int, int]:
    """Trial-division factorisation ``{p: e}`` of a positive integer."""
    if n < 1:
        raise NumberTheoryError(f"cannot factor {n}")
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(n: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` if ``n = p**e`` with ``e >= 1``, else None."""
    fac = prime_factors(n) if n > 1 else {}
    if len(fac) != 1:
        return None
    ((p, e),) = fac.items()
    return p, e


def valuation(m: int, p: int) -> int | None:
    """p-adic valuation of an integer; None stands for +infinity (m == 0)."""
    if m == 0:
        return None
    m = abs(m)
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


@dataclass(frozen=True)
class ValuationResult:
    n: int
    j: int
    p: int
    carries: int
    valuation: int


def kummer_valuation(n: int, j: int, p: int) -> ValuationResult:
    """p-adic valuation of C(n, j) as the number of carries in (n - j) + j, base p."""
    if not 0 <= j <= n:
        raise NumberTheoryError(f"need 0 <= j <= n, got j={j}, n={n}")
    if not is_prime(p):
        raise NumberTheoryError(f"{p} is not prime")
    a, b = n - j, j
    carry = 0
    carries = 0
    while a or b or carry:
        s = a % p + b % p + carry
        carry = 1 if s >= p else 0
        carries += carry
        a //= p
        b //= p
    return ValuationResult(n, j, p, carries, carries)


def ord_mod(alpha: int, s: int) -> int:
    """Least i >= 1 with alpha**i == 1 (mod s)."""
    if s < 1:
        raise NumberTheoryError("modulus must be positive")
    if s == 1:
        return 1
    if math.gcd(alpha, s) != 1:
        raise NumberTheoryError(f"gcd({alpha}, {s}) != 1")
    a = alpha % s
    x, i = a, 1
    while x != 1:
        x = x * a % s
        i += 1
    return i


def metacyclic_sums(s: int, alpha: int) -> tuple[int, int]:
    """Return (sum alpha^l, sum l*alpha^l) over 0 <= l < s, both reduced mod s.

    Requires s odd and alpha^s == 1 (mod s); under that hypothesis both sums vanish.
    """
    if s < 1 or s % 2 == 0:
        raise NumberTheoryError(f"s must be a positive odd integer, got {s}")
    if pow(alpha, s, s) != 1 % s:
        raise NumberTheoryError(f"alpha^s != 1 (mod s) for alpha={alpha}, s={s}")
    sum_a = 0
    sum_b = 0
    term = 1 % s
    for ell in range(s):
        sum_a = (sum_a + term) % s
        sum_b = (sum_b + ell * term) % s
        term = term * alpha % s
    return sum_a, sum_b


def dirichlet_pair(p: int, bound: int) -> tuple[int, int] | None:
    """Least prime q <= bound with q == 1 (mod p), and the least alpha with
    ord_{pq}(alpha) = p and alpha == 1 (mod p).  None if no such q exists."""
    if p < 3 or not is_prime(p):
        raise NumberTheoryError(f"{p} is not an odd prime")
    for q in range(p + 1, bound + 1):
        if q % p != 1 or not is_prime(q):
            continue
        s = p * q
        for alpha in range(2, s):
            if alpha % p == 1 and math.gcd(alpha, s) == 1 and ord_mod(alpha, s) == p:
                return q, alpha
    return None


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out
