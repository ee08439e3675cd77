"""Exact rational helpers, Bernoulli numbers and irregularity data."""
from __future__ import annotations

import threading
from fractions import Fraction
from math import comb, gcd

from .factor import is_prime

__all__ = [
    "bernoulli",
    "bernoulli_poly2",
    "bernoulli_mod_p",
    "irregular_pairs",
    "index_of_irregularity",
    "kummer_congruence_check",
    "require_prime",
]

_B_LOCK = threading.Lock()
# even-index Bernoulli numbers b_0, b_2, b_4, ...
_B_EVEN: list[Fraction] = [Fraction(1)]


def require_prime(p: int, minimum: int = 5) -> None:
    if not isinstance(p, int) or p < minimum or not is_prime(p):
        raise ValueError(f"expected a prime >= {minimum}, got {p!r}")


def _extend_even(k: int) -> None:
    # recurrence sum_{i<=n} C(n+1, i) b_i = 0 with b_1 = -1/2, odd terms >= 3 vanish
    with _B_LOCK:
        while len(_B_EVEN) <= k:
            n = 2 * len(_B_EVEN)
            s = Fraction(-(n + 1), 2)
            for i, b in enumerate(_B_EVEN):
                s += comb(n + 1, 2 * i) * b
            _B_EVEN.append(-s / (n + 1))


def bernoulli(n: int) -> Fraction:
    """Return the Bernoulli number b_n (convention b_1 = -1/2)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 1:
        return Fraction(-1, 2)
    if n % 2:
        return Fraction(0)
    k = n // 2
    if k >= len(_B_EVEN):
        _extend_even(k)
    return _B_EVEN[k]


def bernoulli_poly2(u) -> Fraction:
    """Second Bernoulli polynomial B_2(u) = u^2 - u + 1/6, exactly."""
    u = Fraction(u)
    return u * u - u + Fraction(1, 6)


def bernoulli_mod_p(p: int, nmax: int) -> dict[int, int]:
    """Residues b_n mod p for even n <= nmax, via the recurrence reduced mod p.

    Only valid while every denominator met is prime to p, i.e. nmax < p - 1.
    """
    if nmax >= p - 1:
        raise ValueError("recurrence mod p breaks down at n = p - 1")
    out = {0: 1}
    half = (p + 1) // 2  # 1/2 mod p
    for n in range(2, nmax + 1, 2):
        # row C(n+1, i) mod p for i = 0..n
        s = (n + 1) * (p - half)  # C(n+1, 1) * b_1
        for i in range(0, n, 2):
            s += comb(n + 1, i) * out[i]
        out[n] = (-s * pow(n + 1, -1, p)) % p
    return out


def irregular_pairs(p: int) -> list[int]:
    """Even n in [2, p-3] with p dividing the numerator of b_n."""
    require_prime(p)
    residues = bernoulli_mod_p(p, p - 3)
    return [n for n in range(2, p - 2, 2) if residues[n] == 0]


def index_of_irregularity(p: int) -> int:
    return len(irregular_pairs(p))


def kummer_congruence_check(n: int, p: int) -> bool:
    """Check b_{n+p-1}/(n+p-1) == b_n/n mod p using exact Bernoulli numbers."""
    require_prime(p, 3)
    if n <= 0 or n % 2 or n % (p - 1) == 0 or (n + p - 1) % (p - 1) == 0:
        raise ValueError(f"Kummer congruence not applicable for n={n}, p={p}")
    lhs = bernoulli(n + p - 1) / (n + p - 1)
    rhs = bernoulli(n) / n
    diff = lhs - rhs
    # both sides are p-integral here, so the test is on the numerator
    if diff.denominator % p == 0:
        return False
    return diff.numerator % p == 0


def frac_mod(x: Fraction, p: int) -> int:
    """Reduce a p-integral rational modulo p."""
    if x.denominator % p == 0:
        raise ZeroDivisionError(f"{x} is not {p}-integral")
    return x.numerator * pow(x.denominator, -1, p) % p


def vsc_denominator(n: int) -> int:
    """Product of primes q with (q - 1) | n (von Staudt-Clausen prediction)."""
    out = 1
    for d in range(1, n + 1):
        if n % d == 0 and is_prime(d + 1):
            out *= d + 1
    return out


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b
