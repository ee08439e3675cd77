"""Primality testing and integer factorization.

Factoring proceeds by trial division, perfect-power extraction and
Pollard-Brent rho.  A prime factor is marked *certified* when it lies in the
range where the fixed-base Miller-Rabin test is deterministic, or when a
Pocklington certificate can be built for it.  Anything else (probable primes
above that range, composites that resisted rho) is returned uncertified.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt, prod

__all__ = [
    "FactoredInteger",
    "is_prime",
    "is_probable_prime",
    "certify_prime",
    "factorize",
    "iroot",
    "primes_up_to",
]

TRIAL_BOUND = 10**6
# Miller-Rabin with the first 13 prime bases is exact below this bound.
MR_DETERMINISTIC_LIMIT = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@lru_cache(maxsize=4)
def primes_up_to(n: int) -> tuple[int, ...]:
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, n + 1, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def _strong_probable_prime(n: int, a: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas(n: int) -> bool:
    # Selfridge parameter choice
    D = 5
    while True:
        j = _jacobi(D, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
        if D == 13 and isqrt(n) ** 2 == n:
            return False
    P, Q = 1, (1 - D) // 4
    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    inv2 = (n + 1) // 2
    U, V, Qk = 1, P, Q % n
    for bit in bin(d)[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if V == 0:
            return True
    return False


def is_probable_prime(n: int, rounds: int = 8) -> bool:
    """Miller-Rabin (deterministic below 3.3e24), else BPSW plus random rounds."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n == q:
            return True
        if n % q == 0:
            return False
    if n < MR_DETERMINISTIC_LIMIT:
        return all(_strong_probable_prime(n, a) for a in _MR_BASES)
    if not _strong_probable_prime(n, 2) or not _strong_lucas(n):
        return False
    rng = random.Random(n)
    return all(_strong_probable_prime(n, rng.randrange(2, n - 1)) for _ in range(rounds))


def is_prime(n: int) -> bool:
    """Primality for the moderate integers used as levels (probable above 3.3e24)."""
    return is_probable_prime(n)


def _pocklington(n: int, depth: int) -> bool:
    # n - 1 = F * R with the prime factors of F proven; F > sqrt(n) suffices
    fo = _factorize(n - 1, depth + 1)
    known = [q for q, _, c in fo.factors if c]
    F = prod(q**e for q, e, c in fo.factors if c)
    if F * F <= n:
        return False
    for q in known:
        for a in _MR_BASES:
            if pow(a, n - 1, n) != 1:
                return False
            if gcd(pow(a, (n - 1) // q, n) - 1, n) == 1:
                break
        else:
            return False
    return True


def certify_prime(n: int, depth: int = 0) -> bool:
    """True only when n is proven prime."""
    if n < 2 or not is_probable_prime(n):
        return False
    if n < MR_DETERMINISTIC_LIMIT:
        return True
    if depth > 6:
        return False
    return _pocklington(n, depth)


def iroot(n: int, k: int) -> int:
    """floor(n ** (1/k)) for n >= 0."""
    if n < 2 or k == 1:
        return n
    if k == 2:
        return isqrt(n)
    x = 1 << -(-n.bit_length() // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def _perfect_power(n: int) -> tuple[int, int]:
    """Return (b, k) with n = b**k and k maximal."""
    best = (n, 1)
    for k in primes_up_to(n.bit_length()):
        b = iroot(n, k)
        if b > 1 and b**k == n:
            inner, e = _perfect_power(b)
            return inner, e * k
    return best


def _brent(n: int, c: int, x0: int, budget: int) -> int | None:
    y, r, q, g = x0, 1, 1, 1
    batch = 128
    used = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(batch, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += batch
        used += r
        r *= 2
        if used > budget:
            return None
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


def pollard_rho(n: int, iterations: int = 200_000, restarts: int = 6) -> int | None:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    for _ in range(restarts):
        g = _brent(n, rng.randrange(1, n - 1), rng.randrange(0, n), iterations)
        if g is not None:
            return g
    return None


@dataclass(frozen=True)
class FactoredInteger:
    value: int
    factors: tuple[tuple[int, int, bool], ...] = field(default_factory=tuple)

    def __post_init__(self):
        if prod(q**e for q, e, _ in self.factors) != self.value:
            raise ValueError("factorization does not reassemble to value")

    @property
    def complete(self) -> bool:
        return all(c for _, _, c in self.factors)

    def exponent(self, q: int) -> int:
        for base, e, _ in self.factors:
            if base == q:
                return e
        return 0

    def as_pairs(self) -> list[tuple[int, int]]:
        return [(q, e) for q, e, _ in self.factors]

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        parts = []
        for q, e, c in self.factors:
            s = str(q) if e == 1 else f"{q}^{e}"
            parts.append(s if c else s + "(?)")
        return " * ".join(parts)


def _coprime_base(items: dict[int, int]) -> dict[int, int]:
    """Refine {base: exponent} into pairwise coprime bases."""
    items = {b: e for b, e in items.items() if b > 1}
    changed = True
    while changed:
        changed = False
        keys = list(items)
        for i, a in enumerate(keys):
            for b in keys[i + 1 :]:
                g = gcd(a, b)
                if g > 1:
                    ea, eb = items.pop(a), items.pop(b)
                    out: dict[int, int] = {}
                    va, vb = a, b
                    while va % g == 0:
                        va //= g
                        out[g] = out.get(g, 0) + ea
                    while vb % g == 0:
                        vb //= g
                        out[g] = out.get(g, 0) + eb
                    for v, e in ((va, ea), (vb, eb)):
                        if v > 1:
                            out[v] = out.get(v, 0) + e
                    for k, e in out.items():
                        items[k] = items.get(k, 0) + e
                    changed = True
                    break
            if changed:
                break
    return items


def factorize(
    n: int,
    trial_bound: int = TRIAL_BOUND,
    rho_iterations: int = 2_000_000,
    rho_restarts: int = 4,
) -> FactoredInteger:
    """Factor n >= 1.  Factors that could not be proven prime are flagged."""
    return _factorize(n, 0, trial_bound, rho_iterations, rho_restarts)


def _factorize(
    n: int,
    depth: int,
    trial_bound: int = TRIAL_BOUND,
    rho_iterations: int = 2_000_000,
    rho_restarts: int = 4,
) -> FactoredInteger:
    if n < 1:
        raise ValueError("factorize expects a positive integer")
    primes: dict[int, int] = {}
    rest = n
    for q in primes_up_to(trial_bound):
        if q * q > rest:
            break
        if rest % q == 0:
            e = 0
            while rest % q == 0:
                rest //= q
                e += 1
            primes[q] = e
    if 1 < rest < trial_bound * trial_bound:
        primes[rest] = primes.get(rest, 0) + 1
        rest = 1

    stuck: dict[int, int] = {}
    work = [(rest, 1)] if rest > 1 else []
    while work:
        c, e = work.pop()
        if c == 1:
            continue
        if is_probable_prime(c):
            primes[c] = primes.get(c, 0) + e
            continue
        b, k = _perfect_power(c)
        if k > 1:
            work.append((b, e * k))
            continue
        f = pollard_rho(c, rho_iterations, rho_restarts)
        if f is None:
            stuck[c] = stuck.get(c, 0) + e
            continue
        work.append((f, e))
        work.append((c // f, e))

    # pull known primes out of stuck composites, then make those coprime
    refined: dict[int, int] = {}
    for c, e in stuck.items():
        for q in list(primes):
            while c % q == 0:
                c //= q
                primes[q] += e
        if c > 1:
            refined[c] = refined.get(c, 0) + e
    refined = _coprime_base(refined)

    factors = [(q, e, certify_prime(q, depth)) for q, e in primes.items()]
    factors += [(c, e, False) for c, e in refined.items()]
    factors.sort()
    return FactoredInteger(n, tuple(factors))
