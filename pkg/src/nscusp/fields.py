"""Arithmetic in F_p and F_{p^2} = F_p[t]/(t^2 - r)."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

from .arith import require_prime
from .factor import factorize

__all__ = [
    "Fp2Element",
    "Fp2Context",
    "build_context",
    "trace",
    "norm",
    "half_system",
    "norm_class_index",
]


class Fp2Element(NamedTuple):
    """a + b*t with coordinates reduced mod p."""

    a: int
    b: int


@dataclass(frozen=True)
class Fp2Context:
    p: int
    r: int
    g: Fp2Element
    m: int
    # F_p^* element -> exponent i with (element mod +-1) = w^i, w = class of N(g)
    w_index: dict[int, int]

    def mul(self, x: Fp2Element, y: Fp2Element) -> Fp2Element:
        p = self.p
        return Fp2Element(
            (x.a * y.a + self.r * x.b * y.b) % p, (x.a * y.b + x.b * y.a) % p
        )

    def pow(self, x: Fp2Element, e: int) -> Fp2Element:
        return _pow(x, e, self.p, self.r)

    def neg(self, x: Fp2Element) -> Fp2Element:
        return Fp2Element(-x.a % self.p, -x.b % self.p)

    @property
    def w(self) -> int:
        """Representative in F_p^* of the generator w of H."""
        return norm(self.g, self)

    @cached_property
    def dlog(self) -> dict[Fp2Element, int]:
        """Discrete logarithm table of F_{p^2}^* in base g."""
        table = {}
        x = Fp2Element(1, 0)
        for k in range(self.p * self.p - 1):
            table[x] = k
            x = self.mul(x, self.g)
        return table

    def elements(self):
        p = self.p
        for a in range(p):
            for b in range(p):
                if a or b:
                    yield Fp2Element(a, b)


def _pow(x: Fp2Element, e: int, p: int, r: int) -> Fp2Element:
    ra, rb = 1, 0
    a, b = x
    while e:
        if e & 1:
            ra, rb = (ra * a + r * rb * b) % p, (ra * b + rb * a) % p
        a, b = (a * a + r * b * b) % p, (2 * a * b) % p
        e >>= 1
    return Fp2Element(ra, rb)


def _smallest_nonresidue(p: int) -> int:
    for r in range(2, p):
        if pow(r, (p - 1) // 2, p) == p - 1:
            return r
    raise ValueError(f"no quadratic non-residue mod {p}")


def build_context(p: int, r: int | None = None) -> Fp2Context:
    """Deterministic model of F_{p^2} with a generator g of the unit group.

    ``r`` overrides the non-residue (the default is the smallest one); the
    generator is the lexicographically smallest (a, b) of full order.
    """
    require_prime(p)
    if r is None:
        r = _smallest_nonresidue(p)
    elif pow(r, (p - 1) // 2, p) != p - 1:
        raise ValueError(f"{r} is a square mod {p}")
    order = p * p - 1
    cofactors = [order // q for q, _, _ in factorize(order).factors]
    g = None
    for a in range(p):
        for b in range(1, p):
            x = Fp2Element(a, b)
            if all(_pow(x, c, p, r) != (1, 0) for c in cofactors):
                g = x
                break
        if g is not None:
            break
    m = (p - 1) // 2
    w = (g.a * g.a - r * g.b * g.b) % p
    w_index: dict[int, int] = {}
    x = 1
    for i in range(m):
        w_index[x] = i
        w_index[p - x] = i
        x = x * w % p
    if len(w_index) != p - 1:
        raise AssertionError("norm of the generator does not generate H")
    return Fp2Context(p=p, r=r, g=g, m=m, w_index=w_index)


def trace(x: Fp2Element, p: int) -> int:
    """Tr(a + b t) = 2a, since the conjugate of t is -t."""
    return 2 * x.a % p


def norm(x: Fp2Element, ctx: Fp2Context) -> int:
    if not (x.a % ctx.p or x.b % ctx.p):
        raise ValueError("norm of zero")
    return (x.a * x.a - ctx.r * x.b * x.b) % ctx.p


def half_system(ctx: Fp2Context) -> list[Fp2Element]:
    """One representative per class of F_{p^2}^*/{+-1}, the lexicographically smaller."""
    return [x for x in ctx.elements() if x <= ctx.neg(x)]


def norm_class_index(x: Fp2Element, ctx: Fp2Context) -> int:
    return ctx.w_index[norm(x, ctx)]
