"""Order and structure of the cuspidal class group by two independent routes.

* product formula: (24 / ((p-1) gcd(12, p+1))) * prod_{j=1}^{m-1} f(zeta_m^j),
  where the product is Res((X^m - 1)/(X - 1), F) / D^(m-1) for F = D f;
* lattice route: the quotient R_0 / R_d theta, read off a Smith normal form.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, prod

from .arith import require_prime
from .factor import FactoredInteger, factorize
from .fields import build_context
from .polyres import resultant
from .snf import RankDeficientError, elementary_divisors
from .stickelberger import ClassSumPolynomial, class_sums, stickelberger_lattice, theta

__all__ = [
    "ClassGroupStructure",
    "HardError",
    "PathDisagreement",
    "order_by_resultant",
    "order_by_snf",
    "compute",
    "RankDeficientError",
]

log = logging.getLogger(__name__)


class HardError(ArithmeticError):
    """An internal consistency check failed."""


class PathDisagreement(HardError):
    pass


@dataclass(frozen=True)
class ClassGroupStructure:
    p: int
    order: int
    elementary_divisors: tuple[int, ...]
    factored_order: FactoredInteger | None
    method_agreement: bool

    def p_part_exponents(self, q: int | None = None) -> list[int]:
        """Exponents of q (default p) in each elementary divisor, nonzero only."""
        q = self.p if q is None else q
        out = []
        for d in self.elementary_divisors:
            e = 0
            while d % q == 0:
                d //= q
                e += 1
            if e:
                out.append(e)
        return out


def trivial_factor(p: int) -> Fraction:
    return Fraction(24, (p - 1) * gcd(12, p + 1))


def order_by_resultant(csp: ClassSumPolynomial) -> Fraction:
    """Product formula evaluated through a resultant; exact rational."""
    m, p = csp.m, csp.p
    phi = [1] * m  # 1 + X + ... + X^(m-1)
    res = resultant(phi, list(csp.scaled_coeffs))
    value = trivial_factor(p) * Fraction(res, csp.denominator ** (m - 1))
    return value


def order_by_snf(lattice: list[list[int]], m: int, p: int = 0) -> ClassGroupStructure:
    if len(lattice) != m or any(len(r) != m - 1 for r in lattice):
        raise ValueError("lattice must be m x (m-1)")
    divs = elementary_divisors(lattice) if m > 1 else []
    return ClassGroupStructure(
        p=p,
        order=prod(divs),
        elementary_divisors=tuple(divs),
        factored_order=None,
        method_agreement=False,
    )


@lru_cache(maxsize=None)
def compute(p: int, factor: bool = True) -> ClassGroupStructure:
    """Run both routes for level p, reconcile, and factor the order."""
    require_prime(p)
    ctx = build_context(p)
    csp = class_sums(ctx)
    th = theta(ctx, csp)
    by_res = order_by_resultant(csp)
    if by_res.denominator != 1:
        raise HardError(f"p={p}: product formula gave non-integer {by_res}")
    lattice = stickelberger_lattice(ctx, th)
    snf = order_by_snf(lattice, ctx.m, p)
    if abs(by_res) != snf.order:
        raise PathDisagreement(
            f"p={p}: resultant order {by_res} != SNF order {snf.order}; "
            f"elementary divisors {snf.elementary_divisors}; "
            f"class sums {csp.scaled_coeffs} / {csp.denominator}"
        )
    if by_res < 0:
        log.debug("p=%d: product formula is negative (%s)", p, by_res)
    fo = factorize(snf.order) if factor else None
    return ClassGroupStructure(
        p=p,
        order=snf.order,
        elementary_divisors=snf.elementary_divisors,
        factored_order=fo,
        method_agreement=True,
    )
