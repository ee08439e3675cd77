"""p-adic eigencomponents of the Stickelberger element.

For a character psi of H the eigenvalue S_psi = (p/2) sum_i c_i psi(w^i) and
the Bernoulli number B'_{2,phi^j} = B_{2, omega^{4j}} are evaluated with
Teichmuller character values modulo a power of p.  Their valuations give the
p-part of the class group one cyclic piece at a time.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .arith import bernoulli_mod_p, irregular_pairs, require_prime
from .classnumber import ClassGroupStructure, HardError
from .factor import FactoredInteger, iroot
from .fields import build_context
from .stickelberger import ClassSumPolynomial, class_sums

__all__ = [
    "InsufficientPrecision",
    "PadicNumber",
    "Classification",
    "LangataRow",
    "ValuationReport",
    "teichmuller",
    "bprime2",
    "s_phi",
    "bernoulli_residue",
    "verify_langata",
    "classify",
    "vonstaudt_congruence_check",
    "q_parity_check",
    "floor_exponent",
]

DEFAULT_PRECISION = 4
MAX_PRECISION = 16


class InsufficientPrecision(ArithmeticError):
    pass


def _vp(x: int, p: int) -> int:
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class PadicNumber:
    """p^valuation * unit, the unit known mod p^precision.

    With ``zero`` set the value was indistinguishable from 0: it is only known
    to be divisible by p^valuation.
    """

    p: int
    valuation: int
    unit: int
    precision: int
    zero: bool = False

    @classmethod
    def from_residue(cls, x: int, p: int, abs_prec: int, shift: int = 0) -> "PadicNumber":
        """The number x / p^shift, where x is known modulo p^abs_prec."""
        mod = p**abs_prec
        x %= mod
        if x == 0:
            return cls(p, abs_prec - shift, 0, 0, zero=True)
        v = _vp(x, p)
        k = abs_prec - v
        return cls(p, v - shift, (x // p**v) % p**k, k)

    def ord(self) -> int:
        if self.zero:
            raise InsufficientPrecision(
                f"value is 0 mod {self.p}^{self.valuation}; valuation unknown"
            )
        return self.valuation

    def residue(self) -> int:
        """Value mod p (requires a p-integral value)."""
        if self.zero:
            if self.valuation >= 1:
                return 0
            raise InsufficientPrecision("not enough precision for a residue")
        if self.valuation < 0:
            raise ValueError("value is not p-integral")
        return 0 if self.valuation else self.unit % self.p

    def __mul__(self, other: "PadicNumber") -> "PadicNumber":
        if self.p != other.p:
            raise ValueError("different primes")
        if self.zero or other.zero:
            raise InsufficientPrecision("product with an unresolved zero")
        k = min(self.precision, other.precision)
        return PadicNumber(
            self.p, self.valuation + other.valuation, self.unit * other.unit % self.p**k, k
        )

    def congruent(self, other: "PadicNumber", k: int) -> bool:
        """Equality of two units-times-powers modulo p^k (absolute)."""
        a = self.to_int(k)
        b = other.to_int(k)
        return (a - b) % self.p**k == 0

    def to_int(self, k: int) -> int:
        """Representative mod p^k of a p-integral value."""
        if self.zero:
            if self.valuation >= k:
                return 0
            raise InsufficientPrecision("not enough precision")
        if self.valuation < 0:
            raise ValueError("value is not p-integral")
        if self.valuation + self.precision < k:
            raise InsufficientPrecision("not enough precision")
        return self.p**self.valuation * self.unit % self.p**k


def _teich(a: int, p: int, k: int) -> int:
    mod = p**k
    x = a % mod
    while True:
        y = pow(x, p, mod)
        if y == x:
            return x
        x = y


def teichmuller(a: int, p: int, k: int) -> PadicNumber:
    """omega(a): the (p-1)-th root of unity congruent to a, mod p^k."""
    if a % p == 0:
        raise ValueError("Teichmuller lift of 0 mod p")
    return PadicNumber(p, 0, _teich(a, p, k), k)


@lru_cache(maxsize=None)
def _context_data(p: int) -> tuple[int, ClassSumPolynomial]:
    ctx = build_context(p)
    return ctx.w, class_sums(ctx)


def s_phi(j: int, p: int, k: int = DEFAULT_PRECISION) -> PadicNumber:
    """S_{phi^j} = (p/2) sum_i c_i phi^j(w^i), known to k digits past its p^-1 scale."""
    require_prime(p)
    m = (p - 1) // 2
    if not 1 <= j <= m - 1:
        raise ValueError(f"j={j} outside 1..{m - 1}")
    w, csp = _context_data(p)
    N = k + 1
    mod = p**N
    # phi(w) = omega(w)^2, well defined on +-classes
    step = pow(_teich(w, p, N), 2 * j, mod)
    x, acc = 0, 1
    for g in csp.scaled_coeffs:
        x += g * acc
        acc = acc * step % mod
    # S = x / D with D | 12p
    D = csp.denominator
    shift = _vp(D, p)
    unit_d = D // p**shift
    x = x * pow(unit_d, -1, mod) % mod
    return PadicNumber.from_residue(x, p, N, shift)


def bprime2(j: int, p: int, k: int = DEFAULT_PRECISION) -> PadicNumber:
    """B'_{2,phi^j} = p sum_a omega^{4j}(a) B_2(a/p), known mod p^k."""
    require_prime(p)
    m = (p - 1) // 2
    if not 1 <= j <= m - 1:
        raise ValueError(f"j={j} outside 1..{m - 1}")
    N = k + 1
    mod = p**N
    # 6p B' = 6 sum chi(a) a^2 - 6p sum chi(a) a + p^2 sum chi(a)
    y = 0
    for a in range(1, p):
        chi = pow(_teich(a, p, N), 4 * j, mod)
        y += chi * (6 * a * a - 6 * p * a + p * p)
    y = y * pow(6, -1, mod) % mod
    return PadicNumber.from_residue(y, p, N, 1)


def _resolved(fn, j: int, p: int, k: int) -> tuple[PadicNumber, int]:
    while True:
        x = fn(j, p, k)
        if not x.zero:
            return x, k
        if k >= MAX_PRECISION:
            raise InsufficientPrecision(f"{fn.__name__}({j}, {p}) is 0 mod p^{k}")
        k = min(2 * k, MAX_PRECISION)


def bernoulli_residue(n: int, p: int) -> int:
    """b_n mod p for even 2 <= n < 2(p-1), (p-1) not dividing n.

    Above p-3 the index is brought down by Kummer's congruence
    b_n / n == b_{n-(p-1)} / (n-(p-1)) mod p.
    """
    if n % 2 or n < 2 or n % (p - 1) == 0 or n >= 2 * (p - 1):
        raise ValueError(f"b_{n} mod {p} not handled")
    table = _bernoulli_table(p)
    if n <= p - 3:
        return table[n]
    low = n - (p - 1)
    return n * table[low] * pow(low, -1, p) % p


@lru_cache(maxsize=None)
def _bernoulli_table(p: int) -> dict[int, int]:
    return bernoulli_mod_p(p, p - 3)


def floor_exponent(p: int) -> int:
    """[p/4] - 1, the generic p-rank."""
    return p // 4 - 1


class Classification(str, enum.Enum):
    ELEMENTARY_RANK_FLOOR = "ELEMENTARY_RANK_FLOOR"
    HAS_ORDER_P_SQUARED = "HAS_ORDER_P_SQUARED"
    EXCESS_WITHOUT_P_SQUARED = "EXCESS_WITHOUT_P_SQUARED"


@dataclass(frozen=True)
class LangataRow:
    j: int
    ord_S: int
    ord_Bprime: int
    b_mod_p: int | None  # b_{4j+2} mod p; None when p-1 divides 4j+2
    clause: str


@dataclass(frozen=True)
class ValuationReport:
    p: int
    per_j: tuple[LangataRow, ...]
    irr: int
    predicted_ord_p_total: int
    classification: Classification
    precision_used: int = DEFAULT_PRECISION

    @property
    def piece_exponents(self) -> list[int]:
        return sorted(r.ord_S for r in self.per_j if r.ord_S > 0)


def _clause(p: int, j: int) -> str:
    if p % 4 == 1:
        if j <= (p - 5) // 4:
            return "low"
        if j == (p - 1) // 4:
            return "special"
        return "high"
    if j <= (p - 7) // 4:
        return "low"
    if j == (p - 3) // 4:
        return "special"
    return "high"


def _check_clause(p: int, j: int, clause: str, s: int, b: int) -> bool:
    if clause == "low":
        return s == 1 + b and s >= 1
    if clause == "high":
        return s == b and s >= 0
    if p % 4 == 1:
        return s == 0
    return s == 0 and b == -1


def _predicted_class(p: int, total: int) -> Classification:
    if total == floor_exponent(p):
        return Classification.ELEMENTARY_RANK_FLOOR
    if p % 4 == 1:
        return Classification.HAS_ORDER_P_SQUARED
    low = [n for n in irregular_pairs(p) if n % 4 == 2 and (n - 2) // 4 <= (p - 7) // 4]
    return (
        Classification.HAS_ORDER_P_SQUARED if low else Classification.EXCESS_WITHOUT_P_SQUARED
    )


def verify_langata(p: int, k: int = DEFAULT_PRECISION) -> ValuationReport:
    """Compare ord_p S_{phi^j} with ord_p B'_{2,phi^j} for every j.

    Raises HardError if any clause of the valuation rules fails.
    """
    require_prime(p)
    m = (p - 1) // 2
    rows = []
    used = k
    for j in range(1, m):
        s, ks = _resolved(s_phi, j, p, k)
        b, kb = _resolved(bprime2, j, p, k)
        used = max(used, ks, kb)
        clause = _clause(p, j)
        if not _check_clause(p, j, clause, s.ord(), b.ord()):
            raise HardError(
                f"p={p}, j={j} ({clause}): ord S = {s.ord()}, ord B' = {b.ord()}"
            )
        n = 4 * j + 2
        bm = None if n % (p - 1) == 0 else bernoulli_residue(n, p)
        rows.append(LangataRow(j, s.ord(), b.ord(), bm, clause))
    total = sum(r.ord_S for r in rows)
    return ValuationReport(
        p=p,
        per_j=tuple(rows),
        irr=len(irregular_pairs(p)),
        predicted_ord_p_total=total,
        classification=_predicted_class(p, total),
        precision_used=used,
    )


def floor_case_expected(p: int) -> bool:
    """First clause of the classification: is ord_p exactly [p/4] - 1?"""
    irr = irregular_pairs(p)
    if not irr:
        return True
    if p % 4 == 3:
        return False
    return not any(n % 4 == 2 and (n - 2) // 4 <= (p - 5) // 4 for n in irr)


def classify(p: int, report: ValuationReport, snf: ClassGroupStructure) -> Classification:
    """Classify the p-Sylow part and cross-check against the SNF ground truth."""
    if report.p != p or snf.p != p:
        raise ValueError("report and SNF are for different primes")
    predicted = _predicted_class(p, report.predicted_ord_p_total)
    pieces = sorted(snf.p_part_exponents(p))
    if sum(pieces) != report.predicted_ord_p_total:
        raise HardError(
            f"p={p}: eigencomponent total {report.predicted_ord_p_total} "
            f"!= ord_p(order) {sum(pieces)}"
        )
    if pieces != report.piece_exponents:
        raise HardError(
            f"p={p}: p-parts {pieces} != eigencomponent pieces {report.piece_exponents}"
        )
    if any(e >= 2 for e in pieces):
        actual = Classification.HAS_ORDER_P_SQUARED
    elif len(pieces) == floor_exponent(p):
        actual = Classification.ELEMENTARY_RANK_FLOOR
    else:
        actual = Classification.EXCESS_WITHOUT_P_SQUARED
    if actual != predicted:
        raise HardError(f"p={p}: predicted {predicted.value}, SNF shows {actual.value}")
    if (predicted == Classification.ELEMENTARY_RANK_FLOOR) != floor_case_expected(p):
        raise HardError(f"p={p}: floor case disagrees with the Bernoulli criterion")
    return predicted


def vonstaudt_congruence_check(p: int, j: int) -> bool:
    """B'_{2,phi^j} == b_{4j+2} / (2j+1) mod p."""
    require_prime(p)
    if p % 4 == 3 and j == (p - 3) // 4:
        raise ValueError("j = (p-3)/4 is excluded for p = 3 mod 4")
    lhs = bprime2(j, p, 1).residue()
    rhs = bernoulli_residue(4 * j + 2, p) * pow(2 * j + 1, -1, p) % p
    return lhs == rhs


def q_parity_check(p: int, factored: FactoredInteger) -> bool:
    """Every prime q >= 7 prime to p(p^2-1) occurs to an even power.

    Uncertified entries are handled without being split: their bases are
    pairwise coprime, so the claim holds for one iff its exponent is even or
    the base is a perfect square.
    """
    if p % 4 != 1:
        raise ValueError("the parity statement is for p = 1 mod 4")
    exempt = p * (p * p - 1)
    for q, e, certified in factored.factors:
        if certified:
            if q < 7 or exempt % q == 0:
                continue
            if e % 2:
                return False
        elif e % 2:
            r = iroot(q, 2)
            if r * r != q:
                return False
    return True
