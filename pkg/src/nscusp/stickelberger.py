"""Group ring Q[H], the Stickelberger element and its lattice.

H = (Z/pZ)^*/{+-1} is cyclic of order m = (p-1)/2 with generator w, the class
of N(g).  An element sum b_i w^i is stored as its coefficient list.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd

from .arith import bernoulli_poly2, lcm
from .fields import Fp2Context, half_system, norm_class_index

__all__ = [
    "GroupRingElement",
    "ClassSumPolynomial",
    "IdealBasis",
    "class_sums",
    "theta",
    "groupring_mul",
    "ideal_basis",
    "stickelberger_lattice",
    "level_d",
]


def level_d(p: int) -> int:
    """d = 12 / gcd(12, p + 1)."""
    return 12 // gcd(12, p + 1)


@dataclass(frozen=True)
class GroupRingElement:
    coefficients: tuple[Fraction, ...]
    p: int

    @property
    def m(self) -> int:
        return len(self.coefficients)

    @classmethod
    def basis(cls, i: int, p: int) -> "GroupRingElement":
        m = (p - 1) // 2
        c = [Fraction(0)] * m
        c[i % m] = Fraction(1)
        return cls(tuple(c), p)

    @classmethod
    def from_list(cls, coeffs, p: int) -> "GroupRingElement":
        return cls(tuple(Fraction(c) for c in coeffs), p)

    def degree(self) -> Fraction:
        return sum(self.coefficients, Fraction(0))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coefficients)

    def _check(self, other: "GroupRingElement") -> None:
        if self.p != other.p or self.m != other.m:
            raise ValueError("group ring elements over different H")

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        self._check(other)
        return GroupRingElement(
            tuple(a + b for a, b in zip(self.coefficients, other.coefficients)), self.p
        )

    def __sub__(self, other: "GroupRingElement") -> "GroupRingElement":
        self._check(other)
        return GroupRingElement(
            tuple(a - b for a, b in zip(self.coefficients, other.coefficients)), self.p
        )

    def scale(self, c) -> "GroupRingElement":
        c = Fraction(c)
        return GroupRingElement(tuple(c * a for a in self.coefficients), self.p)

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        return groupring_mul(self, other)

    def shift(self, i: int) -> "GroupRingElement":
        """Multiply by w^i (a cyclic rotation)."""
        m = self.m
        i %= m
        c = self.coefficients
        return GroupRingElement(c[m - i :] + c[: m - i], self.p)


def groupring_mul(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    """Cyclic convolution of length m."""
    a._check(b)
    m = a.m
    out = [Fraction(0)] * m
    for i, x in enumerate(a.coefficients):
        if not x:
            continue
        for j, y in enumerate(b.coefficients):
            if y:
                out[(i + j) % m] += x * y
    return GroupRingElement(tuple(out), a.p)


@dataclass(frozen=True)
class ClassSumPolynomial:
    """f(X) = (1/D) sum g_i X^i with f(zeta_m^j) = (p/2) B_{2, chi_j}.

    ``sums`` holds the exact class sums c_i (fibres of the norm over w^i).
    """

    p: int
    m: int
    scaled_coeffs: tuple[int, ...]
    denominator: int
    sums: tuple[Fraction, ...]

    def coefficient(self, i: int) -> Fraction:
        return Fraction(self.scaled_coeffs[i], self.denominator)

    def value_at_one(self) -> Fraction:
        return Fraction(sum(self.scaled_coeffs), self.denominator)


def class_sums(ctx: Fp2Context) -> ClassSumPolynomial:
    p, m = ctx.p, ctx.m
    half = pow(2, -1, p)
    sums = [Fraction(0)] * m
    for x in half_system(ctx):
        # <(Tr(x)/2)/p> with Tr(a + bt)/2 = a
        a = (2 * x.a * half) % p
        sums[norm_class_index(x, ctx)] += bernoulli_poly2(Fraction(a, p))
    coeffs = [Fraction(p, 2) * c for c in sums]
    D = reduce(lcm, (c.denominator for c in coeffs), 1)
    if (12 * p) % D:
        raise ArithmeticError(f"class-sum denominator {D} does not divide 12p")
    scaled = tuple(int(c * D) for c in coeffs)
    return ClassSumPolynomial(p, m, scaled, D, tuple(sums))


def theta(ctx: Fp2Context, csp: ClassSumPolynomial | None = None) -> GroupRingElement:
    """Stickelberger element: coefficient of w^{-i} is (p/2) c_i."""
    if csp is None:
        csp = class_sums(ctx)
    m = ctx.m
    coeffs = [Fraction(0)] * m
    for i in range(m):
        coeffs[-i % m] = csp.coefficient(i)
    return GroupRingElement(tuple(coeffs), ctx.p)


@dataclass(frozen=True)
class IdealBasis:
    kind: str  # "R0" or "Rd"
    d: int
    generators: tuple[GroupRingElement, ...]


def ideal_basis(p: int, kind: str) -> IdealBasis:
    """Z-bases {w^i - 1} of R_0, and {d} plus those of R_d."""
    one = GroupRingElement.basis(0, p)
    m = (p - 1) // 2
    gens = [GroupRingElement.basis(i, p) - one for i in range(1, m)]
    d = level_d(p)
    if kind == "Rd":
        gens.insert(0, one.scale(d))
    elif kind != "R0":
        raise ValueError(f"unknown ideal {kind!r}")
    return IdealBasis(kind, d, tuple(gens))


def r0_coordinates(x: GroupRingElement) -> list[Fraction]:
    """Coordinates of a degree-0 element in the basis {w^j - 1 : 1 <= j < m}."""
    if x.degree() != 0:
        raise ArithmeticError("element is not of degree 0")
    return list(x.coefficients[1:])


def stickelberger_lattice(
    ctx: Fp2Context, th: GroupRingElement | None = None
) -> list[list[int]]:
    """Rows: d*theta and (w^i - 1)*theta for 1 <= i < m, in R_0 coordinates."""
    if th is None:
        th = theta(ctx)
    if th.degree() != 0:
        raise ArithmeticError(f"deg(theta) = {th.degree()} != 0 for p = {ctx.p}")
    # same generators as ideal_basis(p, "Rd"); products taken as rotations
    images = [th.scale(level_d(ctx.p))]
    images += [th.shift(i) - th for i in range(1, ctx.m)]
    rows = []
    for img in images:
        coords = r0_coordinates(img)
        if any(c.denominator != 1 for c in coords):
            raise ArithmeticError(f"non-integral lattice entry for p = {ctx.p}")
        rows.append([int(c) for c in coords])
    return rows
