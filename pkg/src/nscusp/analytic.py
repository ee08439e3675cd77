"""Numerical side: Hurwitz zeta, L-series over F_{p^2}, Gauss sums, growth bounds.

All evaluations use mpmath at ``WORKING_DPS`` significant digits.  The
characters studied are chi_j = omega^{(2p+2)j} on F_{p^2}^*; with omega(g)
a primitive (p^2-1)-th root of unity, chi_j(x) = zeta_m^{j i} where w^i is the
norm class of x.  Their restrictions to F_p^* are the even Dirichlet
characters psi_j(a) = zeta_m^{2 j i(a)}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath
from mpmath import mp, mpc, mpf

from .arith import bernoulli, require_prime
from .fields import Fp2Context, build_context
from .stickelberger import class_sums, level_d

__all__ = [
    "WORKING_DPS",
    "CharacterTable",
    "AnalyticReport",
    "hurwitz_zeta",
    "character_table",
    "generalized_L",
    "dirichlet_L",
    "even_L",
    "gauss_sum",
    "fe_residual",
    "even_orthogonality_sum",
    "polya_vinogradov_ratio",
    "growth_report",
    "exact_bernoulli_character",
]

WORKING_DPS = 40


def hurwitz_zeta(s, u, tol: float = 1e-30):
    """zeta(s, u) = sum_{n>=0} (n+u)^-s by Euler-Maclaurin summation.

    Valid for any s != 1 (the expansion is the analytic continuation); at
    negative integers the correction series terminates and the value is exact
    up to rounding.
    """
    with mp.workdps(WORKING_DPS):
        s = mpmath.mpmathify(s)
        u = mpf(u)
        if s == 1:
            raise ValueError("Hurwitz zeta has a pole at s = 1")
        if not 0 < u <= 1:
            raise ValueError("u must lie in (0, 1]")
        N = 12 + int(abs(s)) + WORKING_DPS // 2
        total = mpf(0)
        for n in range(N):
            total += (n + u) ** (-s)
        x = N + u
        total += x ** (1 - s) / (s - 1) + x ** (-s) / 2
        # sum_k b_{2k}/(2k)! * s(s+1)...(s+2k-2) * x^(-s-2k+1)
        rising = s
        xpow = x ** (-s - 1)
        fact = mpf(2)
        for k in range(1, 60):
            term = mpf(bernoulli(2 * k).numerator) / bernoulli(2 * k).denominator
            term = term / fact * rising * xpow
            total += term
            if rising == 0 or abs(term) < tol * max(1, abs(total)) / 10:
                break
            rising *= (s + 2 * k - 1) * (s + 2 * k)
            xpow /= x * x
            fact *= (2 * k + 1) * (2 * k + 2)
        return total


@dataclass(frozen=True)
class CharacterTable:
    """Discrete logs and trace statistics for the characters chi_j of F_{p^2}^*.

    ``fiber[a][i]`` counts x in F_{p^2}^* with Tr(x)/2 = a and norm class w^i,
    which is all the L-series and Gauss sums ever need.
    """

    p: int
    m: int
    h_index: dict[int, int]  # a in F_p^* -> i with a = +-w^i
    fiber: tuple[tuple[int, ...], ...]

    def root(self, k: int):
        return _roots(self.m)[k % self.m]

    def chi_h(self, j: int, a: int):
        """Even Dirichlet character of index j: zeta_m^(j i(a))."""
        a %= self.p
        if a == 0:
            return mpc(0)
        return self.root(j * self.h_index[a])

    def psi(self, j: int, a: int):
        """Restriction of chi_j to F_p^*: a -> chi_H(N(a)) = chi_H(a^2)."""
        return self.chi_h(2 * j, a)

    def trace_sums(self, j: int) -> list:
        """C_a = sum over x with Tr(x)/2 = a of chi_j(x), a = 0..p-1."""
        with mp.workdps(WORKING_DPS):
            out = []
            for row in self.fiber:
                acc = mpc(0)
                for i, c in enumerate(row):
                    if c:
                        acc += c * self.root(j * i)
                out.append(acc)
            return out


@lru_cache(maxsize=None)
def _roots(m: int) -> tuple:
    with mp.workdps(WORKING_DPS + 5):
        return tuple(mpmath.expjpi(mpf(2 * k) / m) for k in range(m))


@lru_cache(maxsize=None)
def character_table(p: int) -> CharacterTable:
    ctx = build_context(p)
    fiber = [[0] * ctx.m for _ in range(p)]
    for x in ctx.elements():
        fiber[x.a][ctx.w_index[(x.a * x.a - ctx.r * x.b * x.b) % p]] += 1
    return CharacterTable(p, ctx.m, dict(ctx.w_index), tuple(tuple(r) for r in fiber))


def _check_j(j: int, m: int) -> None:
    if j % m == 0:
        raise ValueError("trivial character")


@lru_cache(maxsize=None)
def _hurwitz_row(p: int, s: complex) -> tuple:
    # zeta(s, <a/p>) for a = 0..p-1, with <0> read as 1
    return tuple(hurwitz_zeta(s, mpf(a) / p if a else 1) for a in range(p))


def generalized_L(s, j: int, ctx: Fp2Context | int, tol: float = 1e-30):
    """L(s, chi_j, T) = p^(-s-1) sum_x chi_j(x) zeta(s, <T(x)/p>), T = Tr/2."""
    p = ctx if isinstance(ctx, int) else ctx.p
    tab = character_table(p)
    _check_j(j, tab.m)
    with mp.workdps(WORKING_DPS):
        s = mpmath.mpmathify(s)
        row = _hurwitz_row(p, complex(s))
        total = mpc(0)
        for c, z in zip(tab.trace_sums(j), row):
            total += c * z
        return total * mpf(p) ** (-s - 1)


def even_L(s, k: int, p: int):
    """L(s, chi) for the even character chi(a) = zeta_m^(k i(a)) mod p.

    Computed as p^-s sum_a chi(a) zeta(s, a/p); for k = 0 this is the
    imprimitive zeta(s) (1 - p^-s).
    """
    tab = character_table(p)
    with mp.workdps(WORKING_DPS):
        s = mpmath.mpmathify(s)
        row = _hurwitz_row(p, complex(s))
        total = mpc(0)
        for a in range(1, p):
            total += tab.chi_h(k, a) * row[a]
        return total * mpf(p) ** (-s)


def dirichlet_L(s, j: int, ctx: Fp2Context | int):
    """L(s, psi_j) for the restriction psi_j = chi_H(a^2) of chi_j to F_p^*."""
    p = ctx if isinstance(ctx, int) else ctx.p
    _check_j(j, (p - 1) // 2)
    return even_L(s, 2 * j, p)


def gauss_sum(j: int, ctx: Fp2Context | int):
    """tau(chi_j, T) = sum_x chi_j(x) e^(2 pi i T(x)/p)."""
    p = ctx if isinstance(ctx, int) else ctx.p
    tab = character_table(p)
    _check_j(j, tab.m)
    with mp.workdps(WORKING_DPS):
        total = mpc(0)
        for a, c in enumerate(tab.trace_sums(j)):
            total += c * mpmath.expjpi(mpf(2 * a) / p)
        return total


def _gamma_sine(s):
    # Gamma(1-s) * (e^{i pi s/2} - e^{-i pi s/2}); chi(-1) = 1 for every chi_j
    if s.imag == 0 and s.real == int(s.real) and s.real >= 1:
        # Gamma(1-s) has a pole: use Gamma(1-s) sin(pi s) = pi / Gamma(s)
        n = int(s.real)
        if n % 2:
            raise ValueError(f"s = {n} is a pole of the relation")
        return 1j * mpmath.pi / (mpmath.gamma(n) * mpmath.cospi(mpf(n) / 2))
    return mpmath.gamma(1 - s) * 2j * mpmath.sinpi(s / 2)


def fe_rhs(s, j: int, ctx: Fp2Context | int):
    """Right side of the functional-equation relation for L(s, chi_j, T)."""
    p = ctx if isinstance(ctx, int) else ctx.p
    with mp.workdps(WORKING_DPS):
        s = mpc(mpmath.mpmathify(s))
        pi = mpmath.pi
        factor = (2 * pi / p) ** s / (2 * pi * p * 1j)
        # the ordinary L-function is that of the conjugate restriction
        return factor * _gamma_sine(s) * gauss_sum(j, p) * dirichlet_L(1 - s, -j, p)


def fe_residual(s, j: int, ctx: Fp2Context | int) -> float:
    """|L(s, chi, T) - RHS| with both sides computed independently.

    Every chi_j is even (chi_j(-1) = 1); odd characters are outside the family
    and s = 1 (a pole on both sides) is rejected.
    """
    p = ctx if isinstance(ctx, int) else ctx.p
    tab = character_table(p)
    _check_j(j, tab.m)
    if complex(s) == 1:
        raise ValueError("s = 1 is a pole")
    with mp.workdps(WORKING_DPS):
        return float(abs(generalized_L(s, j, p) - fe_rhs(s, j, p)))


def even_orthogonality_sum(n: int, k: int, p: int):
    """sum over even characters chi mod p of chi(n) * conj(chi(k))."""
    tab = character_table(p)
    with mp.workdps(WORKING_DPS):
        total = mpc(0)
        for j in range(tab.m):
            total += tab.chi_h(j, n) * mpmath.conj(tab.chi_h(j, k))
        return total


def polya_vinogradov_ratio(p: int, k: int) -> float:
    """max_t |S(t, chi)| / (6 sqrt(p) ln p), S(t) = sum_{(p+1)/2 <= n < t} chi(n).

    chi is the even character of index k (nontrivial).  S is periodic once t
    passes a full period, so t runs over one period.
    """
    tab = character_table(p)
    _check_j(k, tab.m)
    start = (p + 1) // 2
    best = 0.0
    acc = 0j
    for n in range(start, start + p):
        acc += complex(tab.chi_h(k, n))
        best = max(best, abs(acc))
    return best / (6 * math.sqrt(p) * math.log(p))


@dataclass
class AnalyticReport:
    """Numerical growth checks for one level.

    ``product_abs``/``lower_ok`` refer to the nontrivial even characters mod p;
    ``full_product``/``full_lower_ok`` include the trivial one as well.
    ``restricted_product`` is prod_j |L(2, psi_j)| over the restricted characters,
    the quantity the upper bounds and the log-order identity are about.
    """

    p: int
    L2_values: list[complex]
    product_abs: float
    lower_ok: bool
    upper_ok: bool
    gauss_moduli_max_err: float
    fe_max_residual: float
    pv_max_ratio: float
    restricted_product: float = 0.0
    full_product: float = 0.0
    full_lower_ok: bool = False
    ln_order_residual: float = 0.0
    ln_order_ok: bool = False
    bounds: dict = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "p": str(self.p),
            "L2_values": [[repr(z.real), repr(z.imag)] for z in self.L2_values],
            "product_abs": repr(self.product_abs),
            "lower_ok": self.lower_ok,
            "upper_ok": self.upper_ok,
            "gauss_moduli_max_err": repr(self.gauss_moduli_max_err),
            "fe_max_residual": repr(self.fe_max_residual),
            "pv_max_ratio": repr(self.pv_max_ratio),
            "restricted_product": repr(self.restricted_product),
            "full_product": repr(self.full_product),
            "full_lower_ok": self.full_lower_ok,
            "ln_order_residual": repr(self.ln_order_residual),
            "ln_order_ok": self.ln_order_ok,
            "bounds": {k: repr(v) for k, v in sorted(self.bounds.items())},
            "violations": list(self.violations),
        }


LOWER_TOL = 1e-9
LN_ORDER_RTOL = 1e-4
_SLACK = 1 + 1e-12


def _upper_chain_3mod4(p: int, tab: CharacterTable, Ls: list, bounds: dict, violations: list) -> bool:
    ok = True
    n = (p - 3) // 2
    half = (p - 1) // 2
    pv_tail = 24 * mpmath.sqrt(p) * mpmath.log(p) / (p + 1) ** 2
    for k, z in enumerate(Ls, start=1):
        head = abs(sum(tab.chi_h(k, a) / mpf(a) ** 2 for a in range(1, half + 1)))
        if abs(z) > (head + pv_tail) * _SLACK:
            ok = False
            violations.append(f"|L(2, chi_{k})| exceeds head + Polya-Vinogradov tail")
    prod_abs = mpf(1)
    for z in Ls:
        prod_abs *= abs(z)
    mean_sq = sum(abs(z) ** 2 for z in Ls) / n
    explicit = (
        2 / mpf(p - 3)
        * (mpmath.pi**2 * mpmath.sqrt(mpf(p - 1) / 180) + pv_tail * mpmath.sqrt(mpf(p - 3) / 2)) ** 2
    )
    geo_sq = prod_abs ** (mpf(4) / (p - 3))  # |prod L^2|^(2/(p-3))
    geo = prod_abs ** (mpf(2) / (p - 3))
    # sum over all even chi of |sum_{n <= (p-1)/2} chi(n)/n^2|^2
    orth_lhs = sum(
        abs(sum(tab.chi_h(k, a) / mpf(a) ** 2 for a in range(1, half + 1))) ** 2
        for k in range(tab.m)
    )
    orth_rhs = mpf(half) * sum(1 / mpf(a) ** 4 for a in range(1, half + 1))
    bounds.update(
        geometric_mean_sq=float(geo_sq),
        geometric_mean=float(geo),
        amgm_mean_sq=float(mean_sq),
        explicit_bound=float(explicit),
        orthogonality_residual=float(abs(orth_lhs - orth_rhs)),
        zeta4_bound=float(half * mpmath.zeta(4)),
    )
    if not geo_sq <= mean_sq * _SLACK:
        ok = False
        violations.append("AM-GM step fails")
    if not mean_sq <= explicit * _SLACK:
        ok = False
        violations.append("explicit bound on the mean square fails")
    if not geo <= explicit * _SLACK:
        ok = False
        violations.append("|prod L|^(2/(p-3)) exceeds the explicit bound")
    if abs(orth_lhs - orth_rhs) > 1e-25 * orth_rhs or orth_rhs > half * mpmath.zeta(4):
        ok = False
        violations.append("even-character orthogonality identity fails")
    return ok


def growth_report(p: int, exact_order: int, fe: bool = True) -> AnalyticReport:
    """Check the growth inequalities and the exact log-order identity for level p.

    Failures are recorded as false flags plus a message in ``violations``.
    """
    require_prime(p)
    tab = character_table(p)
    m = tab.m
    violations: list[str] = []
    bounds: dict[str, float] = {}
    with mp.workdps(WORKING_DPS):
        L_even = [even_L(2, k, p) for k in range(1, m)]
        L_triv = even_L(2, 0, p)
        prod_ = mpc(1)
        for z in L_even:
            prod_ *= z
        product_abs = abs(prod_)
        full = abs(prod_ * L_triv)
        lower_ok = product_abs >= 1 - LOWER_TOL
        if not lower_ok:
            violations.append(f"prod over nontrivial even chi of L(2, chi) = {float(product_abs)} < 1")
        full_ok = full >= 1 - LOWER_TOL
        if p % 4 == 1:
            # squares of even characters, trivial included
            sq = mpc(L_triv)
            for k in range(2, m, 2):
                sq *= L_even[k - 1]
            bounds["square_subgroup_product"] = float(abs(sq))
            full_ok = full_ok and abs(sq) >= 1 - LOWER_TOL
        if not full_ok:
            violations.append("product over a full character group is below 1")

        restricted = mpf(1)
        for j in range(1, m):
            restricted *= abs(L_even[(2 * j) % m - 1]) if (2 * j) % m else abs(L_triv)

        n_chars = (p - 3) // 2
        if p % 4 == 1:
            bound = mpmath.zeta(2) ** n_chars
            bounds["zeta2_power"] = float(bound)
            upper_ok = True
            for name, val in (("psi_j", restricted), ("chi", product_abs)):
                if val > bound * _SLACK:
                    upper_ok = False
                    violations.append(f"prod |L(2, {name})| exceeds zeta(2)^{n_chars}")
        elif n_chars:
            upper_ok = _upper_chain_3mod4(p, tab, L_even, bounds, violations)
        else:
            upper_ok = True

        gauss_err = 0.0
        fe_res = 0.0
        for j in range(1, m):
            gauss_err = max(gauss_err, float(abs(abs(gauss_sum(j, p)) - p)))
            if fe:
                fe_res = max(fe_res, fe_residual(2, j, p), fe_residual(-1, j, p))
        pv = max((polya_vinogradov_ratio(p, k) for k in range(1, m)), default=0.0)
        if pv > 1:
            violations.append(f"Polya-Vinogradov ratio {pv} > 1")

        resid, ln_ok = 0.0, False
        if exact_order > 0 and m > 1:
            # order = (2d/(p-1)) (p/2pi)^(p-3) prod |L(2, psi_j)|
            predicted = (
                (p - 4) * mpmath.log(mpf(p) / (2 * mpmath.pi))
                + mpmath.log(restricted)
                + mpmath.log(mpf(level_d(p)) * p / (mpmath.pi * (p - 1)))
            )
            ln_order = mpmath.log(exact_order)
            resid = float(ln_order - predicted)
            ln_ok = abs(resid) <= LN_ORDER_RTOL * max(1.0, float(ln_order))
            if not ln_ok:
                violations.append(f"log-order identity residual {resid}")

        return AnalyticReport(
            p=p,
            L2_values=[complex(z) for z in L_even],
            product_abs=float(product_abs),
            lower_ok=bool(lower_ok),
            upper_ok=bool(upper_ok),
            gauss_moduli_max_err=gauss_err,
            fe_max_residual=fe_res,
            pv_max_ratio=pv,
            restricted_product=float(restricted),
            full_product=float(full),
            full_lower_ok=bool(full_ok),
            ln_order_residual=resid,
            ln_order_ok=bool(ln_ok),
            bounds=bounds,
            violations=violations,
        )


def exact_bernoulli_character(j: int, p: int):
    """B_{2,chi_j} = sum_i c_i zeta_m^(i j), from the exact class sums."""
    csp = class_sums(build_context(p))
    with mp.workdps(WORKING_DPS):
        total = mpc(0)
        for i, c in enumerate(csp.sums):
            total += mpf(c.numerator) / c.denominator * _roots(csp.m)[(i * j) % csp.m]
        return total
