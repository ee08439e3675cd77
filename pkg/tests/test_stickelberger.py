import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nscusp.arith import bernoulli_poly2
from nscusp.fields import build_context, half_system, norm_class_index
from nscusp.polyres import resultant
from nscusp.snf import RankDeficientError, bareiss_det, elementary_divisors
from nscusp.stickelberger import (
    GroupRingElement,
    class_sums,
    ideal_basis,
    level_d,
    r0_coordinates,
    stickelberger_lattice,
    theta,
)
from conftest import small_primes

PRIMES = small_primes(5, 61)


def frac_det(rows):
    a = [[Fraction(x) for x in r] for r in rows]
    n, det = len(a), Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return det


def sylvester(f, g):
    # coefficients lowest degree first
    m, n = len(f) - 1, len(g) - 1
    F, G = f[::-1], g[::-1]
    rows = [[0] * i + F + [0] * (n - 1 - i) for i in range(n)]
    rows += [[0] * i + G + [0] * (m - 1 - i) for i in range(m)]
    return frac_det(rows)


poly = st.lists(st.integers(-50, 50), min_size=2, max_size=7).filter(lambda f: f[-1] != 0)


@settings(max_examples=150, deadline=None)
@given(poly, poly)
def test_resultant_matches_sylvester(f, g):
    assert resultant(f, g) == sylvester(f, g)


def test_resultant_constant_cases():
    assert resultant([3], [1, 2, 1]) == 9
    assert resultant([1, 1], [1, 1]) == 0


mat = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-30, 30), min_size=n, max_size=n), min_size=n, max_size=n + 2)
)


def brute_divisors(a):
    # invariant factors from gcds of k x k minors
    from itertools import combinations
    from math import gcd

    n = len(a[0])
    dk, prev, out = [], 1, []
    for k in range(1, n + 1):
        g = 0
        for rs in combinations(range(len(a)), k):
            for cs in combinations(range(n), k):
                g = gcd(g, int(frac_det([[a[r][c] for c in cs] for r in rs])))
        if g == 0:
            return None
        out.append(g // prev)
        prev = g
    return [x for x in out if x > 1]


@settings(max_examples=120, deadline=None)
@given(mat)
def test_elementary_divisors_match_minors(a):
    expected = brute_divisors(a)
    if expected is None:
        with pytest.raises(RankDeficientError):
            elementary_divisors(a)
    else:
        got = elementary_divisors(a)
        assert got == expected
        assert all(y % x == 0 for x, y in zip(got, got[1:]))


def test_bareiss_matches_fraction_det():
    rng = random.Random(5)
    for n in range(1, 7):
        a = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(n)]
        assert bareiss_det(a) == frac_det(a)


def test_level_d():
    assert [level_d(p) for p in (5, 7, 11, 13, 23)] == [2, 3, 1, 6, 1]


def test_groupring_identities():
    p, m = 23, 11
    one = GroupRingElement.basis(0, p)
    w = GroupRingElement.basis(1, p)
    assert w * GroupRingElement.basis(m - 1, p) == one
    a = GroupRingElement.from_list(range(m), p)
    assert a * one == a
    with pytest.raises(ValueError):
        a * GroupRingElement.basis(0, 29)


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.fractions(max_denominator=20), min_size=6, max_size=6),
    st.lists(st.fractions(max_denominator=20), min_size=6, max_size=6),
)
def test_degree_multiplicative(x, y):
    a, b = GroupRingElement.from_list(x, 13), GroupRingElement.from_list(y, 13)
    assert (a * b).degree() == a.degree() * b.degree()


@pytest.mark.parametrize("p", small_primes(5, 23))
def test_class_sums_against_direct_fibres(p):
    ctx = build_context(p)
    csp = class_sums(ctx)
    half = pow(2, -1, p)
    sums = [Fraction(0)] * ctx.m
    counts = [0] * ctx.m
    for x in half_system(ctx):
        i = norm_class_index(x, ctx)
        a = 2 * x.a * half % p
        sums[i] += bernoulli_poly2(Fraction(a, p))
        counts[i] += 1
    assert list(csp.sums) == sums
    assert sum(sums) == 0
    assert counts == [p + 1] * ctx.m
    assert (12 * p) % csp.denominator == 0
    for i in range(ctx.m):
        assert csp.coefficient(i) == Fraction(p, 2) * sums[i]


@pytest.mark.parametrize("p", PRIMES)
def test_theta_degree_and_integrality(p):
    ctx = build_context(p)
    th = theta(ctx)
    assert th.degree() == 0
    assert th.scale(12).is_integral()
    csp = class_sums(ctx)
    for i in range(ctx.m):
        assert th.coefficients[(-i) % ctx.m] == Fraction(p, 2) * csp.sums[i]


@pytest.mark.parametrize("p", small_primes(5, 23))
def test_augmentation_times_theta_integral(p):
    ctx = build_context(p)
    th = theta(ctx)
    one = GroupRingElement.basis(0, p)
    for i in range(ctx.m):
        x = (GroupRingElement.basis(i, p) - one) * th
        assert x.is_integral()
        assert x.degree() == 0


@pytest.mark.parametrize("p", [11, 23])
def test_theta_model_independent(p):
    base = theta(build_context(p))
    other_r = next(r for r in range(build_context(p).r + 1, p) if pow(r, (p - 1) // 2, p) == p - 1)
    ctx2 = build_context(p, r=other_r)
    th2 = theta(ctx2)
    # the generator may change, which permutes H; compare coefficients as functions on H
    def as_map(ctx, th):
        return {pow(ctx.w, i, p) * s % p: c for i, c in enumerate(th.coefficients) for s in (1, p - 1)}
    assert as_map(build_context(p), base) == as_map(ctx2, th2)


def test_ideal_bases():
    r0 = ideal_basis(23, "R0")
    rd = ideal_basis(13, "Rd")
    assert len(r0.generators) == 10 and all(g.degree() == 0 for g in r0.generators)
    assert rd.d == 6 and len(rd.generators) == 6
    assert rd.generators[0].degree() == 6


@pytest.mark.parametrize("p", [5, 7, 23, 37])
def test_lattice_shape_and_round_trip(p):
    ctx = build_context(p)
    th = theta(ctx)
    rows = stickelberger_lattice(ctx, th)
    m = ctx.m
    assert len(rows) == m and all(len(r) == m - 1 for r in rows)
    one = GroupRingElement.basis(0, p)
    gens = [th.scale(level_d(p))] + [(GroupRingElement.basis(i, p) - one) * th for i in range(1, m)]
    for row, g in zip(rows, gens):
        assert row == r0_coordinates(g)
        rebuilt = GroupRingElement.from_list([0] * m, p)
        for j, c in enumerate(row, start=1):
            rebuilt = rebuilt + (GroupRingElement.basis(j, p) - one).scale(c)
        assert rebuilt == g
