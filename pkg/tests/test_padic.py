from fractions import Fraction

import pytest

from nscusp.arith import bernoulli, bernoulli_poly2, irregular_pairs
from nscusp.classnumber import compute
from nscusp.factor import FactoredInteger, factorize
from nscusp.fields import build_context
from nscusp.padic import (
    Classification,
    InsufficientPrecision,
    PadicNumber,
    bernoulli_residue,
    bprime2,
    classify,
    q_parity_check,
    s_phi,
    teichmuller,
    verify_langata,
    vonstaudt_congruence_check,
)
from nscusp.report import REFERENCE_TABLE
from nscusp.stickelberger import class_sums
from conftest import small_primes


def vp_frac(x: Fraction, p: int) -> int:
    if x == 0:
        raise ValueError
    v, n, d = 0, x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def naive_teich(a, p, k):
    # a^(p^(k-1)) is the Teichmuller lift mod p^k
    return pow(a, p ** (k - 1), p**k)


def lift_valuation(terms, p, N):
    """ord_p of sum(coef * lift) with rational coefficients, lifts mod p^N."""
    mod = p**N
    x = sum(terms, Fraction(0))
    # clear the p-part of denominators, then reduce
    v = 0
    while x.denominator % p == 0:
        x *= p
        v -= 1
    r = x.numerator * pow(x.denominator, -1, mod) % mod
    assert r != 0
    while r % p == 0:
        r //= p
        v += 1
    return v


def test_teichmuller_examples():
    assert teichmuller(1, 13, 4).unit == 1
    assert teichmuller(12, 13, 4).unit == 13**4 - 1
    for a in range(1, 13):
        t = teichmuller(a, 13, 4).unit
        assert pow(t, 12, 13**4) == 1
        assert t % 13 == a
        assert t == naive_teich(a, 13, 4)
    with pytest.raises(ValueError):
        teichmuller(13, 13, 4)


@pytest.mark.parametrize("p", small_primes(5, 31))
def test_teichmuller_multiplicative(p):
    k = 3
    mod = p**k
    for a in range(1, p):
        ta = teichmuller(a, p, k).unit
        for b in range(1, p):
            assert ta * teichmuller(b, p, k).unit % mod == teichmuller(a * b % p, p, k).unit


def test_padic_number_signals():
    z = PadicNumber.from_residue(0, 7, 3)
    with pytest.raises(InsufficientPrecision):
        z.ord()
    x = PadicNumber.from_residue(7 * 3, 7, 3, shift=1)
    assert x.ord() == 0 and x.residue() == 3
    y = PadicNumber.from_residue(7 * 7 * 2, 7, 4)
    assert y.ord() == 2
    assert (x * y).ord() == 2


def bprime_oracle(j, p, N=6):
    t = [Fraction(naive_teich(a, p, N)) ** (4 * j) for a in range(p)]
    return lift_valuation([p * t[a] * bernoulli_poly2(Fraction(a, p)) for a in range(1, p)], p, N)


def s_oracle(j, p, N=6):
    ctx = build_context(p)
    csp = class_sums(ctx)
    phi = naive_teich(ctx.w, p, N) ** 2
    return lift_valuation([Fraction(p, 2) * c * phi ** (i * j) for i, c in enumerate(csp.sums)], p, N)


@pytest.mark.parametrize("p", [13, 19, 23, 37])
def test_valuations_against_rational_oracle(p):
    for j in range(1, (p - 1) // 2):
        assert bprime2(j, p).ord() == bprime_oracle(j, p)
        assert s_phi(j, p).ord() == s_oracle(j, p)


def test_bprime_examples():
    for p in (7, 11, 19, 23, 31, 43):
        assert bprime2((p - 3) // 4, p).ord() == -1
    assert bprime2(8, 37).ord() == 0
    assert bprime2(14, 67, 8).ord() >= 1


def test_special_j_s_phi():
    for p in (13, 17, 29, 37):
        assert s_phi((p - 1) // 4, p).ord() == 0
    for p in (7, 11, 19, 23):
        assert s_phi((p - 3) // 4, p).ord() == 0


def test_bprime_insufficient_precision_signalled():
    # 67 | b_58, so B' for j = 14 vanishes mod p; at k = 1 only the residue is known
    x = bprime2(14, 67, 1)
    assert x.zero
    with pytest.raises(InsufficientPrecision):
        x.ord()


@pytest.mark.parametrize("p, total", [(23, 4), (37, 8), (59, 14), (67, 16), (101, 24)])
def test_langata_totals(p, total):
    rep = verify_langata(p)
    assert rep.predicted_ord_p_total == total
    assert len(rep.per_j) == (p - 3) // 2
    assert sum(r.ord_S for r in rep.per_j) == total


@pytest.mark.parametrize("p", small_primes(5, 150))
def test_langata_all_primes(p):
    rep = verify_langata(p)
    assert rep.irr == len(irregular_pairs(p))
    for r in rep.per_j:
        if r.clause == "special":
            assert r.ord_S == 0
            if p % 4 == 3:
                assert r.ord_Bprime == -1
        elif r.clause == "low":
            assert r.ord_S == 1 + r.ord_Bprime >= 1
        else:
            assert r.ord_S == r.ord_Bprime >= 0


@pytest.mark.parametrize("p", small_primes(5, 101))
def test_total_matches_class_group(p):
    assert verify_langata(p).predicted_ord_p_total == sum(compute(p).p_part_exponents())


@pytest.mark.parametrize(
    "p, expected",
    [
        (37, Classification.ELEMENTARY_RANK_FLOOR),
        (67, Classification.HAS_ORDER_P_SQUARED),
        (59, Classification.EXCESS_WITHOUT_P_SQUARED),
        (101, Classification.ELEMENTARY_RANK_FLOOR),
        (23, Classification.ELEMENTARY_RANK_FLOOR),
    ],
)
def test_classify(p, expected):
    assert classify(p, verify_langata(p), compute(p)) == expected


def test_classify_rejects_mismatched_inputs():
    with pytest.raises(ValueError):
        classify(23, verify_langata(23), compute(29))


def exact_bernoulli_mod(n, p):
    b = bernoulli(n)
    return b.numerator * pow(b.denominator, -1, p) % p


def test_bernoulli_residue_against_exact():
    for p in (11, 13, 17, 19):
        for n in range(2, 2 * (p - 1), 2):
            if n % (p - 1):
                assert bernoulli_residue(n, p) == exact_bernoulli_mod(n, p)


def test_vonstaudt_examples():
    assert all(vonstaudt_congruence_check(11, j) for j in (1, 3, 4))
    assert vonstaudt_congruence_check(37, 8)
    assert bprime2(8, 37, 1).residue() != 0
    assert vonstaudt_congruence_check(67, 14)
    assert bernoulli_residue(58, 67) == 0
    with pytest.raises(ValueError):
        vonstaudt_congruence_check(11, 2)


@pytest.mark.parametrize("p", small_primes(5, 150))
def test_vonstaudt_all(p):
    for j in range(1, (p - 1) // 2):
        if p % 4 == 3 and j == (p - 3) // 4:
            continue
        assert vonstaudt_congruence_check(p, j), j


@pytest.mark.parametrize("p", [37, 73, 89, 101])
def test_q_parity_table_rows(p):
    row = next(r for r in REFERENCE_TABLE if r.p == p)
    assert q_parity_check(p, factorize(row.order))


def test_q_parity_detects_odd_exponent():
    f = FactoredInteger(37**8 * 577**3, ((37, 8, True), (577, 3, True)))
    assert not q_parity_check(37, f)
    # exempt: 19 | 37^2 - 1
    assert q_parity_check(37, FactoredInteger(19**3, ((19, 3, True),)))
    # uncertified square base with odd exponent is still even in every prime
    assert q_parity_check(37, FactoredInteger(577**2, ((577**2, 1, False),)))
    with pytest.raises(ValueError):
        q_parity_check(23, factorize(23))
