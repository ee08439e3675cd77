"""Integer polynomial resultants by the subresultant PRS.

Polynomials are lists of Python ints, lowest degree first.
"""
from __future__ import annotations

from functools import reduce
from math import gcd

__all__ = ["resultant", "prem", "strip"]


def strip(f: list[int]) -> list[int]:
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def _deg(f: list[int]) -> int:
    return len(f) - 1


def _content(f: list[int]) -> int:
    return reduce(gcd, f, 0)


def prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of a by b: lc(b)^(deg a - deg b + 1) * a mod b."""
    a = list(a)
    db = _deg(b)
    lb = b[-1]
    e = _deg(a) - db + 1
    while a and _deg(a) >= db:
        la = a[-1]
        shift = _deg(a) - db
        a = [lb * x for x in a]
        for i, y in enumerate(b):
            a[i + shift] -= la * y
        a = strip(a)
        e -= 1
    if e > 0:
        scale = lb**e
        a = [scale * x for x in a]
    return a


def resultant(a: list[int], b: list[int]) -> int:
    """Res(a, b) over Z, exact."""
    a, b = strip(a), strip(b)
    if not a or not b:
        return 0
    ca, cb = _content(a), _content(b)
    a = [x // ca for x in a]
    b = [x // cb for x in b]
    t = ca ** _deg(b) * cb ** _deg(a)
    s = 1
    if _deg(a) < _deg(b):
        a, b = b, a
        if _deg(a) % 2 and _deg(b) % 2:
            s = -s
    g = h = 1
    while _deg(b) > 0:
        delta = _deg(a) - _deg(b)
        if _deg(a) % 2 and _deg(b) % 2:
            s = -s
        r = prem(a, b)
        a = b
        div = g * h**delta
        b = [x // div for x in r]
        if not b:
            return 0
        g = a[-1]
        # h <- h^(1 - delta) * g^delta, exact in Z
        h = g**delta // h ** (delta - 1) if delta else h
    da = _deg(a)
    h = b[-1] ** da // h ** (da - 1) if da else h
    return s * t * h
