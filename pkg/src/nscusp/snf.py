"""Elementary divisors of integer lattices.

The quotient Z^n / L for a full-rank lattice L spanned by the rows of an
integer matrix.  A full-rank square subset of rows gives a determinant N with
N Z^n contained in L, so the whole elimination may be carried out mod N
without changing the quotient; entries never exceed N.
"""
from __future__ import annotations

from math import gcd

__all__ = ["RankDeficientError", "bareiss_det", "full_rank_rows", "elementary_divisors"]


class RankDeficientError(ArithmeticError):
    """The row lattice has rank below the ambient dimension (infinite quotient)."""


def bareiss_det(a: list[list[int]]) -> int:
    """Exact determinant by fraction-free Gaussian elimination."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            mik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (pivot * ri[j] - mik * rk[j]) // prev
            ri[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def full_rank_rows(a: list[list[int]], prime: int = (1 << 61) - 1) -> list[int]:
    """Indices of rows forming a basis of the row space (rank test mod a large prime)."""
    ncols = len(a[0]) if a else 0
    basis: list[tuple[int, list[int]]] = []  # (pivot column, reduced row)
    chosen = []
    for idx, row in enumerate(a):
        v = [x % prime for x in row]
        for col, b in basis:
            if v[col]:
                f = v[col]
                v = [(x - f * y) % prime for x, y in zip(v, b)]
        piv = next((j for j, x in enumerate(v) if x), None)
        if piv is None:
            continue
        inv = pow(v[piv], -1, prime)
        basis.append((piv, [x * inv % prime for x in v]))
        chosen.append(idx)
        if len(chosen) == ncols:
            break
    return chosen


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _sym(x: int, n: int) -> int:
    x %= n
    return x - n if 2 * x > n else x


def _chain(diag: list[int]) -> list[int]:
    d = list(diag)
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            g = gcd(d[i], d[j])
            if g != d[i]:
                d[i], d[j] = g, d[i] // g * d[j]
    return d


def elementary_divisors(a: list[list[int]], modulus: int | None = None) -> list[int]:
    """Invariant factors > 1 of Z^n / rowspace(a), in divisibility order.

    ``modulus`` may be any known positive multiple of the quotient order;
    by default it is |det| of a full-rank square subset of the rows.
    """
    if not a:
        raise RankDeficientError("empty matrix")
    n = len(a[0])
    if n == 0:
        return []
    if modulus is None:
        rows = full_rank_rows(a)
        if len(rows) < n:
            raise RankDeficientError(f"rank {len(rows)} < {n}: quotient is infinite")
        modulus = abs(bareiss_det([a[i] for i in rows]))
        if modulus == 0:
            raise RankDeficientError("selected rows are singular")
    N = modulus
    mat = [[_sym(x, N) for x in row] for row in a]
    nrows = len(mat)
    diag = []
    for k in range(n):
        # smallest nonzero entry in the trailing block as pivot
        best = None
        for i in range(k, nrows):
            for j in range(k, n):
                v = mat[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            diag.extend([N] * (n - k))
            break
        _, pi, pj = best
        mat[k], mat[pi] = mat[pi], mat[k]
        if pj != k:
            for row in mat:
                row[k], row[pj] = row[pj], row[k]
        while True:
            dirty = False
            rk = mat[k]
            for i in range(k + 1, nrows):
                ri = mat[i]
                b = ri[k]
                if not b:
                    continue
                a_ = rk[k]
                if b % a_ == 0:
                    q = b // a_
                    mat[i] = ri = [_sym(x - q * y, N) for x, y in zip(ri, rk)]
                else:
                    g, x, y = _xgcd(a_, b)
                    u, v = a_ // g, b // g
                    new_k = [_sym(x * s + y * t, N) for s, t in zip(rk, ri)]
                    mat[i] = [_sym(u * t - v * s, N) for s, t in zip(rk, ri)]
                    mat[k] = rk = new_k
            for j in range(k + 1, n):
                b = rk[j]
                if not b:
                    continue
                a_ = rk[k]
                if b % a_ == 0:
                    q = b // a_
                    for row in mat:
                        row[j] = _sym(row[j] - q * row[k], N)
                else:
                    g, x, y = _xgcd(a_, b)
                    u, v = a_ // g, b // g
                    for row in mat:
                        s, t = row[k], row[j]
                        row[k] = _sym(x * s + y * t, N)
                        row[j] = _sym(u * t - v * s, N)
                    dirty = True
            # the pivot strictly shrinks on every dirty pass, so this terminates
            if not dirty:
                break
        diag.append(gcd(mat[k][k], N))
    return [x for x in _chain(diag) if x > 1]
