"""Small exact linear-algebra kernel over Q and Q(i).

Matrices are tuples of tuples of Fraction.  Complex rational entries are
(re, im) pairs of Fractions.  Everything here is O(d^3) with d <= a few
dozen, so clarity beats cleverness.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

__all__ = [
    "identity",
    "mat_mul",
    "mat_rank",
    "charpoly",
    "rank_sequence",
    "poly_divmod",
    "poly_gcd",
    "poly_deriv",
    "poly_squarefree",
    "poly_eval_complex",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def identity(d):
    return tuple(
        tuple(_ONE if i == j else _ZERO for j in range(d)) for i in range(d)
    )


def mat_mul(A, B):
    d = len(A)
    n = len(B[0])
    Bt = list(zip(*B))
    return tuple(
        tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A
    )


def mat_rank(A):
    """Rank over Q by fraction Gaussian elimination (A is not modified)."""
    rows = [list(r) for r in A]
    nrow = len(rows)
    ncol = len(rows[0]) if nrow else 0
    rank = 0
    col = 0
    for col in range(ncol):
        piv = next((r for r in range(rank, nrow) if rows[r][col] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        inv = 1 / prow[col]
        for r in range(rank + 1, nrow):
            f = rows[r][col] * inv
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], prow)]
        rank += 1
        if rank == nrow:
            break
    return rank


# ---------------------------------------------------------------------------
# complex rational matrices: entries are (re, im) Fraction pairs


def _cmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def _cdiv(x, y):
    den = y[0] * y[0] + y[1] * y[1]
    return (
        (x[0] * y[0] + x[1] * y[1]) / den,
        (x[1] * y[0] - x[0] * y[1]) / den,
    )


def _cmat_mul(A, B):
    n = len(A)
    m = len(B[0])
    k = len(B)
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            re = _ZERO
            im = _ZERO
            for t in range(k):
                a = A[i][t]
                b = B[t][j]
                re += a[0] * b[0] - a[1] * b[1]
                im += a[0] * b[1] + a[1] * b[0]
            row.append((re, im))
        out.append(tuple(row))
    return tuple(out)


def _cmat_rank(A):
    rows = [list(r) for r in A]
    nrow = len(rows)
    ncol = len(rows[0]) if nrow else 0
    rank = 0
    for col in range(ncol):
        piv = next(
            (r for r in range(rank, nrow) if rows[r][col][0] or rows[r][col][1]),
            None,
        )
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        for r in range(rank + 1, nrow):
            e = rows[r][col]
            if e[0] or e[1]:
                f = _cdiv(e, prow[col])
                rows[r] = [
                    (x[0] - (f[0] * y[0] - f[1] * y[1]),
                     x[1] - (f[0] * y[1] + f[1] * y[0]))
                    for x, y in zip(rows[r], prow)
                ]
        rank += 1
        if rank == nrow:
            break
    return rank


def rank_sequence(A, re, im, kmax):
    """Ranks of (A - (re + i*im) I)^k for k = 0..kmax, exactly over Q(i).

    A is a real rational matrix.  For im == 0 this is plain rational
    elimination in disguise; the complex path handles both uniformly.
    """
    d = len(A)
    re = Fraction(re)
    im = Fraction(im)
    S = tuple(
        tuple(
            (A[i][j] - (re if i == j else 0), -im if i == j else _ZERO)
            for j in range(d)
        )
        for i in range(d)
    )
    ranks = [d]
    P = tuple(
        tuple(((_ONE if i == j else _ZERO), _ZERO) for j in range(d))
        for i in range(d)
    )
    for _ in range(kmax):
        P = _cmat_mul(P, S)
        ranks.append(_cmat_rank(P))
    return ranks


# ---------------------------------------------------------------------------
# characteristic polynomial and univariate polynomial helpers
#
# Polynomials are lists of Fraction coefficients, lowest degree first.


def charpoly(A):
    """Monic characteristic polynomial det(xI - A) by Faddeev-LeVerrier."""
    d = len(A)
    cs = [_ONE]  # coefficient of x^d
    M = A
    lower = []
    for k in range(1, d + 1):
        ck = -sum(M[i][i] for i in range(d)) / k
        lower.append(ck)
        if k < d:
            shifted = tuple(
                tuple(M[i][j] + (ck if i == j else 0) for j in range(d))
                for i in range(d)
            )
            M = mat_mul(A, shifted)
    # lower[k-1] is the coefficient of x^(d-k)
    return list(reversed(lower)) + [_ONE]


def poly_deg(p):
    d = len(p) - 1
    while d > 0 and p[d] == 0:
        d -= 1
    return d


def poly_trim(p):
    return p[: poly_deg(p) + 1]


def poly_divmod(num, den):
    """Exact (quotient, remainder) of rational polynomials."""
    num = list(poly_trim(num))
    den = poly_trim(den)
    dd = len(den) - 1
    assert den[dd] != 0
    if len(num) - 1 < dd:
        return [_ZERO], num
    q = [_ZERO] * (len(num) - dd)
    for k in range(len(num) - dd - 1, -1, -1):
        c = num[dd + k] / den[dd]
        q[k] = c
        if c:
            for j in range(dd + 1):
                num[k + j] -= c * den[j]
    rem = poly_trim(num[:dd] if dd else [_ZERO])
    return q, (rem if rem else [_ZERO])


def poly_gcd(a, b):
    a = list(poly_trim(a))
    b = list(poly_trim(b))
    while poly_deg(b) > 0 or b[0] != 0:
        _, r = poly_divmod(a, b)
        a, b = b, r
    lead = a[poly_deg(a)]
    return [c / lead for c in poly_trim(a)]


def poly_deriv(p):
    if len(p) == 1:
        return [_ZERO]
    return [k * c for k, c in enumerate(p)][1:]


def poly_squarefree(p):
    """p / gcd(p, p'): same roots, all simple."""
    g = poly_gcd(p, poly_deriv(p))
    q, r = poly_divmod(p, g)
    assert r == [_ZERO], "square-free division must be exact"
    return poly_trim(q)


def poly_eval_complex(p, z):
    acc = 0j
    for c in reversed(p):
        acc = acc * z + float(c)
    return acc


def fraction_gcd(values):
    """gcd of a nonempty list of positive Fractions: gcd(nums)/lcm(dens)."""
    num = 0
    den = 1
    for v in values:
        v = Fraction(v)
        assert v > 0
        num = gcd(num, v.numerator)
        den = den * v.denominator // gcd(den, v.denominator)
    return Fraction(num, den)
