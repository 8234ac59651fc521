"""Small exact linear algebra: characteristic polynomials, determinants,
resultants and discriminants.  Matrices are lists of rows."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def identity(n: int, one=1, zero=0) -> list:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list:
    cols = list(zip(*B))
    out = []
    for row in A:
        new = []
        for col in cols:
            acc = row[0] * col[0]
            for x, y in zip(row[1:], col[1:]):
                acc = acc + x * y
            new.append(acc)
        out.append(new)
    return out


def charpoly(M: Sequence[Sequence]) -> list:
    """Coefficients [1, c_1, ..., c_n] of det(t I - M), division-free (Berkowitz).

    Only ring operations are used, so this is valid over any commutative ring.
    """
    n = len(M)
    if n == 0:
        return [1]
    zero = M[0][0] - M[0][0]
    one = zero + 1
    # vector of det(tI - M_k) for leading principal blocks, built up one row at a time
    poly = [one, -M[0][0]]
    for k in range(1, n):
        R = [M[k][j] for j in range(k)]        # row k, columns < k
        C = [M[i][k] for i in range(k)]        # column k, rows < k
        A = [row[:k] for row in M[:k]]
        akk = M[k][k]
        # Toeplitz column: 1, -akk, -R C, -R A C, -R A^2 C, ...
        col = [one, -akk]
        v = C
        for _ in range(k):
            s = zero
            for x, y in zip(R, v):
                s = s + x * y
            col.append(-s)
            v = [sum((A[i][j] * v[j] for j in range(k)), zero) for i in range(k)]
        new = []
        for i in range(k + 2):
            s = zero
            for j in range(min(i, k) + 1):
                s = s + col[i - j] * poly[j]
            new.append(s)
        poly = new
    return poly


def det_bareiss(M: Sequence[Sequence]) -> Fraction | int:
    """Exact determinant over ZZ/QQ by fraction-free elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                A[i][j] = num / prev if isinstance(num, Fraction) or isinstance(prev, Fraction) else num // prev
            A[i][k] = 0
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def sylvester_matrix(f: Sequence, g: Sequence) -> list:
    """Sylvester matrix of f, g given as coefficient lists, leading first."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    zero = f[0] - f[0]
    rows = []
    for i in range(n):
        rows.append([zero] * i + list(f) + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + list(g) + [zero] * (size - n - 1 - i))
    return rows


def resultant(f: Sequence, g: Sequence):
    return det_bareiss(sylvester_matrix(f, g))


def discriminant_monic(a: Sequence):
    """Discriminant of z^n + a_1 z^(n-1) + ... + a_n (exact)."""
    a = [Fraction(x) for x in a]
    n = len(a)
    f = [Fraction(1), *a]
    df = [(n - i) * c for i, c in enumerate(f[:-1])]
    if n == 1:
        return Fraction(1)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, df)


def companion(a: Sequence) -> list:
    """Matrix of multiplication by z on K[z]/(z^n + a_1 z^(n-1) + ... + a_n),
    basis 1, z, ..., z^(n-1), acting on column vectors."""
    n = len(a)
    zero = a[0] - a[0]
    one = zero + 1
    M = [[zero] * n for _ in range(n)]
    for i in range(1, n):
        M[i][i - 1] = one
    for i in range(n):
        M[i][n - 1] = -a[n - 1 - i]
    return M
