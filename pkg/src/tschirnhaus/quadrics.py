"""Quadratic forms over QQ: diagonalization by completing squares and
maximal isotropic subspaces over a radical tower."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .multipoly import MultiPoly
from .tower import RadicalTower


class DegenerateQuadricError(ArithmeticError):
    pass


@dataclass(frozen=True)
class QuadricForm:
    """Q(x) = x^T G x with G symmetric."""

    gram: tuple

    def __post_init__(self):
        G = tuple(tuple(row) for row in self.gram)
        object.__setattr__(self, "gram", G)
        m = len(G)
        if any(len(row) != m for row in G):
            raise ValueError("Gram matrix must be square")
        if any(G[i][j] != G[j][i] for i in range(m) for j in range(i)):
            raise ValueError("Gram matrix must be symmetric")

    @property
    def dim(self) -> int:
        return len(self.gram)

    def __call__(self, x: Sequence):
        return self.bilinear(x, x)

    def bilinear(self, x: Sequence, y: Sequence):
        total = 0
        for i, row in enumerate(self.gram):
            if x[i] == 0:
                continue
            s = 0
            for j, g in enumerate(row):
                if g != 0 and y[j] != 0:
                    s = s + y[j] * g
            total = total + x[i] * s
        return total

    @classmethod
    def from_polynomial(cls, poly: MultiPoly, names: Sequence[str] | None = None) -> "QuadricForm":
        names = tuple(names or poly.vars)
        if not poly.is_homogeneous(names, 2) or not set(poly.variables_used()) <= set(names):
            raise ValueError("expected a quadratic form in the given variables")
        pos = [poly.vars.index(v) for v in names]
        m = len(names)
        G = [[Fraction(0)] * m for _ in range(m)]
        for exp, c in poly.items():
            hit = [k for k, p in enumerate(pos) for _ in range(exp[p])]
            i, j = hit
            if i == j:
                G[i][i] += Fraction(c)
            else:
                G[i][j] += Fraction(c) / 2
                G[j][i] += Fraction(c) / 2
        return cls(G)


def diagonalize(Q: QuadricForm) -> tuple:
    """(L, d) with L^T G L = diag(d) and L invertible over QQ.

    Symmetric elimination; a zero pivot is replaced by a nonzero later
    diagonal entry (swap) or, failing that, by e_k + e_j for a hyperbolic
    partner j.  Zero entries of d mark the radical of Q.
    """
    m = Q.dim
    A = [[Fraction(x) for x in row] for row in Q.gram]
    L = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]

    def add_col(src: int, dst: int, c: Fraction):
        # basis change e_dst <- e_dst + c e_src, applied by congruence
        for row in A:
            row[dst] += c * row[src]
        for j in range(m):
            A[dst][j] += c * A[src][j]
        for row in L:
            row[dst] += c * row[src]

    def swap(i: int, j: int):
        for row in A:
            row[i], row[j] = row[j], row[i]
        A[i], A[j] = A[j], A[i]
        for row in L:
            row[i], row[j] = row[j], row[i]

    for k in range(m):
        if A[k][k] == 0:
            j = next((j for j in range(k + 1, m) if A[j][j] != 0), None)
            if j is not None:
                swap(k, j)
            else:
                j = next((j for j in range(k + 1, m) if A[k][j] != 0), None)
                if j is None:
                    continue
                add_col(j, k, Fraction(1))
        piv = A[k][k]
        for j in range(k + 1, m):
            if A[k][j] != 0:
                add_col(k, j, -A[k][j] / piv)
    return L, [A[i][i] for i in range(m)]


def _pairs(d: Sequence[Fraction]) -> list:
    """Pair indices, opposite signs first, so rational isotropics come cheaply."""
    pos = [i for i, x in enumerate(d) if x > 0]
    neg = [i for i, x in enumerate(d) if x < 0]
    pairs = [tuple(sorted(pr)) for pr in zip(pos, neg)]
    rest = sorted(pos[len(pairs):] + neg[len(pairs):])
    pairs += [(rest[k], rest[k + 1]) for k in range(0, len(rest) - 1, 2)]
    return sorted(pairs)


def maximal_isotropic(Q: QuadricForm, diagonalization: tuple | None = None,
                      tower: RadicalTower | None = None, count: int | None = None) -> list:
    """Basis of an isotropic subspace of dimension floor(dim/2).

    Each diagonal pair (i, j) contributes sqrt(-d_j/d_i) e_i + e_j in the
    diagonal coordinates, mapped back through L.  Entries are tower
    elements.  ``count`` limits how many basis vectors are built.
    """
    L, d = diagonalization or diagonalize(Q)
    if any(x == 0 for x in d):
        raise DegenerateQuadricError("quadric is degenerate (zero diagonal entry)")
    tower = tower or RadicalTower()
    m = len(d)
    basis = []
    for i, j in _pairs(d)[:count]:
        s = tower.sqrt(-d[j] / d[i])
        y = {i: s, j: tower.element(1)}
        vec = []
        for r in range(m):
            acc = tower.element(0)
            for c, val in y.items():
                if L[r][c] != 0:
                    acc = acc + val * L[r][c]
            vec.append(acc)
        basis.append(vec)
    return basis
