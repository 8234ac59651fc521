"""Newton's identities: coefficients <-> power sums <-> roots.

A monic polynomial ``z^n + a_1 z^(n-1) + ... + a_n`` is stored as its
coefficient tuple ``(a_1, ..., a_n)``; its power sums are
``p_k = sum_j x_j^k`` over the roots.  The recurrences only use ring
operations plus division by 1..n (inverse direction), so they work for
ints/Fractions, finite-field elements, MultiPolys and mpmath numbers alike.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath

from .multipoly import MultiPoly
from .rings import ZZ, NonInvertibleError


def parse_scalar_list(text: str) -> tuple:
    """Comma-separated rationals ``num/den`` -> tuple of Fractions."""
    parts = [t.strip() for t in text.split(",")]
    if not parts or any(not t for t in parts):
        raise ValueError(f"malformed coefficient list {text!r}")
    return tuple(Fraction(t) for t in parts)


def format_scalar(x) -> str:
    if isinstance(x, Fraction) and x.denominator == 1:
        return str(x.numerator)
    return str(x)


@dataclass(frozen=True)
class CoeffVector:
    """Coefficients a_1..a_n of the monic z^n + a_1 z^(n-1) + ... + a_n."""

    a: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        if not self.a:
            raise ValueError("a coefficient vector needs n >= 1 entries")

    @property
    def n(self) -> int:
        return len(self.a)

    def __len__(self):
        return len(self.a)

    def __getitem__(self, k):
        return self.a[k]

    def __iter__(self):
        return iter(self.a)

    @classmethod
    def parse(cls, text: str) -> "CoeffVector":
        return cls(parse_scalar_list(text))

    def __str__(self):
        return ",".join(format_scalar(x) for x in self.a)

    def monic(self) -> list:
        """Full coefficient list, leading 1 first."""
        one = self.a[0] - self.a[0] + 1
        return [one, *self.a]


@dataclass(frozen=True)
class PowerSums:
    """p_0..p_kmax with p_0 = n."""

    n: int
    p: tuple

    def __post_init__(self):
        object.__setattr__(self, "p", tuple(self.p))
        if not self.p:
            raise ValueError("power sums need at least p_0")

    @property
    def kmax(self) -> int:
        return len(self.p) - 1

    def __getitem__(self, k):
        return self.p[k]

    def __len__(self):
        return len(self.p)


def _as_tuple(a) -> tuple:
    return tuple(a.a) if isinstance(a, CoeffVector) else tuple(a)


def power_sums_from_coeffs(a, kmax: int) -> PowerSums:
    """Standard-sign Newton recurrence.

    p_k = -(k a_k + sum_{i<k} a_{k-i} p_i)  for k <= n
    p_k = -sum_{i=k-n}^{k-1} a_{k-i} p_i    for k > n
    """
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    a = _as_tuple(a)
    n = len(a)
    zero = a[0] - a[0]
    p = [zero + n]
    for k in range(1, kmax + 1):
        acc = a[k - 1] * k if k <= n else zero
        for i in range(max(1, k - n), k):
            acc = acc + a[k - i - 1] * p[i]
        p.append(-acc)
    return PowerSums(n, p)


def coeffs_from_power_sums(p, n: int | None = None) -> CoeffVector:
    """Inverse Newton: a_k = -(p_k + sum_{i<k} a_{k-i} p_i) / k.

    Integer inputs are promoted to Fractions.  Raises NonInvertibleError
    when some k <= n is not a unit of the coefficient ring.
    """
    if isinstance(p, PowerSums):
        n = p.n if n is None else n
        seq = p.p
    else:
        seq = tuple(p)
        n = int(seq[0]) if n is None else n
    if len(seq) <= n:
        raise ValueError(f"need power sums up to p_{n}, got up to p_{len(seq) - 1}")
    seq = tuple(Fraction(x) if isinstance(x, int) else x for x in seq)
    a: list = []
    for k in range(1, n + 1):
        acc = seq[k]
        for i in range(1, k):
            acc = acc + a[k - i - 1] * seq[i]
        try:
            a.append(_divide(-acc, k))
        except ZeroDivisionError as exc:
            raise NonInvertibleError(f"{k} is not invertible in the coefficient ring") from exc
    return CoeffVector(a)


def _divide(x, k: int):
    if isinstance(x, MultiPoly):
        return x.scale_div(k)
    return x / k


def power_sums_from_roots(roots: Sequence, kmax: int) -> tuple:
    """p_k = sum_j roots_j^k as mpmath complex numbers."""
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    roots = [mpmath.mpc(r) for r in roots]
    out = [mpmath.mpc(len(roots))]
    powers = [mpmath.mpc(1)] * len(roots)
    for _ in range(kmax):
        powers = [x * r for x, r in zip(powers, roots)]
        out.append(mpmath.fsum(powers))
    return tuple(out)


def coeff_vars(n: int) -> tuple:
    return tuple(f"a_{k}" for k in range(1, n + 1))


@lru_cache(maxsize=64)
def generic_power_sums(n: int, kmax: int) -> tuple:
    """p_0..p_kmax as integer polynomials in a_1..a_n (cached)."""
    names = coeff_vars(n)
    gens = MultiPoly.gens(ZZ, names)
    return power_sums_from_coeffs(gens, kmax).p


def roots_of(a, dps: int | None = None) -> list:
    """Numeric roots of the monic polynomial with coefficients a."""
    coeffs = [1, *(_to_mp(x) for x in _as_tuple(a))]
    kw = {"maxsteps": 200, "extraprec": 2 * mpmath.mp.prec}
    try:
        return list(mpmath.polyroots(coeffs, **kw))
    except mpmath.libmp.NoConvergence:
        kw["maxsteps"] = 2000
        return list(mpmath.polyroots(coeffs, **kw))


def _to_mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpmathify(x)
