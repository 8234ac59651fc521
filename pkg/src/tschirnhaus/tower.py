"""Multiquadratic number fields QQ(sqrt r_1, ..., sqrt r_k).

An element is a map from bitmasks S to rationals, read as
sum_S c_S * prod_{i in S} sqrt(r_i).  Each square root's branch is fixed
when it is adjoined (the principal complex root of the requested radicand,
even when the radicand reduces to an earlier one).
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath


def _rational_sqrt(q: Fraction) -> Fraction | None:
    """Nonnegative rational square root of q, or None."""
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    s, t = math.isqrt(num), math.isqrt(den)
    if s * s == num and t * t == den:
        return Fraction(s, t)
    return None


class RadicalTower:
    """The field generated by the square roots adjoined so far."""

    def __init__(self):
        self.radicands: list = []

    @property
    def degree(self) -> int:
        return 2 ** len(self.radicands)

    def _basis_product(self, S: int, T: int) -> tuple:
        """sqrt(R_S) * sqrt(R_T) = factor * sqrt(R_{S^T})."""
        factor = Fraction(1)
        common = S & T
        i = 0
        while common:
            if common & 1:
                factor *= self.radicands[i]
            common >>= 1
            i += 1
        return factor, S ^ T

    def _radicand_product(self, S: int) -> Fraction:
        out = Fraction(1)
        for i, r in enumerate(self.radicands):
            if S >> i & 1:
                out *= r
        return out

    def element(self, coeffs) -> "TowerElem":
        if not isinstance(coeffs, dict):
            coeffs = {0: Fraction(coeffs)}
        return TowerElem(self, coeffs)

    def sqrt(self, q) -> "TowerElem":
        """A square root of the rational q, adjoining a new generator if needed."""
        q = Fraction(q)
        if q == 0:
            return self.element(0)
        s = _rational_sqrt(q)
        if s is not None:
            return self.element(s)
        # q * R_S a rational square means sqrt(q) = +-s * sqrt(R_S) / R_S
        for S in range(1, 2 ** len(self.radicands)):
            R = self._radicand_product(S)
            s = _rational_sqrt(q * R)
            if s is not None:
                cand = self.element({S: s / R})
                with mpmath.workprec(64):
                    principal = mpmath.sqrt(mpmath.mpf(q.numerator) / q.denominator)
                    if abs(cand.numeric() - principal) > abs(cand.numeric() + principal):
                        cand = -cand
                return cand
        self.radicands.append(q)
        return self.element({1 << (len(self.radicands) - 1): Fraction(1)})

    def generator_values(self) -> list:
        return [mpmath.sqrt(mpmath.mpf(r.numerator) / r.denominator) for r in self.radicands]

    def __repr__(self):
        return "QQ(" + ", ".join(f"sqrt({r})" for r in self.radicands) + ")"


class TowerElem:
    __slots__ = ("tower", "c")

    def __init__(self, tower: RadicalTower, coeffs: dict):
        self.tower = tower
        self.c = {S: Fraction(v) for S, v in coeffs.items() if v}

    def _lift(self, other):
        if isinstance(other, TowerElem):
            if other.tower is not self.tower:
                raise TypeError("elements of different towers")
            return other
        if isinstance(other, (int, Fraction)):
            return TowerElem(self.tower, {0: other})
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        out = dict(self.c)
        for S, v in o.c.items():
            out[S] = out.get(S, 0) + v
        return TowerElem(self.tower, out)

    __radd__ = __add__

    def __neg__(self):
        return TowerElem(self.tower, {S: -v for S, v in self.c.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return TowerElem(self.tower, {S: v * other for S, v in self.c.items()})
        o = self._lift(other)
        if o is NotImplemented:
            return o
        out: dict = {}
        for S, x in self.c.items():
            for T, y in o.c.items():
                f, U = self.tower._basis_product(S, T)
                out[U] = out.get(U, 0) + f * x * y
        return TowerElem(self.tower, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = TowerElem(self.tower, {0: 1})
        base = self
        while e:
            if e & 1:
                out = out * base
            e >>= 1
            if e:
                base = base * base
        return out

    def conjugate(self, i: int) -> "TowerElem":
        """Flip the sign of sqrt(r_i)."""
        return TowerElem(self.tower, {S: (-v if S >> i & 1 else v) for S, v in self.c.items()})

    def inverse(self) -> "TowerElem":
        if not self.c:
            raise ZeroDivisionError("inverse of zero")
        num = TowerElem(self.tower, {0: 1})
        den = self
        for i in range(len(self.tower.radicands)):
            conj = den.conjugate(i)
            num = num * conj
            den = den * conj
        # den is now rational
        return num * (1 / den.c[0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return TowerElem(self.tower, {S: v / other for S, v in self.c.items()})
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __eq__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return NotImplemented
        return self.c == o.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __bool__(self):
        return bool(self.c)

    def is_rational(self) -> bool:
        return all(S == 0 for S in self.c)

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.c.get(0, Fraction(0))

    def numeric(self):
        """Complex value at the current mpmath precision."""
        gens = self.tower.generator_values()
        total = mpmath.mpc(0)
        for S, v in self.c.items():
            t = mpmath.mpf(v.numerator) / v.denominator
            for i, g in enumerate(gens):
                if S >> i & 1:
                    t = t * g
            total += t
        return total

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for S in sorted(self.c):
            v = self.c[S]
            rad = "*".join(f"sqrt({self.tower.radicands[i]})" for i in range(len(self.tower.radicands)) if S >> i & 1)
            parts.append(f"{v}*{rad}" if rad else str(v))
        return " + ".join(parts)

    __repr__ = __str__
