"""Tschirnhaus forms and the coefficient-transformation map.

For a monic degree-n polynomial with power sums p_k and a transformation
``y = b_0 + b_1 z + ... + b_{n-1} z^(n-1)``, the i-th power sum of the
transformed roots is the form

    T_i = sum_{|k| = i} multinomial(i; k) * p_{||k||} * b^k,

where |k| = sum k_j and ||k|| = sum j*k_j.  ``T_i`` is homogeneous of
degree i in b with coefficients in ZZ[a_1..a_n].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterator, Sequence

from .linalg import charpoly, companion, identity, matmul
from .multipoly import MultiPoly, iter_compositions
from .rings import ZZ
from .symmetric import (
    CoeffVector,
    coeff_vars,
    coeffs_from_power_sums,
    generic_power_sums,
    parse_scalar_list,
    power_sums_from_coeffs,
)

ORACLE_CAP = 8
PENCILS = ("radical", "linear")


def b_vars(n: int, reduced: bool = False) -> tuple:
    return tuple(f"b_{j}" for j in range(1 if reduced else 0, n))


def multinomial(kappa: Sequence[int]) -> int:
    out, total = 1, 0
    for k in kappa:
        total += k
        out *= math.comb(total, k)
    return out


def weight(kappa: Sequence[int], offset: int = 0) -> int:
    """||k|| = sum_j j*k_j, with j counted from ``offset``."""
    return sum((j + offset) * k for j, k in enumerate(kappa))


@dataclass(frozen=True)
class TschirnhausVector:
    b: tuple
    reduced: bool = False

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(self.b))
        if not self.b:
            raise ValueError("b needs n >= 1 entries")
        if self.reduced and self.b[0] != 0:
            raise ValueError("a reduced transformation has b_0 = 0")

    @property
    def n(self) -> int:
        return len(self.b)

    def is_nondegenerate(self) -> bool:
        """Some b_j with j > 0 is nonzero (otherwise y is constant)."""
        return any(x != 0 for x in self.b[1:])

    @classmethod
    def parse(cls, text: str) -> "TschirnhausVector":
        return cls(parse_scalar_list(text))


@dataclass(frozen=True)
class CompleteIntersectionSpec:
    n: int
    degrees: tuple
    reduced: bool = False

    def __post_init__(self):
        degs = tuple(int(d) for d in self.degrees)
        object.__setattr__(self, "degrees", degs)
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not degs or any(d < 1 for d in degs):
            raise ValueError("degrees must be >= 1")
        if any(x >= y for x, y in zip(degs, degs[1:])):
            raise ValueError(f"degrees must be strictly increasing, got {degs}")


@dataclass(frozen=True)
class TschirnhausForm:
    """Degree-i Tschirnhaus form for degree-n polynomials.

    ``body`` is expanded lazily; ``iter_kappa`` and ``iter_terms`` stream
    without materializing it.
    """

    n: int
    i: int
    reduced: bool = False
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def b_names(self) -> tuple:
        return b_vars(self.n, self.reduced)

    @property
    def vars(self) -> tuple:
        return self.b_names + coeff_vars(self.n)

    @property
    def kmax(self) -> int:
        return self.i * (self.n - 1)

    def iter_kappa(self) -> Iterator[tuple]:
        """(kappa, multinomial, ||kappa||) over kappa in N^n with |kappa| = i."""
        nb = len(self.b_names)
        off = 1 if self.reduced else 0
        for kappa in iter_compositions(self.i, nb):
            yield kappa, multinomial(kappa), weight(kappa, off)

    def power_sums(self) -> tuple:
        return generic_power_sums(self.n, self.kmax)

    def iter_terms(self) -> Iterator[tuple]:
        """Expanded (exponent, coefficient) pairs, kappa-major order."""
        ps = self.power_sums()
        for kappa, mult, w in self.iter_kappa():
            for mu, c in ps[w].items():
                yield kappa + mu, mult * c

    @cached_property
    def body(self) -> MultiPoly:
        return MultiPoly._raw(ZZ, self.vars, dict(self.iter_terms()))

    def evaluate(self, a, b):
        """Value at concrete (a, b) without expanding the body."""
        a = tuple(a)
        b = tuple(b)
        if self.reduced and len(b) == self.n:
            b = b[1:]
        ps = power_sums_from_coeffs(a, self.kmax).p
        total = ps[0] - ps[0]
        for kappa, mult, w in self.iter_kappa():
            t = ps[w] * mult
            for x, k in zip(b, kappa):
                if k:
                    t = t * x ** k
            total = total + t
        return total


def tschirnhaus_form(n: int, i: int, reduced: bool = False) -> TschirnhausForm:
    if n < 1 or i < 1:
        raise ValueError("need n >= 1 and i >= 1")
    return TschirnhausForm(n, i, reduced)


def complete_intersection(spec: CompleteIntersectionSpec) -> list:
    return [tschirnhaus_form(spec.n, d, spec.reduced) for d in spec.degrees]


# -- pencils ---------------------------------------------------------------

def pencil_coeffs(n: int, pencil: str, a) -> tuple:
    """Coefficient vector of x^n + a (radical) or x^n + a*x (linear)."""
    zero = a - a
    if pencil == "radical":
        return (zero,) * (n - 1) + (a,)
    if pencil == "linear":
        if n < 2:
            raise ValueError("the linear pencil needs n >= 2")
        return (zero,) * (n - 2) + (a, zero)
    raise ValueError(f"unknown pencil {pencil!r}; expected one of {PENCILS}")


@lru_cache(maxsize=64)
def pencil_power_sums(n: int, pencil: str, kmax: int) -> tuple:
    a = MultiPoly.variable(ZZ, ("a",), "a")
    return power_sums_from_coeffs(pencil_coeffs(n, pencil, a), kmax).p


def radical_specialize(form: TschirnhausForm, pencil: str = "radical") -> MultiPoly:
    """The form on the pencil x^n + a (or x^n + a*x), as a polynomial in b and a."""
    ps = pencil_power_sums(form.n, pencil, form.kmax)
    names = form.b_names + ("a",)
    terms = {}
    for kappa, mult, w in form.iter_kappa():
        for (e,), c in ps[w].items():
            terms[kappa + (e,)] = mult * c
    return MultiPoly(ZZ, names, terms)


# -- the transformation map --------------------------------------------------

def _promote(x):
    return Fraction(x) if isinstance(x, int) else x


def _poly_mul_trunc(f: list, g: list) -> list:
    zero = f[0] - f[0]
    out = [zero] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x == 0:
            continue
        for j, y in enumerate(g):
            out[i + j] = out[i + j] + x * y
    return out


def transformed_power_sums(a, b, kmax: int) -> list:
    """p_k(c) for k = 0..kmax, where c is the transform of a by b.

    Uses p_k(c) = sum_m [z^m] w(z)^k * p_m(a) with w = sum_j b_j z^j.
    Division-free, so valid in any characteristic.
    """
    a = tuple(_promote(x) for x in (a.a if isinstance(a, CoeffVector) else a))
    b = tuple(_promote(x) for x in (b.b if isinstance(b, TschirnhausVector) else b))
    n = len(a)
    if len(b) != n:
        raise ValueError(f"b has length {len(b)}, expected {n}")
    ps = power_sums_from_coeffs(a, kmax * (n - 1)).p
    zero = ps[0] - ps[0]
    out = [ps[0]]
    w = list(b)
    power = [zero + 1]
    for _ in range(kmax):
        power = _poly_mul_trunc(power, w)
        s = zero
        for m, coef in enumerate(power):
            if coef != 0:
                s = s + coef * ps[m]
        out.append(s)
    return out


def transform_coeffs(a, b) -> CoeffVector:
    """Coefficients of prod_i (y - w(z_i)) over the roots z_i of a."""
    n = len(a.a if isinstance(a, CoeffVector) else a)
    return coeffs_from_power_sums(transformed_power_sums(a, b, n), n)


def transform_coeffs_oracle(a, b, cap: int = ORACLE_CAP) -> CoeffVector:
    """Same map via the characteristic polynomial of w(M), M the companion matrix."""
    a = tuple(_promote(x) for x in (a.a if isinstance(a, CoeffVector) else a))
    b = tuple(_promote(x) for x in (b.b if isinstance(b, TschirnhausVector) else b))
    n = len(a)
    if n > cap:
        raise ValueError(f"oracle limited to n <= {cap}, got n = {n}")
    if len(b) != n:
        raise ValueError(f"b has length {len(b)}, expected {n}")
    M = companion(a)
    zero = a[0] - a[0]
    P = identity(n, zero + 1, zero)
    B = [[zero] * n for _ in range(n)]
    for j, bj in enumerate(b):
        if j:
            P = matmul(P, M)
        if bj != 0:
            B = [[x + bj * y for x, y in zip(rb, rp)] for rb, rp in zip(B, P)]
    return CoeffVector(charpoly(B)[1:])


def membership(a, b, degrees: Sequence[int] | CompleteIntersectionSpec, tol=None) -> bool:
    """Whether b lies on T_{degrees}(a): the listed power sums of c vanish."""
    if isinstance(degrees, CompleteIntersectionSpec):
        degrees = degrees.degrees
    ps = transformed_power_sums(a, b, max(degrees))
    if tol is None:
        return all(ps[d] == 0 for d in degrees)
    return all(abs(ps[d]) <= tol for d in degrees)


def coefficients_vanish(a, b, k: int, tol=None) -> bool:
    """Whether c_1 = ... = c_k = 0 for the transformed polynomial."""
    c = transform_coeffs(a, b).a[:k]
    if tol is None:
        return all(x == 0 for x in c)
    return all(abs(x) <= tol for x in c)


# -- text output ---------------------------------------------------------------

def _monomial(names: Sequence[str], exp: Sequence[int]) -> str:
    return "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(names, exp) if k)


def iter_form_text(form: TschirnhausForm, expand: bool = True) -> Iterator[str]:
    """Stream the form as signed text chunks (" + term" / " - term").

    With ``expand=False`` the power sums stay symbolic as p_k.
    """
    first = True

    def emit(coef: int, mono: str):
        nonlocal first
        mag = abs(coef)
        body = mono if mag == 1 and mono else (f"{mag}*{mono}" if mono else str(mag))
        if first:
            first = False
            return ("-" if coef < 0 else "") + body
        return (" - " if coef < 0 else " + ") + body

    names = form.b_names
    if not expand:
        for kappa, mult, w in form.iter_kappa():
            mono = _monomial(names, kappa)
            if w == 0:
                yield emit(mult * form.n, mono)
            else:
                yield emit(mult, f"p_{w}*{mono}")
        return
    anames = coeff_vars(form.n)
    ps = form.power_sums()
    emitted = False
    for kappa, mult, w in form.iter_kappa():
        bmono = _monomial(names, kappa)
        for mu, c in ps[w].items():
            amono = _monomial(anames, mu)
            mono = "*".join(x for x in (bmono, amono) if x)
            emitted = True
            yield emit(mult * c, mono)
    if not emitted:
        yield "0"
