"""Exact coefficient rings: ZZ, QQ and finite fields GF(p^m).

Scalars are plain Python ``int`` (ZZ), ``fractions.Fraction`` (QQ) and
:class:`GFElement` (finite fields).  Every ring knows how to validate an
operand; mixing rings raises :class:`RingMismatchError` instead of coercing.
The only implicit conversion is the canonical map from ``int`` literals.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np


class RingMismatchError(TypeError):
    """Raised when values from different coefficient rings are combined."""


class NonInvertibleError(ZeroDivisionError):
    """Raised when dividing by an element that has no inverse in the ring."""


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


class IntegerRing:
    name = "ZZ"
    characteristic = 0

    def coerce(self, x):
        if _is_int(x):
            return x
        raise RingMismatchError(f"{x!r} is not an element of ZZ")

    def contains(self, x) -> bool:
        return _is_int(x)

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def divide(self, x, k):
        if k == 0:
            raise NonInvertibleError("division by zero")
        q, r = divmod(x, k)
        if r:
            raise NonInvertibleError(f"{k} does not divide {x} in ZZ")
        return q

    def parse(self, text: str):
        return int(text)

    def format(self, x) -> str:
        return str(x)

    def to_json(self):
        return "ZZ"

    def __repr__(self):
        return "ZZ"


class RationalField:
    name = "QQ"
    characteristic = 0

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if _is_int(x):
            return Fraction(x)
        raise RingMismatchError(f"{x!r} is not an element of QQ")

    def contains(self, x) -> bool:
        return isinstance(x, Fraction)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def divide(self, x, k):
        if k == 0:
            raise NonInvertibleError("division by zero")
        return Fraction(x) / k

    def parse(self, text: str):
        return Fraction(text.strip())

    def format(self, x) -> str:
        return str(x)

    def to_json(self):
        return "QQ"

    def __repr__(self):
        return "QQ"


ZZ = IntegerRing()
QQ = RationalField()


# ---------------------------------------------------------------------------
# Polynomials over F_p as coefficient lists (low degree first).  Only what the
# field construction needs: multiplication, remainder, gcd and powering.


def _trim(f: list) -> list:
    while f and f[-1] == 0:
        f.pop()
    return f


def fp_mul(f: Sequence[int], g: Sequence[int], p: int) -> list:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, fi in enumerate(f):
        if fi:
            for j, gj in enumerate(g):
                out[i + j] += fi * gj
    return _trim([c % p for c in out])


def fp_rem(f: Sequence[int], g: Sequence[int], p: int) -> list:
    f = [c % p for c in f]
    _trim(f)
    g = _trim([c % p for c in g])
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    dg = len(g) - 1
    inv_lead = pow(g[-1], -1, p)
    while len(f) - 1 >= dg:
        c = f[-1] * inv_lead % p
        shift = len(f) - 1 - dg
        for j, gj in enumerate(g):
            f[shift + j] = (f[shift + j] - c * gj) % p
        _trim(f)
    return f


def fp_gcd(f: Sequence[int], g: Sequence[int], p: int) -> list:
    f = _trim([c % p for c in f])
    g = _trim([c % p for c in g])
    while g:
        f, g = g, fp_rem(f, g, p)
    if f:
        inv = pow(f[-1], -1, p)
        f = [c * inv % p for c in f]
    return f


def fp_powmod(f: Sequence[int], e: int, mod: Sequence[int], p: int) -> list:
    result = [1]
    base = fp_rem(f, mod, p)
    while e:
        if e & 1:
            result = fp_rem(fp_mul(result, base, p), mod, p)
        e >>= 1
        if e:
            base = fp_rem(fp_mul(base, base, p), mod, p)
    return result


# Dense numpy arithmetic for large extensions of odd characteristic, where the
# list-based routines above are quadratic in pure Python.
DENSE_MIN_DEGREE = 16


class _DenseModulus:
    """Multiplication modulo a monic f over F_p on int64 coefficient arrays.

    ``reduce_rows[k]`` holds x^(m+k) mod f, so reducing a product is one
    matrix-vector product.
    """

    def __init__(self, f: Sequence[int], p: int):
        self.p = p
        self.m = m = len(f) - 1
        rows = np.zeros((max(m - 1, 1), m), dtype=np.int64)
        row = (-np.asarray(f[:m], dtype=np.int64)) % p
        for k in range(m - 1):
            rows[k] = row
            top = row[-1]
            row = np.concatenate(([0], row[:-1]))
            if top:
                row = (row + top * rows[0]) % p
        self.reduce_rows = rows[: m - 1]

    def mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        c = np.convolve(a, b) % self.p
        m = self.m
        out = c[:m].copy()
        high = c[m:]
        if high.size:
            out += high @ self.reduce_rows[: high.size]
        return out % self.p

    def pow(self, a: np.ndarray, e: int) -> np.ndarray:
        result = np.zeros(self.m, dtype=np.int64)
        result[0] = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def to_array(self, v: int) -> np.ndarray:
        out = np.zeros(self.m, dtype=np.int64)
        p = self.p
        i = 0
        while v:
            v, out[i] = divmod(v, p)
            i += 1
        return out

    def from_array(self, a: np.ndarray) -> int:
        v = 0
        for d in a[::-1].tolist():
            v = v * self.p + d
        return v


def _np_trim(a: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(a)
    return a[: nz[-1] + 1] if nz.size else a[:0]


def _np_gcd_degree(f: np.ndarray, g: np.ndarray, p: int) -> int:
    """Degree of gcd(f, g) over F_p (-1 when both are zero)."""
    f, g = _np_trim(f % p), _np_trim(g % p)
    while g.size:
        inv = pow(int(g[-1]), -1, p)
        f = f.copy()
        dg = g.size - 1
        while f.size - 1 >= dg:
            c = int(f[-1]) * inv % p
            shift = f.size - 1 - dg
            f[shift:] = (f[shift:] - c * g) % p
            f = _np_trim(f)
        f, g = g, f
    return f.size - 1


def _dense_is_irreducible(f: Sequence[int], p: int) -> bool:
    ring = _DenseModulus(f, p)
    m = ring.m
    fa = np.asarray(f, dtype=np.int64)
    x = np.zeros(m, dtype=np.int64)
    x[1] = 1
    h = x
    for _ in range(m // 2):
        h = ring.pow(h, p)
        diff = (h - x) % p
        if _np_gcd_degree(fa, diff, p) != 0:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_prime(n: int) -> bool:
    return n >= 2 and prime_factors(n) == [n]


def _f2_mulmod(f: int, g: int, mod: int, deg: int) -> int:
    prod = 0
    while g:
        if g & 1:
            prod ^= f
        f <<= 1
        g >>= 1
    for bit in range(prod.bit_length() - 1, deg - 1, -1):
        if prod >> bit & 1:
            prod ^= mod << (bit - deg)
    return prod


def _f2_gcd(f: int, g: int) -> int:
    while g:
        while f and f.bit_length() >= g.bit_length():
            f ^= g << (f.bit_length() - g.bit_length())
        f, g = g, f
    return f


def fp_is_irreducible(f: Sequence[int], p: int) -> bool:
    """Ben-Or's test for a monic polynomial over F_p.

    gcd(x^(p^i) - x, f) must be 1 for every i <= deg(f)/2; reducible
    inputs usually fail at a small i.
    """
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    if p != 2 and m >= DENSE_MIN_DEGREE:
        return _dense_is_irreducible(list(f), p)
    if p == 2:
        mod = sum((c % 2) << i for i, c in enumerate(f))
        h = 0b10
        for _ in range(m // 2):
            h = _f2_mulmod(h, h, mod, m)
            if _f2_gcd(mod, h ^ 0b10) != 1:
                return False
        return True
    h = [0, 1]
    for _ in range(m // 2):
        h = fp_powmod(h, p, f, p)
        diff = list(h) + [0] * max(0, 2 - len(h))
        diff[1] = (diff[1] - 1) % p
        if len(fp_gcd(f, _trim(diff), p)) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def default_modulus(p: int, m: int) -> tuple[int, ...]:
    """Deterministic irreducible modulus for GF(p^m).

    The least monic irreducible polynomial of degree m when the lower
    coefficients (c_{m-1}, ..., c_0) are read as a base-p numeral.  Constant
    term must be nonzero so the search starts at 1.
    """
    if m == 1:
        return (0, 1)
    for code in range(1, p**m):
        low = [(code // p**i) % p for i in range(m)]
        if low[0] == 0:
            continue
        f = low + [1]
        if fp_is_irreducible(f, p):
            return tuple(f)
    raise ValueError(f"no irreducible polynomial of degree {m} over F_{p}")  # pragma: no cover


class FiniteField:
    """GF(p^m) with elements encoded as integers in [0, p^m).

    The integer ``v`` stands for the residue class of sum_i d_i x^i where
    d_i are the base-p digits of ``v``, modulo the field's irreducible
    modulus.
    """

    def __init__(self, p: int, m: int = 1, modulus: Sequence[int] | None = None):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if m < 1:
            raise ValueError("extension degree must be >= 1")
        if modulus is None:
            modulus = default_modulus(p, m)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != m + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree m")
        if m > 1 and not fp_is_irreducible(list(modulus), p):
            raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = modulus
        self.characteristic = p
        self.name = f"GF({p})" if m == 1 else f"GF({p}^{m})"
        if p == 2 and m > 1:
            self._mod_bits = sum(c << i for i, c in enumerate(modulus))
        self._dense = _DenseModulus(modulus, p) if p != 2 and m >= DENSE_MIN_DEGREE else None

    # -- identity ---------------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, FiniteField)
            and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)
        )

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        return self.name

    # -- raw integer-encoded arithmetic ------------------------------------
    def _digits(self, v: int) -> list:
        p = self.p
        out = []
        for _ in range(self.m):
            v, d = divmod(v, p)
            out.append(d)
        return _trim(out)

    def _undigits(self, ds: Sequence[int]) -> int:
        v = 0
        for d in reversed(ds):
            v = v * self.p + d
        return v

    def raw_add(self, x: int, y: int) -> int:
        if self.m == 1:
            return (x + y) % self.p
        if self.p == 2:
            return x ^ y
        dx, dy = self._digits(x), self._digits(y)
        n = max(len(dx), len(dy))
        dx += [0] * (n - len(dx))
        dy += [0] * (n - len(dy))
        return self._undigits([(a + b) % self.p for a, b in zip(dx, dy)])

    def raw_neg(self, x: int) -> int:
        if self.m == 1:
            return (-x) % self.p
        if self.p == 2:
            return x
        return self._undigits([(-d) % self.p for d in self._digits(x)])

    def raw_mul(self, x: int, y: int) -> int:
        if self.m == 1:
            return x * y % self.p
        if self.p == 2:
            # carry-less product, then reduce by the modulus
            prod = 0
            while y:
                if y & 1:
                    prod ^= x
                x <<= 1
                y >>= 1
            mb, m = self._mod_bits, self.m
            for bit in range(prod.bit_length() - 1, m - 1, -1):
                if prod >> bit & 1:
                    prod ^= mb << (bit - m)
            return prod
        if self._dense is not None:
            d = self._dense
            return d.from_array(d.mul(d.to_array(x), d.to_array(y)))
        prod = fp_mul(self._digits(x), self._digits(y), self.p)
        return self._undigits(fp_rem(prod, self.modulus, self.p))

    def raw_pow(self, x: int, e: int) -> int:
        if e < 0:
            x = self.raw_inv(x)
            e = -e
        if self._dense is not None:
            d = self._dense
            return d.from_array(d.pow(d.to_array(x), e))
        result = 1
        while e:
            if e & 1:
                result = self.raw_mul(result, x)
            e >>= 1
            if e:
                x = self.raw_mul(x, x)
        return result

    def raw_inv(self, x: int) -> int:
        if x == 0:
            raise NonInvertibleError(f"0 is not invertible in {self.name}")
        if self.m == 1:
            return pow(x, -1, self.p)
        return self.raw_pow(x, self.q - 2)

    # -- ring protocol -----------------------------------------------------
    def __call__(self, v: int) -> "GFElement":
        """Element with integer encoding ``v`` (for m == 1: the residue of v)."""
        if self.m == 1:
            return GFElement(self, v % self.p)
        if not 0 <= v < self.q:
            raise ValueError(f"encoding {v} out of range for {self.name}")
        return GFElement(self, v)

    def from_int(self, k: int) -> "GFElement":
        """Image of the integer k under ZZ -> GF(q)."""
        return GFElement(self, k % self.p)

    def coerce(self, x):
        if isinstance(x, GFElement):
            if x.field != self:
                raise RingMismatchError(f"{x!r} belongs to {x.field}, not {self}")
            return x
        if _is_int(x):
            return self.from_int(x)
        raise RingMismatchError(f"{x!r} is not an element of {self}")

    def contains(self, x) -> bool:
        return isinstance(x, GFElement) and x.field == self

    @property
    def zero(self):
        return GFElement(self, 0)

    @property
    def one(self):
        return GFElement(self, 1)

    @property
    def generator_x(self) -> "GFElement":
        """The class of x (or 1 when m == 1)."""
        return GFElement(self, self.p if self.m > 1 else 1)

    def divide(self, x, k):
        return self.coerce(x) / self.coerce(k)

    def elements(self):
        for v in range(self.q):
            yield GFElement(self, v)

    def parse(self, text: str):
        return self(int(text))

    def format(self, x) -> str:
        return str(x.value)

    def to_json(self):
        return {"GF": {"p": self.p, "m": self.m, "modulus": list(self.modulus)}}

    # -- multiplicative structure -------------------------------------------
    def element_order(self, x: "GFElement") -> int:
        x = self.coerce(x)
        if x.value == 0:
            raise ValueError("0 has no multiplicative order")
        order = self.q - 1
        for ell in prime_factors(self.q - 1):
            while order % ell == 0 and (x ** (order // ell)).value == 1:
                order //= ell
        return order

    def has_order(self, x: "GFElement", N: int) -> bool:
        """Whether x has multiplicative order exactly N (needs only N's factors)."""
        x = self.coerce(x)
        if x.value == 0 or (x ** N).value != 1:
            return False
        return all((x ** (N // ell)).value != 1 for ell in prime_factors(N))

    def primitive_root_of_unity(self, N: int) -> "GFElement":
        """Deterministic element of exact multiplicative order N: the first
        v = 1, 2, ... (in encoding order) whose power v^((q-1)/N) works."""
        if (self.q - 1) % N:
            raise ValueError(f"{N} does not divide |{self.name}^*| = {self.q - 1}")
        ells = prime_factors(N)
        # constants have order dividing p - 1 and cannot help otherwise
        start = 1 if (self.p - 1) % N == 0 or self.m == 1 else self.p
        for v in range(start, self.q):
            h = GFElement(self, v) ** ((self.q - 1) // N)
            if all((h ** (N // ell)).value != 1 for ell in ells):
                return h
        raise ValueError(f"no element of order {N}")  # pragma: no cover


@lru_cache(maxsize=None)
def GF(p: int, m: int = 1) -> FiniteField:
    """Cached field constructor with the default modulus."""
    return FiniteField(p, m)


class GFElement:
    __slots__ = ("field", "value")

    def __init__(self, field: FiniteField, value: int):
        self.field = field
        self.value = value

    def _other(self, other):
        if isinstance(other, GFElement):
            if other.field != self.field:
                raise RingMismatchError(f"cannot combine {self.field} and {other.field}")
            return other.value
        if _is_int(other):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return GFElement(self.field, self.field.raw_add(self.value, o))

    __radd__ = __add__

    def __neg__(self):
        return GFElement(self.field, self.field.raw_neg(self.value))

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return GFElement(self.field, self.field.raw_add(self.value, self.field.raw_neg(o)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return GFElement(self.field, self.field.raw_mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return GFElement(self.field, self.field.raw_mul(self.value, self.field.raw_inv(o)))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return GFElement(self.field, self.field.raw_mul(o, self.field.raw_inv(self.value)))

    def __pow__(self, e: int):
        return GFElement(self.field, self.field.raw_pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, GFElement):
            return self.field == other.field and self.value == other.value
        if _is_int(other):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"{self.field.name}({self.value})"

    def __str__(self):
        return str(self.value)


def ring_from_json(obj):
    if obj == "ZZ":
        return ZZ
    if obj == "QQ":
        return QQ
    if isinstance(obj, dict) and "GF" in obj:
        spec = obj["GF"]
        return FiniteField(spec["p"], spec.get("m", 1), spec.get("modulus"))
    raise ValueError(f"unknown ring descriptor {obj!r}")


def ring_of(x):
    """Best-effort ring for a scalar value (used for inference only)."""
    if isinstance(x, GFElement):
        return x.field
    if isinstance(x, Fraction):
        return QQ
    if _is_int(x):
        return ZZ
    raise RingMismatchError(f"{x!r} is not an exact scalar")
