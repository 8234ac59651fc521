"""Degree cutoffs for resolvent-degree bounds.

Given r, ``fw(r)`` is the least degree n (odd-rounded) from which the
psi/Phi construction shows RD(n) <= n - r.  Everything here is exact
integer or Fraction arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType

# best bound known before the psi/Phi construction, with its source
PRIOR_BOUNDS = MappingProxyType({
    2: (2, "Babylonians"),
    3: (3, "Ferrari"),
    4: (4, "Bring"),
    5: (9, "Segre"),
    6: (44, "Sylvester"),
})


@dataclass(frozen=True)
class ReferenceConstants:
    hamilton: tuple = ((4, 5), (5, 11), (6, 47), (7, 923), (8, 409619), (9, 83763206255))
    sylvester: tuple = ((4, 5), (5, 10), (6, 44), (7, 905))

    def hamilton_number(self, r: int) -> int:
        return dict(self.hamilton)[r]

    def sylvester_number(self, r: int) -> int:
        return dict(self.sylvester)[r]


REFERENCE = ReferenceConstants()


@dataclass(frozen=True)
class PsiSequence:
    d: int
    k: int
    psi: tuple

    def __getitem__(self, i):
        return self.psi[i]

    def __len__(self):
        return len(self.psi)

    def __str__(self):
        return " ".join(str(x) for x in self.psi)


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def _psi_raw(d: int, k: int, cap: int | None = None) -> tuple | None:
    """psi_0..psi_{d-1}; None as soon as psi_i exceeds ``cap``."""
    seq = [k]
    for i in range(d - 2):
        x = seq[-1]
        # ceil(x + C(x+d-i, x)/(x+1))
        nxt = _ceil_div(x * (x + 1) + math.comb(x + d - i, x), x + 1)
        if cap is not None and nxt > cap:
            return None
        seq.append(nxt)
    seq.append(2 * seq[-1] + 1)
    return tuple(seq)


def psi_sequence(d: int, k: int) -> PsiSequence:
    if d < 2 or k < 1:
        raise ValueError("need d >= 2 and k >= 1")
    return PsiSequence(d, k, _psi_raw(d, k))


def dim_hypersurfaces(d: int, N: int) -> int:
    """Dimension of the space of degree-d hypersurfaces in P^N."""
    if d < 1 or N < 1:
        raise ValueError("need d >= 1 and N >= 1")
    return math.comb(N + d, d) - 1


def dim_moduli_cubics(N: int) -> int:
    """Dimension of the moduli of cubic hypersurfaces in P^N (clamped at 0)."""
    if N < 1:
        raise ValueError("need N >= 1")
    return max(0, math.comb(N + 3, 3) - (N + 1) ** 2)


def waldron_slack(d: int, r: int, N: int) -> int:
    return (r + 1) * (N - r) - math.comb(d + r, r)


def waldron_feasible(d: int, r: int, N: int) -> bool:
    """Whether every degree-d hypersurface in P^N contains an r-plane (d >= 3)."""
    if d < 3:
        raise ValueError("the inequality is stated for d >= 3")
    return waldron_slack(d, r, N) >= 0


def _phi_raw(d: int, k: int, cap: int | None = None) -> int | None:
    fact = math.factorial(d + k) // math.factorial(d) + 1
    if cap is not None and fact > cap:
        return None
    # dim_moduli_cubics(N) >= N for N >= 3, so a psi above cap cannot win
    seq = _psi_raw(d, k, cap)
    if seq is None:
        return None
    return max(fact, dim_moduli_cubics(seq[d - 2]) + d + k + 1)


def phi(d: int, k: int) -> int:
    if d < 2 or k < 1:
        raise ValueError("need d >= 2 and k >= 1")
    return _phi_raw(d, k)


@lru_cache(maxsize=None)
def fw(r: int) -> tuple:
    """(FW(r), minimizing (d, k)); the minimizer is None for r <= 3."""
    if r < 1:
        raise ValueError("need r >= 1")
    if r <= 3:
        return r + 1, None
    best, arg = None, None
    for d in range(2, r - 1):
        k = r - 1 - d
        val = _phi_raw(d, k, best)
        # strict comparison keeps the smallest d on ties
        if val is not None and (best is None or val < best):
            best, arg = val, (d, k)
    return 2 * (best // 2) + 1, arg


def brauer(r: int) -> int:
    if r < 1:
        raise ValueError("need r >= 1")
    return math.factorial(r - 1) + 1


def prior_bound(r: int) -> tuple:
    """(value, source) of the best earlier bound."""
    if r in PRIOR_BOUNDS:
        return PRIOR_BOUNDS[r]
    return brauer(r), "Brauer"


def format_ratio(q: Fraction, places: int = 2, rounding: str = "down") -> str:
    """Fixed-point decimal of an exact rational.

    ``rounding="down"`` truncates (toward zero); ``"half-up"`` rounds
    halves away from zero.
    """
    scale = 10 ** places
    sign = "-" if q < 0 else ""
    q = abs(Fraction(q))
    if rounding == "down":
        units = q.numerator * scale // q.denominator
    elif rounding == "half-up":
        units = (2 * q.numerator * scale + q.denominator) // (2 * q.denominator)
    else:
        raise ValueError(f"unknown rounding {rounding!r}")
    whole, frac = divmod(units, scale)
    return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"


@dataclass(frozen=True)
class BoundsRow:
    r: int
    fw: int
    minimizer: tuple | None
    brauer: int
    prior: int
    prior_source: str
    ratio: Fraction

    def ratio_display(self, places: int = 2, rounding: str = "down") -> str:
        return format_ratio(self.ratio, places, rounding)

    def to_json(self, rounding: str = "down") -> dict:
        d, k = self.minimizer if self.minimizer else (None, None)
        return {
            "r": self.r, "fw": self.fw, "d": d, "k": k,
            "brauer": self.brauer, "prior": self.prior,
            "prior_source": self.prior_source,
            "ratio": f"{self.ratio.numerator}/{self.ratio.denominator}",
            "ratio_2dp": self.ratio_display(2, rounding),
        }


def bounds_row(r: int) -> BoundsRow:
    value, arg = fw(r)
    prior, source = prior_bound(r)
    return BoundsRow(r, value, arg, brauer(r), prior, source, Fraction(prior, value))


def bounds_table(r_max: int) -> list:
    if r_max < 2:
        raise ValueError("need r_max >= 2")
    return [bounds_row(r) for r in range(2, r_max + 1)]


def lemma_dim_sides(d: int, k: int) -> dict:
    """Both sides of the two dimension inequalities behind the Phi cutoff.

    First: dim M_3(psi_{d-2}) versus the largest dim H_{d-i}(psi_{i+1})
    over degrees d-i >= 4, together with dim H_4(psi_{d-3}); vacuous for d = 2.
    Second: dim M_3(psi_{d-2}) + d + k + 1 versus psi_{d-1} + 2.
    """
    seq = psi_sequence(d, k).psi
    m3 = dim_moduli_cubics(seq[d - 2])
    hyper = [dim_hypersurfaces(d - i, seq[i + 1]) for i in range(0, d - 3)]
    if d >= 3:
        hyper.append(dim_hypersurfaces(4, seq[d - 3]))
    return {
        "moduli": m3,
        "hypersurfaces": max(hyper) if hyper else None,
        "second_lhs": m3 + d + k + 1,
        "second_rhs": seq[d - 1] + 2,
    }


def check_lemma_dim(d: int, k: int) -> bool:
    s = lemma_dim_sides(d, k)
    first = s["hypersurfaces"] is None or s["moduli"] >= s["hypersurfaces"]
    return first and s["second_lhs"] >= s["second_rhs"]


def rho_search(d: int, k_max: int) -> int | None:
    """Least k <= k_max from which (through k_max) the factorial term equals
    Phi(d, k) and Phi(d, k) <= Phi(d-1, k+1).  Exploratory only."""
    if d < 3:
        raise ValueError("need d >= 3 so that d-1 >= 2")
    good = []
    for k in range(1, k_max + 1):
        fact = math.factorial(d + k) // math.factorial(d) + 1
        val = phi(d, k)
        good.append(val == fact and val <= phi(d - 1, k + 1))
    rho = None
    for k in range(k_max, 0, -1):
        if not good[k - 1]:
            break
        rho = k
    return rho
