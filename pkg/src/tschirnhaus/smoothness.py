"""Smoothness of Tschirnhaus complete intersections over finite fields.

Three tools:

* :func:`orbit_certificate` builds the mod-p permutation/orbit data that
  produces a parameter ``a`` (a primitive N-th root of unity) at which the
  pencil specialization of T_{1,2,i}, i = p^r + 1, is expected to be smooth.
* :func:`brute_force_smooth` enumerates every projective point over GF(q)
  of a specialized complete intersection and checks the Jacobian rank.
* :func:`quadric_discriminant_scaling` compares det(Gram of T_12) with the
  polynomial discriminant.
"""

from __future__ import annotations

import itertools
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .forms import radical_specialize, tschirnhaus_form
from .linalg import det_bareiss, discriminant_monic
from .multipoly import MultiPoly
from .rings import GF, FiniteField, GFElement, is_prime
from .symmetric import power_sums_from_coeffs

DEFAULT_BUDGET = 10**7
MAX_REPORTED_SINGULAR = 64


class ParameterError(ValueError):
    pass


class IntegralityError(ArithmeticError):
    pass


class BudgetExceeded(RuntimeError):
    pass


# -- orbit certificate ----------------------------------------------------------

@dataclass(frozen=True)
class OrbitCertificate:
    n: int
    p: int
    r: int
    case: int
    modulus: int
    nu: dict
    orbits: tuple
    epsilons: tuple          # epsilons[alpha][t-1] = eps_alpha(t), t = 1..s_alpha
    exponents: tuple         # exponents[alpha][u-1]: the a-exponent forced by a singular point
    literal_bound: int       # max |2(p^{sr}-1)(eps(u)-1) - sum_t p^{(t-1)r}(p^r-1)(eps(t)-1)|
    bound_N: int
    witness_field: FiniteField
    witness_a: GFElement

    @property
    def i(self) -> int:
        return self.p ** self.r + 1

    @property
    def pencil(self) -> str:
        return "radical" if self.case == 1 else "linear"

    def check(self) -> None:
        """Re-derive everything from (n, p, r) and raise on any inconsistency."""
        fresh = orbit_certificate(self.n, self.p, self.r)
        if (fresh.nu, fresh.orbits, fresh.epsilons) != (self.nu, self.orbits, self.epsilons):
            raise AssertionError("certificate tables do not match a fresh derivation")
        pr = self.p ** self.r
        M = self.modulus
        if sorted(self.nu.values()) != list(range(1, M)):
            raise AssertionError("nu is not a permutation")
        if any((pr * self.nu[j] - j) % M for j in self.nu):
            raise AssertionError("p^r nu(j) != j mod modulus")
        flat = sorted(j for o in self.orbits for j in o)
        if flat != list(range(1, M)):
            raise AssertionError("orbits do not partition 1..modulus-1")
        if any(e <= 0 for row in self.epsilons for e in row):
            raise AssertionError("nonpositive epsilon")
        if self.bound_N <= self.literal_bound or self.bound_N <= 2 * max(
            abs(x) for row in self.exponents for x in row
        ):
            raise AssertionError("bound_N too small")
        if not self.witness_field.has_order(self.witness_a, self.bound_N):
            raise AssertionError("witness does not have order N")

    def to_json(self) -> dict:
        return {
            "n": self.n, "p": self.p, "r": self.r, "i": self.i,
            "case": self.case, "pencil": self.pencil, "modulus": self.modulus,
            "nu": {str(j): v for j, v in sorted(self.nu.items())},
            "orbits": [list(o) for o in self.orbits],
            "epsilons": [list(e) for e in self.epsilons],
            "exponents": [list(x) for x in self.exponents],
            "literal_bound": self.literal_bound,
            "bound_N": self.bound_N,
            "witness_field": self.witness_field.to_json(),
            "witness_a": self.witness_a.value,
        }


def orbit_certificate(n: int, p: int, r: int) -> OrbitCertificate:
    if not is_prime(p):
        raise ParameterError(f"p = {p} is not prime")
    if r < 1:
        raise ParameterError("r must be >= 1")
    pr = p ** r
    i = pr + 1
    if i >= n:
        raise ParameterError(f"need i = p^r + 1 < n, got i = {i}, n = {n}")
    case = 1 if n % p else 2
    M = n if case == 1 else n - 1
    if math.gcd(pr, M) != 1:
        raise ParameterError(f"p^r = {pr} is not invertible modulo {M}")
    inv = pow(pr, -1, M)
    nu = {j: inv * j % M for j in range(1, M)}

    orbits, seen = [], set()
    for j in range(1, M):
        if j in seen:
            continue
        cyc = [j]
        x = nu[j]
        while x != j:
            cyc.append(x)
            x = nu[x]
        seen.update(cyc)
        orbits.append(tuple(cyc))

    epsilons, exponents = [], []
    literal = 0
    for cyc in orbits:
        s = len(cyc)
        eps = []
        for t in range(1, s + 1):
            num = pr * cyc[t % s] + M - cyc[(t - 1) % s]
            if num % M:
                raise IntegralityError(f"eps({t}) = {num}/{M} is not an integer for orbit {cyc}")
            eps.append(num // M)
        tail = sum(p ** ((t - 1) * r) * (pr - 1) * (eps[t - 1] - 1) for t in range(1, s + 1))
        head = p ** (s * r) - 1
        exponents.append(tuple(head * (e - 1) - tail for e in eps))
        literal = max(literal, max(abs(2 * head * (e - 1) - tail) for e in eps))
        epsilons.append(tuple(eps))

    N = max(literal, 2 * max(abs(x) for row in exponents for x in row)) + 1
    while N % p == 0:
        N += 1
    m = 1
    while pow(p, m, N) != 1:
        m += 1
    F = GF(p, m)
    witness = F.primitive_root_of_unity(N)
    return OrbitCertificate(
        n=n, p=p, r=r, case=case, modulus=M, nu=nu, orbits=tuple(orbits),
        epsilons=tuple(epsilons), exponents=tuple(exponents), literal_bound=literal,
        bound_N=N, witness_field=F, witness_a=witness,
    )


# -- vectorized finite-field arithmetic -----------------------------------------

class FieldTables:
    """numpy arithmetic on integer encodings of GF(q) via log/exp tables."""

    def __init__(self, F: FiniteField):
        self.F = F
        self.p, self.q = F.p, F.q
        g = F.primitive_root_of_unity(F.q - 1) if F.q > 2 else F.one
        exp = np.zeros(2 * (self.q - 1), dtype=np.int64)
        log = np.zeros(self.q, dtype=np.int64)
        x = 1
        for k in range(self.q - 1):
            exp[k] = x
            log[x] = k
            x = F.raw_mul(x, g.value)
        exp[self.q - 1:] = exp[: self.q - 1]
        self.exp, self.log = exp, log
        self.neg_table = np.array([F.raw_neg(v) for v in range(self.q)], dtype=np.int64)
        self.add_table = None
        if self.p != 2 and self.q <= 2048:
            idx = np.arange(self.q)
            self.add_table = self._digit_add(idx[:, None], idx[None, :])

    def _digit_add(self, x, y):
        out = np.zeros(np.broadcast(x, y).shape, dtype=np.int64)
        scale = 1
        for _ in range(self.F.m):
            out += ((x // scale % self.p + y // scale % self.p) % self.p) * scale
            scale *= self.p
        return out

    def add(self, x, y):
        if self.p == 2:
            return np.bitwise_xor(x, y)
        if self.add_table is not None:
            return self.add_table[x, y]
        return self._digit_add(x, y)

    def neg(self, x):
        return x if self.p == 2 else self.neg_table[x]

    def mul(self, x, y):
        out = self.exp[self.log[x] + self.log[y]]
        return np.where((x == 0) | (y == 0), 0, out)

    def scal(self, c: int, x):
        if c == 0:
            return np.zeros_like(x)
        out = self.exp[(self.log[x] + self.log[c]) % (self.q - 1)]
        return np.where(x == 0, 0, out)

    def pow(self, x, e: int):
        if e == 0:
            return np.ones_like(x)
        out = self.exp[(self.log[x] * e) % (self.q - 1)]
        return np.where(x == 0, 0, out)


def _eval_poly(T: FieldTables, terms: list, coords: list, size: int):
    """terms: [(exp, coeff_encoding)] ; coords: arrays of encodings."""
    acc = np.zeros(size, dtype=np.int64)
    for exp, c in terms:
        t = np.full(size, c, dtype=np.int64)
        for x, e in zip(coords, exp):
            if e:
                t = T.mul(t, T.pow(x, e))
        acc = T.add(acc, t)
    return acc


def _det(T: FieldTables, M: list):
    """Leibniz determinant of a k x k matrix of arrays."""
    k = len(M)
    size = M[0][0].shape[0]
    acc = np.zeros(size, dtype=np.int64)
    for perm in itertools.permutations(range(k)):
        t = M[0][perm[0]]
        for row in range(1, k):
            t = T.mul(t, M[row][perm[row]])
        inversions = sum(1 for x, y in itertools.combinations(perm, 2) if x > y)
        acc = T.add(acc, T.neg(t) if inversions % 2 else t)
    return acc


# -- brute force ------------------------------------------------------------------

@dataclass
class SmoothnessReport:
    n: int
    degrees: tuple
    field: FiniteField
    a: GFElement
    pencil: str
    reduced: bool
    scope: str
    coordinates: tuple
    points_checked: int
    on_variety: int
    singular_count: int
    singular_points: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "smooth" if self.singular_count == 0 else "singular"

    @property
    def smooth(self) -> bool:
        return self.singular_count == 0

    def to_json(self) -> dict:
        return {
            "n": self.n, "degrees": list(self.degrees),
            "field": self.field.to_json(), "a": self.a.value,
            "pencil": self.pencil, "reduced": self.reduced, "scope": self.scope,
            "coordinates": list(self.coordinates),
            "points_checked": self.points_checked, "on_variety": self.on_variety,
            "singular_count": self.singular_count,
            "singular_points": [list(pt) for pt in self.singular_points],
            "verdict": self.verdict,
        }


def _primitive(poly: MultiPoly) -> MultiPoly:
    c = poly.content()
    return poly.scale_div(c) if c > 1 else poly


def _row_primitive(row: list) -> list:
    g = 0
    for f in row:
        g = math.gcd(g, f.content())
    return [f.scale_div(g) for f in row] if g > 1 else row


def _to_field(poly: MultiPoly, F: FiniteField, a: GFElement) -> list:
    """ZZ[b, a] -> [(b-exponent, encoding)] with a specialized."""
    out: dict = {}
    for exp, c in poly.items():
        key = exp[:-1]
        val = F.from_int(c) * a ** exp[-1]
        out[key] = out[key] + val if key in out else val
    return [(k, v.value) for k, v in out.items() if v]


def specialized_system(n: int, degrees: Sequence[int], pencil: str = "radical",
                       reduced: bool = False, normalize: bool = True):
    """Pencil forms and Jacobian rows as ZZ polynomials in (b, a)."""
    forms, jac = [], []
    for d in degrees:
        f = radical_specialize(tschirnhaus_form(n, d, reduced), pencil)
        if normalize:
            f = _primitive(f)
        row = [f.partial(v) for v in f.vars[:-1]]
        if normalize:
            row = _row_primitive(row)
        forms.append(f)
        jac.append(row)
    return forms, jac


def _point_count(q: int, k: int) -> int:
    return (q ** k - 1) // (q - 1) if k > 0 else 0


def _chunks(q: int, k: int, chunk: int):
    """(lead, start, stop) ranges covering P^{k-1}(GF(q)), leading coordinate 1."""
    for lead in range(k):
        total = q ** (k - lead - 1)
        for start in range(0, total, chunk):
            yield lead, start, min(total, start + chunk)


def brute_force_smooth(n: int, degrees: Sequence[int], field: FiniteField, a,
                       pencil: str = "radical", reduced: bool = False,
                       normalize: bool = True, scope: str = "variety",
                       budget: int = DEFAULT_BUDGET, threads: int = 1,
                       chunk: int = 1 << 16) -> SmoothnessReport:
    """Enumerate projective points and check the Jacobian rank.

    The forms of ``degrees`` are specialized to the pencil at ``a``.  With
    ``normalize`` each form is divided by its integer content and each
    Jacobian row by the content of that row before reducing mod p, so
    uniform factors like 2n do not kill the reduction.  A degree-1 form is
    eliminated by solving for one coordinate.  ``scope="variety"`` checks
    points where every form vanishes; ``scope="all"`` checks every point.
    """
    degrees = tuple(sorted(degrees))
    F = field
    a = F.coerce(a)
    if scope not in ("variety", "all"):
        raise ValueError("scope must be 'variety' or 'all'")
    forms, jac = specialized_system(n, degrees, pencil, reduced, normalize)
    names = forms[0].vars[:-1]
    nb = len(names)
    gf_forms = [_to_field(f, F, a) for f in forms]
    gf_jac = [[_to_field(g, F, a) for g in row] for row in jac]

    # eliminate the linear form when present
    pivot, lin = None, None
    if 1 in degrees:
        lin = {exp.index(1): c for exp, c in gf_forms[degrees.index(1)]}
        if lin:
            pivot = max(lin)
    free = [j for j in range(nb) if j != pivot]
    k = len(free)
    total = _point_count(F.q, k)
    if total > budget:
        raise BudgetExceeded(
            f"about 10^{len(str(total)) - 1} points in P^{k - 1}({F.name}) exceeds the budget of {budget}"
        )
    T = FieldTables(F)
    nforms = len(degrees)
    minors = list(itertools.combinations(range(nb), nforms))

    def run(job):
        lead, start, stop = job
        idx = np.arange(start, stop, dtype=np.int64)
        size = idx.shape[0]
        cols = [None] * nb
        for pos, j in enumerate(free):
            if pos < lead:
                cols[j] = np.zeros(size, dtype=np.int64)
            elif pos == lead:
                cols[j] = np.ones(size, dtype=np.int64)
            else:
                cols[j] = idx % F.q
                idx = idx // F.q
        if pivot is not None:
            acc = np.zeros(size, dtype=np.int64)
            for j, c in lin.items():
                if j != pivot:
                    acc = T.add(acc, T.scal(c, cols[j]))
            inv = F.raw_inv(lin[pivot])
            cols[pivot] = T.neg(T.scal(inv, acc))
        mask = np.ones(size, dtype=bool)
        if scope == "variety":
            for terms in gf_forms:
                mask &= _eval_poly(T, terms, cols, size) == 0
        on = int(mask.sum())
        if not on:
            return on, 0, []
        sub = [c[mask] for c in cols]
        J = [[_eval_poly(T, terms, sub, on) for terms in row] for row in gf_jac]
        full = np.zeros(on, dtype=bool)
        for cols_sel in minors:
            full |= _det(T, [[J[r][c] for c in cols_sel] for r in range(nforms)]) != 0
            if full.all():
                break
        bad = np.nonzero(~full)[0]
        pts = [tuple(int(s[b]) for s in sub) for b in bad[:MAX_REPORTED_SINGULAR]]
        return on, int(bad.shape[0]), pts

    jobs = list(_chunks(F.q, k, chunk))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(job) for job in jobs]
    on_total = sum(r[0] for r in results)
    sing_total = sum(r[1] for r in results)
    pts = [pt for r in results for pt in r[2]][:MAX_REPORTED_SINGULAR]
    return SmoothnessReport(
        n=n, degrees=degrees, field=F, a=a, pencil=pencil, reduced=reduced,
        scope=scope, coordinates=names, points_checked=total,
        on_variety=on_total, singular_count=sing_total, singular_points=pts,
    )


def verify_certificate(cert: OrbitCertificate, budget: int = DEFAULT_BUDGET,
                       scope: str = "variety", threads: int = 1) -> SmoothnessReport:
    """Brute-force T_{1,2,i} on the certificate's pencil at its witness."""
    return brute_force_smooth(
        cert.n, (1, 2, cert.i), cert.witness_field, cert.witness_a,
        pencil=cert.pencil, reduced=(cert.case == 2), scope=scope,
        budget=budget, threads=threads,
    )


# -- discriminant scaling -------------------------------------------------------------

def t12_gram(a: Sequence) -> list:
    """Gram matrix of T_2 restricted to T_1, in coordinates b_1..b_{n-1}.

    Eliminating b_0 = -(sum p_i b_i)/n gives entries p_{i+j} - p_i p_j / n.
    """
    a = [Fraction(x) for x in a]
    n = len(a)
    p = power_sums_from_coeffs(a, 2 * n - 2).p
    return [[p[i + j] - p[i] * p[j] / n for j in range(1, n)] for i in range(1, n)]


@dataclass
class ScalingReport:
    n: int
    samples: list       # (a, det, disc)
    ratios: list
    constant: bool
    value: Fraction | None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "samples": [
                {"a": [str(x) for x in a], "det": str(d), "disc": str(D)}
                for a, d, D in self.samples
            ],
            "ratios": [str(x) for x in self.ratios],
            "constant": self.constant,
            "value": None if self.value is None else str(self.value),
        }


def quadric_discriminant_scaling(n: int, trials: int = 10, seed: int = 0,
                                 height: int = 9, max_attempts: int | None = None) -> ScalingReport:
    """Sample det(Gram T_12(a)) / disc(a) at random rational a."""
    if n < 3:
        raise ParameterError("need n >= 3 (for n = 2 the quadric lives in P^0)")
    if trials < 2:
        raise ParameterError("need at least 2 trials")
    rng = random.Random(seed)
    samples = []
    attempts = 0
    limit = max_attempts or 50 * trials
    while len(samples) < trials:
        attempts += 1
        if attempts > limit:
            raise ArithmeticError("every sampled point had zero discriminant; resample")
        a = [Fraction(rng.randint(-height, height), rng.randint(1, 3)) for _ in range(n)]
        disc = discriminant_monic(a)
        if disc == 0:
            continue
        samples.append((a, det_bareiss(t12_gram(a)), disc))
    ratios = [d / D for _, d, D in samples]
    constant = all(x == ratios[0] for x in ratios)
    return ScalingReport(n, samples, ratios, constant, ratios[0] if constant else None)


def smooth_parameters(n: int, degrees: Sequence[int], field: FiniteField,
                      pencil: str = "radical", reduced: bool = False,
                      budget: int = DEFAULT_BUDGET) -> list:
    """Nonzero a in ``field`` whose pencil fiber passes :func:`brute_force_smooth`."""
    good = []
    for a in field.elements():
        if a and brute_force_smooth(n, degrees, field, a, pencil, reduced, budget=budget).smooth:
            good.append(a)
    return good
