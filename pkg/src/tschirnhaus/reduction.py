"""Reduce a concrete polynomial to principal form (c_1 = c_2 = 0) or Bring
form (c_1 = c_2 = c_3 = 0) by a Tschirnhaus transformation.

Principal: the linear condition fixes b_0; the quadric T_12 on b_1..b_{n-1}
is diagonalized over QQ and one isotropic vector is taken over a radical
tower, so the result is exact.  Bring: a seeded line inside a
2-dimensional isotropic subspace is intersected with the cubic T_3, whose
restriction is a binary cubic solved numerically.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
from scipy.optimize import linear_sum_assignment

from .forms import ORACLE_CAP, transform_coeffs, transform_coeffs_oracle
from .linalg import discriminant_monic
from .quadrics import QuadricForm, diagonalize, maximal_isotropic
from .smoothness import t12_gram
from .symmetric import coeffs_from_power_sums, power_sums_from_coeffs
from .tower import RadicalTower, TowerElem

DEFAULT_PRECISION = 160
MAX_LINE_RETRIES = 16
LEVELS = {"principal": (1, 2), "bring": (1, 2, 3)}


class DegenerateInputError(ArithmeticError):
    pass


class ReductionFailed(ArithmeticError):
    pass


def working_precision() -> int:
    """Bits of mpmath precision (TSCH_PRECISION overrides the default)."""
    raw = os.environ.get("TSCH_PRECISION")
    if not raw:
        return DEFAULT_PRECISION
    bits = int(raw)
    if bits < 53:
        raise ValueError("TSCH_PRECISION must be at least 53 bits")
    return bits


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, TowerElem):
        return x.numeric()
    return mpmath.mpmathify(x)


def _exact_coeffs(a) -> tuple:
    a = tuple(getattr(a, "a", a))
    return tuple(Fraction(x) for x in a)


def _poly_mul(f: list, g: list) -> list:
    out = [mpmath.mpc(0)] * (len(f) + len(g) - 1)
    for i, x in enumerate(f):
        if x == 0:
            continue
        for j, y in enumerate(g):
            out[i + j] += x * y
    return out


def _log2_size(x) -> int:
    if isinstance(x, Fraction):
        return x.numerator.bit_length() - x.denominator.bit_length() if x else 0
    x = abs(x)
    return int(mpmath.log(x, 2)) + 1 if x > 1 else 0


def guard_bits(ps: Sequence, b: Sequence | None = None) -> int:
    """Extra bits covering cancellation in sum_m [z^m] w^k p_m."""
    n = len(b) if b is not None else 1
    top = max(_log2_size(x) for x in ps)
    bsum = mpmath.fsum(abs(_mp(x)) for x in b) if b is not None else 1
    return max(0, top) + n * max(0, _log2_size(bsum)) + 32


def numeric_transform(a, b) -> tuple:
    """Transformed coefficients with numeric b, computed with guard bits;
    power sums of a are taken exactly when a is rational."""
    n = len(a)
    exact = all(isinstance(x, (int, Fraction)) for x in a)
    outer = mpmath.mp.prec
    if exact:
        ps_src = power_sums_from_coeffs(_exact_coeffs(a), n * (n - 1)).p
    else:
        with mpmath.workprec(outer + 64):
            ps_src = power_sums_from_coeffs([_mp(x) for x in a], n * (n - 1)).p
    with mpmath.workprec(outer + guard_bits(ps_src, b)):
        ps = [_mp(x) for x in ps_src]
        w = [_mp(x) for x in b]
        out = [mpmath.mpc(n)]
        power = [mpmath.mpc(1)]
        for _ in range(n):
            power = _poly_mul(power, w)
            out.append(mpmath.fsum(c * ps[m] for m, c in enumerate(power)))
        c = coeffs_from_power_sums(out, n).a
    return tuple(+x for x in c)


def _norm(c: Sequence) -> mpmath.mpf:
    return mpmath.sqrt(mpmath.fsum(abs(x) ** 2 for x in c))


def normalized_residuals(c: Sequence, ks: Sequence[int]) -> dict:
    """|p_k(c)| / max(1, ||c||) for each k."""
    ps = power_sums_from_coeffs([_mp(x) for x in c], max(ks)).p
    scale = max(mpmath.mpf(1), _norm([_mp(x) for x in c]))
    return {k: abs(ps[k]) / scale for k in ks}


def polish_roots(coeffs: Sequence, roots: Sequence, steps: int = 1) -> list:
    """Newton steps on the roots of the monic polynomial with the given coefficients."""
    full = [mpmath.mpc(1), *(_mp(x) for x in coeffs)]
    out = []
    for z in roots:
        for _ in range(steps):
            f, df = mpmath.polyval(full, z, derivative=True)
            if df != 0:
                z = z - f / df
        out.append(z)
    return out


def numeric_roots(coeffs: Sequence) -> list:
    """Roots of z^n + c_1 z^(n-1) + ... + c_n at the working precision."""
    full = [mpmath.mpc(1), *(_mp(x) for x in coeffs)]
    try:
        roots = mpmath.polyroots(full, maxsteps=400, extraprec=mpmath.mp.prec)
    except mpmath.libmp.NoConvergence:
        seed = np.roots([complex(x) for x in full])
        roots = polish_roots(coeffs, [mpmath.mpc(z) for z in seed], steps=60)
    return polish_roots(coeffs, roots, steps=1)


def root_correspondence(a, b, c) -> tuple:
    """(absolute, relative) max deviation between roots of c and w(roots of a)."""
    z = numeric_roots(a)
    w = [_mp(x) for x in b]
    expected = [mpmath.polyval(w[::-1], zi) for zi in z]
    got = numeric_roots(c)
    cost = np.array([[float(abs(e - g)) for g in got] for e in expected])
    rows, cols = linear_sum_assignment(cost)
    dev = [abs(expected[i] - got[j]) for i, j in zip(rows, cols)]
    rel = [d / max(1, abs(expected[i])) for d, i in zip(dev, rows)]
    return max(dev), max(rel)


@dataclass
class TraceStep:
    description: str
    b: tuple
    c: tuple
    exact_b: tuple | None = None
    exact_c: tuple | None = None

    def to_json(self) -> dict:
        out = {"description": self.description, "b": _json_vec(self.b), "c": _json_vec(self.c)}
        if self.exact_b is not None:
            out["exact_b"] = [str(x) for x in self.exact_b]
            out["exact_c"] = [str(x) for x in self.exact_c]
        return out


@dataclass
class ReductionTrace:
    a: tuple
    level: str
    seed: int
    precision: int
    steps: list = field(default_factory=list)
    residuals: dict = field(default_factory=dict)
    relative_residuals: dict = field(default_factory=dict)
    root_deviation: object = None
    root_deviation_relative: object = None
    attempts: int = 0
    radicands: tuple = ()

    @property
    def final_c(self) -> tuple:
        return self.steps[-1].c if self.steps else tuple(_mp(x) for x in self.a)

    @property
    def killed(self) -> tuple:
        return LEVELS[self.level]

    def max_residual(self):
        return max(self.residuals.values())

    def to_json(self) -> dict:
        return {
            "a": [str(x) for x in self.a],
            "level": self.level,
            "seed": self.seed,
            "precision_bits": self.precision,
            "steps": [s.to_json() for s in self.steps],
            "residuals": {str(k): _num(v) for k, v in self.residuals.items()},
            "relative_residuals": {str(k): _num(v) for k, v in self.relative_residuals.items()},
            "root_deviation": _num(self.root_deviation),
            "root_deviation_relative": _num(self.root_deviation_relative),
            "attempts": self.attempts,
            "radicands": [str(r) for r in self.radicands],
        }


def _num(x, digits: int = 20) -> str | None:
    return None if x is None else mpmath.nstr(x, digits)


def _json_vec(v: Sequence, digits: int = 30) -> list:
    out = []
    for x in v:
        x = mpmath.mpc(x)
        out.append([mpmath.nstr(x.real, digits), mpmath.nstr(x.imag, digits)])
    return out


def _relative_residuals(c: Sequence, ks: Sequence[int]) -> dict:
    """|p_k(c)| / sum_i |y_i|^k over the roots y_i of c."""
    roots = numeric_roots(c)
    ps = power_sums_from_coeffs([_mp(x) for x in c], max(ks)).p
    out = {}
    for k in ks:
        scale = mpmath.fsum(abs(y) ** k for y in roots)
        out[k] = abs(ps[k]) / scale if scale else abs(ps[k])
    return out


def _check_input(a: tuple, level: str):
    n = len(a)
    need = 3 if level == "principal" else 5
    if n < need:
        raise ValueError(f"{level} form needs n >= {need}, got n = {n}")
    if discriminant_monic(a) == 0:
        raise DegenerateInputError("input has a repeated root (zero discriminant)")


def _finish(trace: ReductionTrace, a: tuple) -> ReductionTrace:
    step = trace.steps[-1]
    ks = trace.killed
    trace.residuals = normalized_residuals(step.c, ks)
    trace.relative_residuals = _relative_residuals(step.c, ks)
    trace.root_deviation, trace.root_deviation_relative = root_correspondence(a, step.b, step.c)
    return trace


def _identity_step(a: tuple) -> TraceStep:
    n = len(a)
    b = tuple(Fraction(int(j == 1)) for j in range(n))
    return TraceStep("identity (already in normal form)", tuple(_mp(x) for x in b),
                     tuple(_mp(x) for x in a), b, a)


def _rational_scale(values) -> Fraction:
    """A simple rational close to 1 / max |values| (1 if all tiny)."""
    top = max(abs(v) for v in values)
    if top == 0:
        return Fraction(1)
    return Fraction(1 / float(top)).limit_denominator(10**6)


def _isotropic_setup(a: tuple, count: int | None):
    n = len(a)
    ps = power_sums_from_coeffs(a, 2 * n - 2).p
    Q = QuadricForm(t12_gram(a))
    L, d = diagonalize(Q)
    if any(x == 0 for x in d):
        raise DegenerateInputError("the quadric T_12 is degenerate for this input")
    tower = RadicalTower()
    basis = maximal_isotropic(Q, (L, d), tower, count=count)
    full = []
    for v in basis:
        b0 = -sum((ps[i + 1] * x for i, x in enumerate(v)), tower.element(0)) / n
        full.append([b0, *v])
    return ps, tower, full


def reduce_to_principal(a, seed: int = 0) -> ReductionTrace:
    """Exact principal reduction (one square root), with a numeric shadow."""
    a = _exact_coeffs(a)
    _check_input(a, "principal")
    prec = working_precision()
    with mpmath.workprec(prec):
        trace = ReductionTrace(a, "principal", seed, prec)
        ps = power_sums_from_coeffs(a, 2).p
        if ps[1] == 0 and ps[2] == 0:
            trace.steps.append(_identity_step(a))
            return _finish(trace, a)
        _, tower, full = _isotropic_setup(a, count=1)
        b_exact = full[0]
        lam = _rational_scale([x.numeric() for x in b_exact])
        b_exact = tuple(x * lam for x in b_exact)
        c_exact = tuple(transform_coeffs(a, b_exact).a)
        b_num = tuple(x.numeric() for x in b_exact)
        c_num = numeric_transform(a, b_num)
        trace.steps.append(TraceStep("principal: isotropic vector of T_12 on T_1",
                                     b_num, c_num, b_exact, c_exact))
        trace.radicands = tuple(tower.radicands)
        trace.attempts = 1
        return _finish(trace, a)


def _functional(ps: Sequence, f: Sequence):
    """L(f) = sum_m f_m p_m."""
    return mpmath.fsum(x * ps[m] for m, x in enumerate(f))


def reduce_to_bring(a, seed: int = 0, tol: float = 1e-8,
                    max_retries: int = MAX_LINE_RETRIES) -> ReductionTrace:
    """Numeric Bring reduction through a seeded line in the isotropic of T_12."""
    a = _exact_coeffs(a)
    _check_input(a, "bring")
    n = len(a)
    prec = working_precision()
    with mpmath.workprec(prec):
        trace = ReductionTrace(a, "bring", seed, prec)
        ps3 = power_sums_from_coeffs(a, 3).p
        if ps3[1] == 0 and ps3[2] == 0 and ps3[3] == 0:
            trace.steps.append(_identity_step(a))
            return _finish(trace, a)
        _, tower, full = _isotropic_setup(a, count=None)
        trace.radicands = tuple(tower.radicands)
        ps_exact = power_sums_from_coeffs(a, 3 * (n - 1)).p
        best = _bring_search(trace, a, full, ps_exact, seed, tol, max_retries)
        if best is None:
            raise ReductionFailed("T_3 vanished identically on every sampled line")
        b = tuple(+x for x in best[1])
        c = numeric_transform(a, b)
        trace.steps.append(TraceStep("bring: line in isotropic of T_12 meets T_3", b, c))
        return _finish(trace, a)


def _bring_search(trace, a, full, ps_exact, seed, tol, max_retries):
    n = len(a)
    with mpmath.workprec(mpmath.mp.prec + guard_bits(ps_exact) + 64):
        basis = [[x.numeric() for x in v] for v in full]
        ps = [_mp(x) for x in ps_exact]
        rng = random.Random(seed)
        best = None
        for attempt in range(1, max_retries + 1):
            trace.attempts = attempt
            alpha = [rng.randint(-9, 9) for _ in basis]
            beta = [rng.randint(-9, 9) for _ in basis]
            U = [mpmath.fsum(al * v[j] for al, v in zip(alpha, basis)) for j in range(n)]
            W = [mpmath.fsum(be * v[j] for be, v in zip(beta, basis)) for j in range(n)]
            cand = _line_candidates(a, ps, U, W)
            if not cand:
                continue
            for res, b, c in cand:
                if best is None or res < best[0]:
                    best = (res, b, c)
            if best[0] < tol:
                break
        return best


def _line_candidates(a, ps, U, W) -> list:
    U2 = _poly_mul(U, U)
    W2 = _poly_mul(W, W)
    A = _functional(ps, _poly_mul(U2, U))
    B = 3 * _functional(ps, _poly_mul(U2, W))
    C = 3 * _functional(ps, _poly_mul(U, W2))
    D = _functional(ps, _poly_mul(W2, W))
    size = max(abs(A), abs(B), abs(C), abs(D))
    scale = max(abs(x) for x in U + W) ** 3 * max(abs(x) for x in ps[: len(ps)])
    if size <= mpmath.mpf(2) ** (-mpmath.mp.prec // 2) * scale:
        return []          # T_3 identically zero on this line
    points = []
    if abs(A) <= mpmath.mpf(2) ** (-mpmath.mp.prec // 2) * size:
        points.append((mpmath.mpc(1), mpmath.mpc(0)))
        if abs(B) > 0:
            for s in mpmath.polyroots([B, C, D], maxsteps=200, extraprec=mpmath.mp.prec):
                points.append((s, mpmath.mpc(1)))
    else:
        cubic = [A, B, C, D]
        for s in mpmath.polyroots(cubic, maxsteps=200, extraprec=mpmath.mp.prec):
            f, df = mpmath.polyval(cubic, s, derivative=True)
            if df != 0:
                s = s - f / df
            points.append((s, mpmath.mpc(1)))
    out = []
    for s, t in points:
        b = [s * u + t * w for u, w in zip(U, W)]
        top = max(abs(x) for x in b)
        if top == 0:
            continue
        b = tuple(x / top for x in b)
        c = numeric_transform(a, b)
        res = max(normalized_residuals(c, (1, 2, 3)).values())
        out.append((res, b, c))
    out.sort(key=lambda item: item[0])
    return out


def reduce(a, level: str = "principal", seed: int = 0, tol: float = 1e-8) -> ReductionTrace:
    if level == "principal":
        return reduce_to_principal(a, seed)
    if level == "bring":
        return reduce_to_bring(a, seed, tol)
    raise ValueError(f"unknown level {level!r}; expected one of {sorted(LEVELS)}")


@dataclass
class VerificationReport:
    ok: bool
    max_step_deviation: object
    residuals: dict
    root_deviation: object
    oracle_checked: bool
    failed_step: int | None = None
    messages: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "max_step_deviation": _num(self.max_step_deviation),
            "residuals": {str(k): _num(v) for k, v in self.residuals.items()},
            "root_deviation": _num(self.root_deviation),
            "oracle_checked": self.oracle_checked,
            "failed_step": self.failed_step,
            "messages": list(self.messages),
        }


def verify_trace(trace: ReductionTrace, tol: float = 1e-8, root_tol: float = 1e-6) -> VerificationReport:
    """Recompute every step independently and re-check residuals and roots."""
    with mpmath.workprec(trace.precision):
        prev = trace.a
        prev_exact = trace.a
        worst = mpmath.mpf(0)
        failed = None
        oracle = False
        messages = []
        for idx, step in enumerate(trace.steps):
            again = numeric_transform(prev, step.b)
            scale = max(mpmath.mpf(1), _norm(again))
            dev = max(abs(x - _mp(y)) for x, y in zip(again, step.c)) / scale
            worst = max(worst, dev)
            if dev > tol and failed is None:
                failed = idx
                messages.append(f"step {idx}: recomputed c deviates by {mpmath.nstr(dev, 5)}")
            if step.exact_b is not None and prev_exact is not None:
                if len(prev_exact) <= ORACLE_CAP:
                    oracle = True
                    if tuple(transform_coeffs_oracle(prev_exact, step.exact_b).a) != tuple(step.exact_c):
                        failed = idx if failed is None else failed
                        messages.append(f"step {idx}: exact oracle disagrees")
                prev_exact = step.exact_c
            else:
                prev_exact = None
            prev = step.c
        residuals = normalized_residuals(trace.final_c, trace.killed)
        bad = [k for k, v in residuals.items() if v > tol]
        if bad:
            messages.append(f"residuals above tolerance for k = {bad}")
        root_dev = None
        if trace.steps:
            last = trace.steps[-1]
            start = trace.a if len(trace.steps) == 1 else trace.steps[-2].c
            root_dev, _ = root_correspondence(start, last.b, last.c)
            if root_dev > root_tol:
                messages.append(f"root correspondence off by {mpmath.nstr(root_dev, 5)}")
                failed = len(trace.steps) - 1 if failed is None else failed
        ok = failed is None and not bad
        return VerificationReport(ok, worst, residuals, root_dev, oracle, failed, messages)
