"""Sparse multivariate polynomials over an exact coefficient ring.

A :class:`MultiPoly` is an immutable map from exponent tuples to nonzero
coefficients, tagged with its ring and an ordered tuple of variable names.

Text grammar (whitespace is ignored)::

    poly    := '0' | ['-'] term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := coeff | var ['^' INT]
    coeff   := INT ['/' INT]
    var     := [A-Za-z_][A-Za-z0-9_]*

Finite-field coefficients are written as their integer encoding.
JSON form::

    {"ring": <ring>, "vars": [...], "terms": [{"exp": [...], "coeff": "..."}]}

with ``<ring>`` one of ``"ZZ"``, ``"QQ"`` or ``{"GF": {"p", "m", "modulus"}}``.
"""

from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .rings import QQ, ZZ, RingMismatchError, ring_from_json


class VariableError(KeyError):
    """Unknown, missing or undeclared variable."""

    def __str__(self):
        return str(self.args[0]) if self.args else "variable error"


def _glex_key(exp: tuple) -> tuple:
    return (sum(exp), exp)


class MultiPoly:
    __slots__ = ("ring", "vars", "_terms", "_index")

    def __init__(self, ring, vars: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self.ring = ring
        self.vars = tuple(vars)
        if len(set(self.vars)) != len(self.vars):
            raise VariableError(f"duplicate variable names in {self.vars}")
        self._index = {v: i for i, v in enumerate(self.vars)}
        clean = {}
        nv = len(self.vars)
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nv:
                raise ValueError(f"exponent {exp} has length {len(exp)}, expected {nv}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            c = ring.coerce(c)
            if c:
                clean[exp] = c
        self._terms = clean

    # -- construction helpers ---------------------------------------------
    @classmethod
    def _raw(cls, ring, vars, terms, index=None):
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.vars = vars
        obj._index = index if index is not None else {v: i for i, v in enumerate(vars)}
        obj._terms = terms
        return obj

    @classmethod
    def zero(cls, ring, vars):
        return cls(ring, vars)

    @classmethod
    def constant(cls, ring, vars, c):
        vars = tuple(vars)
        return cls(ring, vars, {(0,) * len(vars): c})

    @classmethod
    def variable(cls, ring, vars, name):
        vars = tuple(vars)
        if name not in vars:
            raise VariableError(f"unknown variable {name!r}")
        exp = tuple(1 if v == name else 0 for v in vars)
        return cls(ring, vars, {exp: ring.one})

    @classmethod
    def gens(cls, ring, vars):
        return [cls.variable(ring, vars, v) for v in vars]

    # -- basic accessors -------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def items(self):
        """(exponent, coefficient) pairs in canonical graded-lex order."""
        for exp in sorted(self._terms, key=_glex_key, reverse=True):
            yield exp, self._terms[exp]

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, exp) -> object:
        return self._terms.get(tuple(exp), self.ring.zero)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def degree_in(self, names: Iterable[str]) -> int:
        idx = [self._index[v] for v in names]
        return max((sum(e[i] for i in idx) for e in self._terms), default=-1)

    def is_homogeneous(self, names: Iterable[str] | None = None, degree: int | None = None) -> bool:
        idx = [self._index[v] for v in names] if names is not None else range(self.nvars)
        degs = {sum(e[i] for i in idx) for e in self._terms}
        if not degs:
            return True
        if len(degs) > 1:
            return False
        return degree is None or degs == {degree}

    def variables_used(self) -> tuple:
        used = set()
        for e in self._terms:
            used.update(i for i, k in enumerate(e) if k)
        return tuple(v for i, v in enumerate(self.vars) if i in used)

    # -- arithmetic -------------------------------------------------------------
    def _check_compatible(self, other: "MultiPoly"):
        if other.ring != self.ring:
            raise RingMismatchError(f"cannot combine polynomials over {self.ring} and {other.ring}")
        if other.vars != self.vars:
            raise VariableError(f"variable sets differ: {self.vars} vs {other.vars}")

    def _lift(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check_compatible(other)
            return other
        c = self.ring.coerce(other)
        return MultiPoly._raw(
            self.ring, self.vars, {(0,) * self.nvars: c} if c else {}, self._index
        )

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self._terms)
        for exp, c in other._terms.items():
            s = out.get(exp)
            s = c if s is None else s + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return MultiPoly._raw(self.ring, self.vars, out, self._index)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(
            self.ring, self.vars, {e: -c for e, c in self._terms.items()}, self._index
        )

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = self.ring.coerce(other)
            if not c:
                return MultiPoly._raw(self.ring, self.vars, {}, self._index)
            return MultiPoly._raw(
                self.ring, self.vars,
                {e: v * c for e, v in self._terms.items() if v * c}, self._index,
            )
        self._check_compatible(other)
        out: dict = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return MultiPoly._raw(
            self.ring, self.vars, {e: c for e, c in out.items() if c}, self._index
        )

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = MultiPoly.constant(self.ring, self.vars, self.ring.one)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale_div(self, k) -> "MultiPoly":
        """Divide every coefficient by the scalar k (exactly, in the ring)."""
        return MultiPoly._raw(
            self.ring, self.vars,
            {e: self.ring.divide(c, k) for e, c in self._terms.items()}, self._index,
        )

    def __truediv__(self, k):
        if isinstance(k, MultiPoly):
            return NotImplemented
        return self.scale_div(k)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return (
                self.ring == other.ring
                and self.vars == other.vars
                and self._terms == other._terms
            )
        try:
            return self == self._lift(other)
        except (RingMismatchError, TypeError):
            return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self._terms.items())))

    # -- calculus and evaluation ------------------------------------------------
    def partial(self, var: str) -> "MultiPoly":
        if var not in self._index:
            raise VariableError(f"unknown variable {var!r}")
        i = self._index[var]
        out = {}
        for e, c in self._terms.items():
            k = e[i]
            if k:
                d = c * k
                if d:
                    out[e[:i] + (k - 1,) + e[i + 1:]] = d
        return MultiPoly._raw(self.ring, self.vars, out, self._index)

    def gradient(self, names: Sequence[str] | None = None) -> list:
        return [self.partial(v) for v in (names or self.vars)]

    def eval(self, assignment: Mapping[str, object]):
        """Exact value at a point; every variable that occurs must be assigned."""
        used = self.variables_used()
        missing = [v for v in used if v not in assignment]
        if missing:
            raise VariableError(f"no value for variable(s) {missing}")
        vals = {}
        for v in used:
            vals[self._index[v]] = self.ring.coerce(assignment[v])
        total = self.ring.zero
        for e, c in self._terms.items():
            t = c
            for i, k in enumerate(e):
                if k:
                    t = t * vals[i] ** k
            total = total + t
        return total

    def __call__(self, **assignment):
        return self.eval(assignment)

    def specialize(self, assignment: Mapping[str, object], new_vars: Sequence[str] | None = None) -> "MultiPoly":
        """Substitute scalars or polynomials for some variables.

        The result lives in ``new_vars`` (default: the unsubstituted variables,
        in their original order).  Substituted polynomials may only use
        variables of ``new_vars``.
        """
        for v in assignment:
            if v not in self._index:
                raise VariableError(f"unknown variable {v!r}")
        if new_vars is None:
            new_vars = tuple(v for v in self.vars if v not in assignment)
        new_vars = tuple(new_vars)
        new_index = {v: i for i, v in enumerate(new_vars)}
        for v in self.vars:
            if v not in assignment and v not in new_index:
                raise VariableError(f"variable {v!r} is neither substituted nor kept")

        # every substitution becomes a MultiPoly in new_vars
        subs = {}
        for v, val in assignment.items():
            if isinstance(val, MultiPoly):
                if val.ring != self.ring:
                    raise RingMismatchError(f"substitution for {v!r} is over {val.ring}")
                extra = [w for w in val.variables_used() if w not in new_index]
                if extra:
                    raise VariableError(f"substitution for {v!r} introduces undeclared {extra}")
                subs[self._index[v]] = val.embed(new_vars)
            else:
                subs[self._index[v]] = MultiPoly.constant(self.ring, new_vars, self.ring.coerce(val))

        kept = [(i, new_index[v]) for i, v in enumerate(self.vars) if v not in assignment]
        power_cache: dict = {}

        def power(i, k):
            key = (i, k)
            if key not in power_cache:
                power_cache[key] = subs[i] ** k
            return power_cache[key]

        result: dict = {}
        nn = len(new_vars)
        for e, c in self._terms.items():
            base_exp = [0] * nn
            for i, j in kept:
                base_exp[j] += e[i]
            part = {tuple(base_exp): c}
            for i, sp in subs.items():
                if e[i] == 0:
                    continue
                pw = power(i, e[i])
                nxt: dict = {}
                for e1, c1 in part.items():
                    for e2, c2 in pw._terms.items():
                        ee = tuple(a + b for a, b in zip(e1, e2))
                        s = nxt.get(ee)
                        nxt[ee] = c1 * c2 if s is None else s + c1 * c2
                part = nxt
                if not part:
                    break
            for ee, cc in part.items():
                s = result.get(ee)
                result[ee] = cc if s is None else s + cc
        return MultiPoly._raw(
            self.ring, new_vars, {e: c for e, c in result.items() if c}, new_index
        )

    def embed(self, new_vars: Sequence[str]) -> "MultiPoly":
        """Re-express in a different variable list containing every used variable."""
        new_vars = tuple(new_vars)
        if new_vars == self.vars:
            return self
        new_index = {v: i for i, v in enumerate(new_vars)}
        missing = [v for v in self.variables_used() if v not in new_index]
        if missing:
            raise VariableError(f"variables {missing} not in {new_vars}")
        moves = [(i, new_index[v]) for i, v in enumerate(self.vars) if v in new_index]
        out = {}
        for e, c in self._terms.items():
            ne = [0] * len(new_vars)
            for i, j in moves:
                ne[j] = e[i]
            out[tuple(ne)] = c
        return MultiPoly._raw(self.ring, new_vars, out, new_index)

    def map_coefficients(self, func, ring) -> "MultiPoly":
        """Apply ``func`` to every coefficient, landing in ``ring``."""
        return MultiPoly(ring, self.vars, {e: func(c) for e, c in self._terms.items()})

    def content(self) -> int:
        """gcd of the integer coefficients (ZZ only); 0 for the zero polynomial."""
        if self.ring != ZZ:
            raise RingMismatchError("content is defined for ZZ polynomials")
        g = 0
        for c in self._terms.values():
            g = math.gcd(g, c)
        return g

    def coefficients_in(self, names: Sequence[str]) -> dict:
        """Split as sum_mu coeff_mu * names^mu with coeff_mu in the other variables."""
        idx = [self._index[v] for v in names]
        rest = tuple(v for v in self.vars if v not in names)
        ridx = [self._index[v] for v in rest]
        out: dict = {}
        for e, c in self._terms.items():
            key = tuple(e[i] for i in idx)
            out.setdefault(key, {})[tuple(e[i] for i in ridx)] = c
        return {k: MultiPoly(self.ring, rest, t) for k, t in out.items()}

    # -- text and JSON ---------------------------------------------------------
    def _monomial_str(self, exp) -> str:
        parts = []
        for v, k in zip(self.vars, exp):
            if k == 1:
                parts.append(v)
            elif k > 1:
                parts.append(f"{v}^{k}")
        return "*".join(parts)

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for exp, c in self.items():
            text = self.ring.format(c)
            mono = self._monomial_str(exp)
            neg = text.startswith("-")
            mag = text[1:] if neg else text
            if mono:
                body = mono if mag == "1" else f"{mag}*{mono}"
            else:
                body = mag
            if not out:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    def __repr__(self):
        return f"MultiPoly({self.ring!r}, {self.vars}, {str(self)!r})"

    def to_json(self) -> dict:
        return {
            "ring": self.ring.to_json(),
            "vars": list(self.vars),
            "terms": [
                {"exp": list(e), "coeff": self.ring.format(c)} for e, c in self.items()
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, obj) -> "MultiPoly":
        if isinstance(obj, str):
            obj = json.loads(obj)
        ring = ring_from_json(obj["ring"])
        vars = tuple(obj["vars"])
        terms = {}
        for t in obj["terms"]:
            e = tuple(t["exp"])
            if e in terms:
                raise ValueError(f"repeated exponent {e}")
            terms[e] = ring.parse(str(t["coeff"]))
        return cls(ring, vars, terms)

    @classmethod
    def parse(cls, text: str, ring=QQ, vars: Sequence[str] | None = None) -> "MultiPoly":
        tokens = _tokenize(text)
        terms_raw = _parse_terms(tokens)
        names: list = list(vars) if vars is not None else []
        if vars is None:
            for _, factors in terms_raw:
                for name, _k in factors:
                    if name not in names:
                        names.append(name)
        index = {v: i for i, v in enumerate(names)}
        out: dict = {}
        for coeff, factors in terms_raw:
            exp = [0] * len(names)
            for name, k in factors:
                if name not in index:
                    raise VariableError(f"undeclared variable {name!r}")
                exp[index[name]] += k
            c = ring.coerce(coeff) if not isinstance(coeff, Fraction) else _coerce_fraction(ring, coeff)
            key = tuple(exp)
            out[key] = out[key] + c if key in out else c
        return cls(ring, names, out)


def _coerce_fraction(ring, q: Fraction):
    if q.denominator == 1:
        return ring.coerce(q.numerator)
    if ring == QQ:
        return q
    if ring == ZZ:
        raise RingMismatchError(f"coefficient {q} is not an integer")
    return ring.coerce(q.numerator) / ring.coerce(q.denominator)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokenize(text: str) -> list:
    out = []
    for num, name, op in _TOKEN.findall(text):
        if num:
            out.append(("num", int(num)))
        elif name:
            out.append(("var", name))
        elif op.strip():
            if op not in "+-*/^":
                raise ValueError(f"unexpected character {op!r}")
            out.append(("op", op))
    return out


def _parse_terms(tokens: list) -> list:
    pos = 0
    terms = []

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    if not tokens:
        raise ValueError("empty polynomial text")
    sign = 1
    while True:
        kind, val = peek()
        if kind == "op" and val in "+-":
            sign = -1 if val == "-" else 1
            pos += 1
        elif terms:
            raise ValueError(f"expected '+' or '-' at token {pos}")
        coeff = Fraction(sign)
        factors = []
        while True:
            kind, val = peek()
            if kind == "num":
                pos += 1
                num = val
                if peek() == ("op", "/"):
                    pos += 1
                    kind2, den = peek()
                    if kind2 != "num":
                        raise ValueError("expected denominator after '/'")
                    pos += 1
                    coeff *= Fraction(num, den)
                else:
                    coeff *= num
            elif kind == "var":
                pos += 1
                k = 1
                if peek() == ("op", "^"):
                    pos += 1
                    kind2, k = peek()
                    if kind2 != "num":
                        raise ValueError("expected integer exponent after '^'")
                    pos += 1
                factors.append((val, k))
            else:
                raise ValueError(f"expected a coefficient or variable at token {pos}")
            if peek() == ("op", "*"):
                pos += 1
                continue
            break
        terms.append((coeff, factors))
        sign = 1
        if pos >= len(tokens):
            return terms


def iter_compositions(total: int, parts: int) -> Iterator[tuple]:
    """All k in N^parts with sum(k) == total, in descending lexicographic order.

    Stars-and-bars generator; memory is O(parts).
    """
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in iter_compositions(total - first, parts - 1):
            yield (first,) + rest
