import json
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from tschirnhaus.forms import radical_specialize, tschirnhaus_form
from tschirnhaus.multipoly import MultiPoly, VariableError, iter_compositions
from tschirnhaus.rings import GF, QQ, ZZ, RingMismatchError

VARS = ("x", "y", "z")
coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=7)


@st.composite
def polys(draw, ring=QQ, vars=VARS, max_terms=5, max_deg=3):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        exp = tuple(draw(st.integers(0, max_deg)) for _ in vars)
        c = draw(coeffs) if ring is QQ else draw(st.integers(-9, 9))
        terms[exp] = c
    return MultiPoly(ring, vars, terms)


points = st.fixed_dictionaries({v: coeffs for v in VARS})


def test_eval_examples():
    p = MultiPoly.parse("x^2 + y")
    assert p.eval({"x": 2, "y": 3}) == 7
    assert MultiPoly.zero(QQ, VARS).eval({}) == 0
    assert p(x=Fraction(1, 2), y=0) == Fraction(1, 4)


def test_eval_missing_variable():
    with pytest.raises(VariableError):
        MultiPoly.parse("x*y").eval({"x": 1})


def test_eval_form_on_radical_pencil():
    # T_1 for n = 5 at a = (0,0,0,0,1), b = (1,0,0,0,0): all p_1..p_4 vanish
    T1 = tschirnhaus_form(5, 1).body
    point = {f"a_{k}": int(k == 5) for k in range(1, 6)}
    point.update({f"b_{j}": int(j == 0) for j in range(5)})
    assert T1.eval(point) == 5


def test_partial_examples():
    x2y = MultiPoly.parse("x^2*y")
    assert x2y.partial("x") == MultiPoly.parse("2*x*y", vars=("x", "y"))
    assert MultiPoly.parse("7", vars=("x",)).partial("x").is_zero()


@pytest.mark.parametrize("n", [5, 7, 9])
def test_partials_of_odd_closed_form(n):
    spec = radical_specialize(tschirnhaus_form(n, 2)).specialize({"b_0": 0})
    a = MultiPoly.variable(ZZ, spec.vars, "a")
    for j in range(1, n):
        expected = a * MultiPoly.variable(ZZ, spec.vars, f"b_{n - j}") * (-2 * n)
        assert spec.partial(f"b_{j}") == expected


def test_specialize_examples():
    p = MultiPoly.parse("x^2 + y")
    assert p.specialize({"y": 1}) == MultiPoly.parse("x^2 + 1")
    assert MultiPoly.parse("x*y").specialize({"x": 0}).is_zero()


def test_specialize_polynomial_values_and_errors():
    p = MultiPoly.parse("x^2 + y", vars=("x", "y"))
    t = MultiPoly.parse("t + 1", vars=("t",))
    assert p.specialize({"x": t}, new_vars=("t", "y")) == MultiPoly.parse("t^2 + 2*t + 1 + y", vars=("t", "y"))
    with pytest.raises(VariableError):
        p.specialize({"w": 1})
    with pytest.raises(VariableError):
        p.specialize({"x": t})                 # t not declared in the result
    with pytest.raises(RingMismatchError):
        p.specialize({"x": MultiPoly.parse("t", ring=ZZ)}, new_vars=("t", "y"))


def test_t12_specializes_to_closed_form_n5():
    T2 = radical_specialize(tschirnhaus_form(5, 2)).specialize({"b_0": 0})
    expected = MultiPoly.parse("-10*a*b_1*b_4 - 10*a*b_2*b_3", ring=ZZ, vars=T2.vars)
    assert T2 == expected


def test_cross_ring_arithmetic_rejected():
    with pytest.raises(RingMismatchError):
        MultiPoly.parse("x", ring=ZZ) + MultiPoly.parse("x", ring=QQ)
    with pytest.raises(RingMismatchError):
        MultiPoly.parse("x", ring=GF(5)) * MultiPoly.parse("x", ring=GF(7))


def test_invariants():
    p = MultiPoly(QQ, ("x", "y"), {(1, 0): 0, (0, 1): Fraction(2, 4)})
    assert p.terms == {(0, 1): Fraction(1, 2)}
    with pytest.raises(ValueError):
        MultiPoly(QQ, ("x",), {(1, 0): 1})
    with pytest.raises(VariableError):
        MultiPoly(QQ, ("x", "x"))


def test_graded_lex_printing():
    p = MultiPoly.parse("y + x^2 + x*y - 1/2 + 3*x", vars=("x", "y"))
    assert str(p) == "x^2 + x*y + 3*x + y - 1/2"


def test_finite_field_coefficients():
    p = MultiPoly.parse("3*x + 5", ring=GF(7))
    assert p.eval({"x": 1}) == GF(7)(1)
    assert str(p * 3) == "2*x + 1"


@given(polys(), polys(), points)
def test_eval_is_a_ring_homomorphism(p, q, v):
    assert (p * q).eval(v) == p.eval(v) * q.eval(v)
    assert (p + q).eval(v) == p.eval(v) + q.eval(v)
    assert (p - q).eval(v) == p.eval(v) - q.eval(v)


@given(polys(), polys(), polys())
def test_polynomial_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p * q == q * p


@given(polys())
def test_partials_commute(p):
    assert p.partial("x").partial("y") == p.partial("y").partial("x")


@given(polys(), points)
def test_specialize_then_eval(p, v):
    half = p.specialize({"x": v["x"]})
    assert half.eval({"y": v["y"], "z": v["z"]}) == p.eval(v)


@given(polys())
def test_text_roundtrip(p):
    assert MultiPoly.parse(str(p), vars=VARS) == p
    assert list(MultiPoly.parse(str(p), vars=VARS).items()) == list(p.items())


@given(polys(ring=ZZ))
def test_json_roundtrip(p):
    back = MultiPoly.from_json(json.loads(p.dumps()))
    assert back == p and back.ring is ZZ


@settings(max_examples=30)
@given(polys())
def test_matches_sympy_expansion(p):
    x, y, z = sympy.symbols("x y z")
    expr = sympy.sympify(str(p).replace("^", "**"), locals={"x": x, "y": y, "z": z})
    sq = MultiPoly.parse(str(p * p), vars=VARS)
    assert sympy.expand(expr**2 - sympy.sympify(str(sq).replace("^", "**"))) == 0


def test_compositions_descending_and_complete():
    comps = list(iter_compositions(3, 3))
    assert len(comps) == 10
    assert comps == sorted(comps, reverse=True)
    assert all(sum(c) == 3 for c in comps)


def test_parse_rejects_garbage():
    for bad in ["x +", "2**x", "x^", "1/0", "(x)"]:
        with pytest.raises((ValueError, ZeroDivisionError)):
            MultiPoly.parse(bad)
