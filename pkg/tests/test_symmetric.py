import random
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from tschirnhaus.multipoly import MultiPoly
from tschirnhaus.rings import GF, NonInvertibleError
from tschirnhaus.symmetric import (
    CoeffVector, coeffs_from_power_sums, generic_power_sums, power_sums_from_coeffs,
    power_sums_from_roots, roots_of,
)

fracs = st.fractions(min_value=-30, max_value=30, max_denominator=9)


def test_two_roots_example():
    assert power_sums_from_coeffs((-3, 2), 3).p == (2, 3, 5, 9)
    assert coeffs_from_power_sums((2, 3, 5)).a == (-3, 2)


def test_zero_polynomial():
    assert power_sums_from_coeffs((0, 0, 0, 0), 7).p == (4,) + (0,) * 7
    assert coeffs_from_power_sums((4, 0, 0, 0, 0)).a == (0, 0, 0, 0)


@pytest.mark.parametrize("a", [1, -2, Fraction(3, 7)])
def test_radical_quintic(a):
    p = power_sums_from_coeffs((0, 0, 0, 0, a), 15).p
    for k, pk in enumerate(p[1:], start=1):
        if k % 5:
            assert pk == 0
    assert p[5] == -5 * a
    assert p[10] == 5 * a * a


def test_power_sums_from_roots():
    assert [complex(x) for x in power_sums_from_roots([1, 2], 2)] == [2, 3, 5]
    assert [complex(x) for x in power_sums_from_roots([0, 0, 0], 2)] == [3, 0, 0]
    roots = [mpmath.root(-1, 5, k) for k in range(5)]
    got = power_sums_from_roots(roots, 5)
    for x, y in zip(got, [5, 0, 0, 0, 0, -5]):
        assert abs(x - y) < 1e-12


def test_matches_sympy_newton():
    # independent oracle: expand sum of root powers symbolically for n = 3
    x = sympy.symbols("x1:4")
    e = [sympy.Integer(1)]
    for k in range(1, 4):
        e.append(sum(sympy.prod(c) for c in __import__("itertools").combinations(x, k)))
    a = [(-1) ** k * e[k] for k in range(1, 4)]
    gens = generic_power_sums(3, 6)
    names = ("a_1", "a_2", "a_3")
    for k in range(7):
        poly = gens[k]
        expr = sum(
            c * sympy.prod(a[i] ** ex for i, ex in enumerate(exp)) for exp, c in poly.items()
        ) if poly else 0
        assert sympy.expand(expr - sum(xi**k for xi in x)) == 0
        assert poly.vars == names


@given(st.lists(fracs, min_size=1, max_size=8))
def test_newton_roundtrip(a):
    a = tuple(Fraction(x) for x in a)
    p = power_sums_from_coeffs(a, len(a))
    assert coeffs_from_power_sums(p).a == a


@given(st.lists(fracs, min_size=1, max_size=6), fracs.filter(bool))
def test_weighted_scaling(a, lam):
    n = len(a)
    scaled = [lam ** (k + 1) * x for k, x in enumerate(a)]
    p = power_sums_from_coeffs(a, 2 * n).p
    q = power_sums_from_coeffs(scaled, 2 * n).p
    assert all(q[k] == lam**k * p[k] for k in range(2 * n + 1))


def test_root_consistency():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(1, 6)
        a = [rng.randint(-9, 9) for _ in range(n)]
        with mpmath.workprec(200):
            roots = roots_of(a)
            num = power_sums_from_roots(roots, 2 * n)
        exact = power_sums_from_coeffs(a, 2 * n).p
        for k in range(2 * n + 1):
            assert abs(num[k] - exact[k]) < 1e-8 * max(1, abs(exact[k]))


def test_generic_power_sums_are_integral_polys():
    p = generic_power_sums(2, 3)
    assert str(p[1]) == "-a_1"
    assert str(p[2]) == "a_1^2 - 2*a_2"
    back = coeffs_from_power_sums(p, 2).a
    assert list(back) == MultiPoly.gens(back[0].ring, ("a_1", "a_2"))


def test_small_characteristic_inverse_fails():
    F = GF(3)
    p = power_sums_from_coeffs([F(1), F(2), F(0)], 3)
    with pytest.raises(NonInvertibleError):
        coeffs_from_power_sums(p)


def test_coeff_vector_text():
    v = CoeffVector.parse("-3, 2/4, 5")
    assert v.a == (-3, Fraction(1, 2), 5)
    assert str(v) == "-3,1/2,5"
    with pytest.raises(ValueError):
        CoeffVector.parse("1,,2")
    with pytest.raises(ValueError):
        CoeffVector(())
    with pytest.raises(ValueError):
        coeffs_from_power_sums((3, 0, 0))
