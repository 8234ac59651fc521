import itertools
import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import linear_sum_assignment

from tschirnhaus.forms import (
    CompleteIntersectionSpec, TschirnhausVector, coefficients_vanish, complete_intersection,
    iter_form_text, membership, multinomial, radical_specialize, transform_coeffs,
    transform_coeffs_oracle, transformed_power_sums, tschirnhaus_form,
)
from tschirnhaus.multipoly import MultiPoly
from tschirnhaus.rings import GF, QQ, ZZ
from tschirnhaus.symmetric import power_sums_from_coeffs, roots_of

fracs = st.fractions(min_value=-6, max_value=6, max_denominator=5)


def radical_t12_closed_form(n):
    """T_2 on x^n + a with b_0 = 0, written out term by term."""
    if n % 2:
        inner = " + ".join(f"b_{i}*b_{n - i}" for i in range(1, (n - 1) // 2 + 1))
        return f"-{2 * n}*a*({inner})"
    terms = [f"b_{n // 2}^2"] + [f"2*b_{i}*b_{n - i}" for i in range(1, n // 2)]
    return f"-{n}*a*(" + " + ".join(terms) + ")"


def linear_t12_closed_form(n):
    """T_2 on x^n + a*x with b_0 = b_{n-1} = 0."""
    if n % 2 == 0:
        inner = " + ".join(f"b_{i}*b_{n - 1 - i}" for i in range(1, n // 2))
        return f"-{2 * (n - 1)}*a*({inner})"
    terms = [f"b_{(n - 1) // 2}^2"] + [f"2*b_{i}*b_{n - 1 - i}" for i in range(1, (n - 3) // 2 + 1)]
    return f"-{n - 1}*a*(" + " + ".join(terms) + ")"


def _expand_text(text, vars):
    # the closed forms contain one bracket; distribute it before parsing
    head, inner = text.split("*(", 1)
    inner = inner.rstrip(")")
    scale = MultiPoly.parse(head, ring=ZZ, vars=vars)
    return scale * MultiPoly.parse(inner, ring=ZZ, vars=vars)


def test_linear_form_examples():
    T1 = tschirnhaus_form(2, 1).body
    assert str(T1) == "-b_1*a_1 + 2*b_0"
    for n in range(1, 7):
        T1 = tschirnhaus_form(n, 1).body
        ps = power_sums_from_coeffs(MultiPoly.gens(ZZ, T1.vars)[n:], n - 1).p
        b = MultiPoly.gens(ZZ, T1.vars)[:n]
        expected = b[0] * n
        for i in range(1, n):
            expected = expected + ps[i] * b[i]
        assert T1 == expected


def test_t12_on_pencil_n5():
    T2 = radical_specialize(tschirnhaus_form(5, 2, reduced=True))
    assert str(T2) == "-10*b_1*b_4*a - 10*b_2*b_3*a"
    assert str(radical_specialize(tschirnhaus_form(5, 1))) == "5*b_0"


@pytest.mark.parametrize("n", range(4, 11))
def test_radical_closed_form(n):
    got = radical_specialize(tschirnhaus_form(n, 2, reduced=True))
    assert got == _expand_text(radical_t12_closed_form(n), got.vars)


@pytest.mark.parametrize("n", range(4, 11))
def test_linear_closed_form(n):
    form = radical_specialize(tschirnhaus_form(n, 2, reduced=True), "linear")
    got = form.specialize({f"b_{n - 1}": 0})
    assert got == _expand_text(linear_t12_closed_form(n), got.vars)
    lin = radical_specialize(tschirnhaus_form(n, 1, reduced=True), "linear")
    assert str(lin) == f"-{n - 1}*b_{n - 1}*a"


@pytest.mark.parametrize("n,i", [(4, 3), (5, 3), (5, 4), (6, 3), (7, 4)])
def test_t1i_closed_form_on_pencil(n, i):
    # n * sum_l (-a)^l * sum_{|k|=i, ||k||=l*n} multinomial(i; k) b^k, over b_1..b_{n-1}
    got = radical_specialize(tschirnhaus_form(n, i, reduced=True))
    names = got.vars
    terms = {}
    for kappa in itertools.product(range(i + 1), repeat=n - 1):
        if sum(kappa) != i:
            continue
        w = sum((j + 1) * k for j, k in enumerate(kappa))
        if w % n == 0:
            ell = w // n
            coef = n * (-1) ** ell * math.factorial(i)
            for k in kappa:
                coef //= math.factorial(k)
            terms[kappa + (ell,)] = coef
    assert got == MultiPoly(ZZ, names, terms)


def test_forms_are_homogeneous_with_multinomial_coefficients():
    for n, i in [(3, 2), (4, 3), (5, 2), (3, 4)]:
        form = tschirnhaus_form(n, i)
        body = form.body
        assert body.is_homogeneous(form.b_names, i)
        ps = power_sums_from_coeffs(MultiPoly.gens(ZZ, body.vars)[n:], form.kmax).p
        nb = len(form.b_names)
        for kappa, mult, w in form.iter_kappa():
            assert mult == multinomial(kappa)
            part = body.coefficients_in(form.b_names).get(kappa)
            expected = ps[w] * mult
            assert (part or MultiPoly.zero(ZZ, body.vars)) == expected.embed(body.vars) or \
                part.embed(body.vars) == expected
            assert len(kappa) == nb


def test_complete_intersections():
    forms = complete_intersection(CompleteIntersectionSpec(9, (1, 2, 3, 4)))
    assert [f.i for f in forms] == [1, 2, 3, 4]
    assert len(complete_intersection(CompleteIntersectionSpec(2, (1,)))) == 1
    f1 = complete_intersection(CompleteIntersectionSpec(5, (1, 2), reduced=True))[0].body
    ps = power_sums_from_coeffs(MultiPoly.gens(ZZ, f1.vars)[4:], 4).p
    b = MultiPoly.gens(ZZ, f1.vars)[:4]
    assert f1 == sum((ps[i + 1] * b[i] for i in range(4)), MultiPoly.zero(ZZ, f1.vars))
    with pytest.raises(ValueError):
        CompleteIntersectionSpec(5, (2, 1))


def test_transform_examples():
    a = (-3, 2)
    for b, c in [((0, 1), (-3, 2)), ((1, 0), (-2, 1)), ((0, 2), (-6, 8))]:
        assert transform_coeffs(a, b).a == c
        assert transform_coeffs_oracle(a, b).a == c
        assert str(transform_coeffs(a, b)) == str(transform_coeffs_oracle(a, b))


@pytest.mark.parametrize("n", [2, 3, 5])
def test_constant_transformation(n):
    beta = Fraction(3, 2)
    a = [Fraction(k + 1, 2) for k in range(n)]
    c = transform_coeffs(a, [beta] + [0] * (n - 1)).a
    assert c == tuple(math.comb(n, k) * (-beta) ** k for k in range(1, n + 1))


@st.composite
def instances(draw, nmax=6):
    n = draw(st.integers(2, nmax))
    a = [draw(fracs) for _ in range(n)]
    b = [draw(fracs) for _ in range(n)]
    return a, b


@given(instances())
def test_oracle_equivalence(inst):
    a, b = inst
    assert transform_coeffs(a, b) == transform_coeffs_oracle(a, b)


@given(instances(), fracs.filter(bool))
def test_homogeneity_in_b(inst, lam):
    a, b = inst
    c = transform_coeffs(a, b).a
    cl = transform_coeffs(a, [lam * x for x in b]).a
    assert all(cl[k] == lam ** (k + 1) * c[k] for k in range(len(a)))


@given(instances(nmax=4), st.integers(1, 4))
def test_form_matches_transformed_power_sum(inst, i):
    a, b = inst
    form = tschirnhaus_form(len(a), i)
    c = transform_coeffs(a, b)
    p_i = power_sums_from_coeffs(c, i).p[i]
    point = dict(zip(form.b_names, b)) | {f"a_{k + 1}": x for k, x in enumerate(a)}
    assert form.body.map_coefficients(Fraction, QQ).eval(point) == p_i
    assert form.evaluate(a, b) == p_i


@given(instances(nmax=4))
def test_membership_matches_form_vanishing(inst):
    a, b = inst
    n = len(a)
    # move b onto T_1 by fixing b_0
    ps = power_sums_from_coeffs(a, n).p
    b = [-sum(ps[j] * b[j] for j in range(1, n)) / n] + list(b[1:])
    assert membership(a, b, (1,))
    for degs in [(1,), (1, 2), (2,), (1, 3)]:
        by_form = all(tschirnhaus_form(n, d).evaluate(a, b) == 0 for d in degs)
        assert membership(a, b, degs) == by_form
    assert coefficients_vanish(a, b, 1)
    assert not membership(a, [b[0] + 1] + b[1:], (1,))


def test_root_correspondence():
    rng = random.Random(17)
    with mpmath.workprec(200):
        for _ in range(40):
            n = rng.randint(2, 6)
            a = [rng.randint(-8, 8) for _ in range(n)]
            b = [Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(n)]
            c = transform_coeffs(a, b).a
            z = roots_of(a)
            y = [mpmath.polyval([mpmath.mpf(x.numerator) / x.denominator for x in b[::-1]], zi) for zi in z]
            w = roots_of(c)
            cost = [[float(abs(u - v)) for v in w] for u in y]
            rows, cols = linear_sum_assignment(cost)
            # clustered roots lose accuracy, so compare relative to root size
            assert max(cost[r][c_] / max(1.0, abs(complex(y[r]))) for r, c_ in zip(rows, cols)) < 1e-8


def test_oracle_works_in_small_characteristic():
    F = GF(3)
    a = [F(1), F(2), F(0), F(1)]
    b = [F(0), F(1), F(1), F(0)]
    c = transform_coeffs_oracle(a, b)
    # p_1 and p_2 of c agree with the division-free transformed power sums
    pc = power_sums_from_coeffs(c.a, 2).p
    pt = transformed_power_sums(a, b, 2)
    assert pc[1] == pt[1] and pc[2] == pt[2]


def test_oracle_cap_and_length_checks():
    with pytest.raises(ValueError):
        transform_coeffs_oracle([0] * 9, [0, 1] + [0] * 7)
    with pytest.raises(ValueError):
        transform_coeffs([1, 2], [1])


def test_tschirnhaus_vector():
    assert TschirnhausVector.parse("1,0,0").is_nondegenerate() is False
    assert TschirnhausVector((0, 1)).is_nondegenerate()
    with pytest.raises(ValueError):
        TschirnhausVector((1, 2), reduced=True)


def test_text_stream_parses_back():
    for n, i in [(2, 2), (3, 2), (3, 3), (4, 2)]:
        form = tschirnhaus_form(n, i)
        text = "".join(iter_form_text(form))
        assert MultiPoly.parse(text, ring=ZZ, vars=form.vars) == form.body


def test_unexpanded_text():
    text = "".join(iter_form_text(tschirnhaus_form(3, 2), expand=False))
    assert text == "3*b_0^2 + 2*p_1*b_0*b_1 + 2*p_2*b_0*b_2 + p_2*b_1^2 + 2*p_3*b_1*b_2 + p_4*b_2^2"


def test_nonic_quartic_form_streams():
    form = tschirnhaus_form(9, 4)
    kappas = sum(1 for _ in form.iter_kappa())
    assert kappas == math.comb(12, 4)
    count = sum(1 for _ in form.iter_terms())
    assert count == 197273
